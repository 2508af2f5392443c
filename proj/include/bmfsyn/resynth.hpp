/*!
  \file resynth.hpp
  \brief Hardware from factorizations: compressor, decompressor, area proxy

  A factorization (B, C) of a subcircuit truth table maps to a cascade of two
  blocks: the compressor realizes the k-input, f-output truth table B as
  two-level logic, and the decompressor expands the f intermediate signals to
  the m outputs with OR (semiring) or XOR (field) networks selected by C.
*/

#pragma once

#include <cstdint>

#include "bmfsyn/bit_matrix.hpp"
#include "bmfsyn/bmf.hpp"
#include "bmfsyn/netlist.hpp"

namespace bmfsyn
{

/*! \brief Technology-independent cost in two-input-gate equivalents.
 *
 * Primitives of arity n cost n-1; NOT/BUF/CONST cost 0; a PLA node costs
 * (literals) + (cubes - 1), except single-literal single-cube nodes which are
 * wires or inverters and cost 0.
 */
struct area_cost
{
  double two_input_gate_equivalents = 0.0;
};

area_cost area_proxy( const netlist& n );

/*! \brief Two-level circuit whose exhaustive truth table is B.
 *
 * B must have 2^k rows; inputs are named x0..x{k-1} (x0 is the most
 * significant row-index bit), outputs y0..y{f-1}. Each output is minimized
 * with Quine-McCluskey and emitted as one PLA node (or a constant, buffer, or
 * inverter when the cover degenerates).
 */
netlist compressor_from_b( const bit_matrix& b, uint32_t k );

/*! \brief OR/XOR network realizing C: output j combines the inputs l with
 * C(l,j) = 1. No selected input yields constant 0, one yields a buffer,
 * more yield a balanced tree of two-input gates. */
netlist decompressor_from_c( const bit_matrix& c, semiring s );

struct approx_subcircuit
{
  netlist circuit;    //!< compressor-decompressor cascade on the original port names
  bit_matrix truth;   //!< reconstruction bool_product(B, C); equals the cascade's truth table
  factor_result factors;
};

/*! \brief Factorize a subcircuit at degree f and resynthesize it.
 *
 * Degree f = m returns an exact (error-free) two-level re-implementation.
 */
approx_subcircuit approximate_subcircuit( const netlist& sub, uint32_t f, const asso_config& cfg,
                                          uint32_t max_inputs = 10 );

} // namespace bmfsyn
