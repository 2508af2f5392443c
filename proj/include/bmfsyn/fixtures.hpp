/*!
  \file fixtures.hpp
  \brief Generated benchmark netlists

  Deterministic builders for the arithmetic and application-style circuits the
  test suite and CLI examples run on: ripple-carry adders, an array
  multiplier, an add/subtract butterfly, a sum-of-absolute-differences
  datapath, and small toy blocks. Multi-bit ports use LSB index 0 net names
  (a0, a1, ...); primary outputs are listed most significant first, so the
  default single-word interpretation reads them as the natural unsigned
  value.
*/

#pragma once

#include <cstdint>
#include <string>

#include "bmfsyn/netlist.hpp"

namespace bmfsyn
{

/*! \brief n-bit ripple-carry adder: inputs a0.., b0..; outputs s{n}..s0. */
netlist make_ripple_adder( uint32_t bits );

/*! \brief n x n array multiplier: outputs p{2n-1}..p0. */
netlist make_array_multiplier( uint32_t bits );

/*! \brief Butterfly stage: s = a + b and d = a - b (two's complement),
 * each n+1 bits. */
netlist make_butterfly( uint32_t bits );

/*! \brief Sum of absolute differences over `pairs` operand pairs of `bits`
 * bits each. */
netlist make_sad( uint32_t bits, uint32_t pairs );

/*! \brief Fixed 4-input, 4-output mixed-gate block. */
netlist make_toy4x4();

netlist make_majority3();

netlist make_xor_chain( uint32_t bits );

/*! \brief Builder by name: adder8, adder32, mult8, butterfly, sad, toy4x4,
 * majority3. Throws parse_error for unknown names. */
netlist make_fixture( const std::string& name );

} // namespace bmfsyn
