#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "bmfsyn/bit_matrix.hpp"
#include "bmfsyn/netlist.hpp"

namespace bmfsyn::test
{

/*! \brief Naive double-loop Hamming recount, the oracle for bit_matrix distances. */
uint64_t loop_hamming( const bit_matrix& a, const bit_matrix& b );

/*! \brief Naive weighted mismatch recount. */
double loop_weighted( const bit_matrix& a, const bit_matrix& b, const std::vector<double>& w );

/*! \brief Triple-loop Boolean product over explicit get() calls. */
bit_matrix loop_product( const bit_matrix& b, const bit_matrix& c, semiring s );

/*! \brief Random combinational netlist with roughly `gates` nodes. */
netlist random_netlist( uint32_t num_inputs, uint32_t gates, uint64_t seed );

/*! \brief Functional equality by exhaustive sweep (inputs capped at 20). */
bool exhaustive_equivalent( const netlist& a, const netlist& b );

/*! \brief Random input vector for a netlist. */
std::vector<bool> random_inputs( const netlist& n, std::mt19937_64& rng );

/*! \brief Unsigned value of named nets in an assignment, MSB first. */
uint64_t word_value( const std::vector<std::string>& bits_msb_first,
                     const std::vector<std::string>& port_names, const std::vector<bool>& values );

/*! \brief Copy of the netlist with one primary output inverted. */
netlist invert_output( const netlist& n, const std::string& output );

/*! \brief Copy of the netlist with the named outputs forced to constant zero. */
netlist force_zero_outputs( const netlist& n, const std::vector<std::string>& outputs );

/*! \brief Rename nets: `fixed` maps ports explicitly, all other nets get the
 * prefix. Port lists are remapped with the same table. */
netlist rename_nets( const netlist& n, const std::unordered_map<std::string, std::string>& fixed,
                     const std::string& prefix );

} // namespace bmfsyn::test
