/*!
  \file qm.hpp
  \brief Two-level minimization: prime implicants plus a greedy cover

  Cube strings use one character per input, '0'/'1'/'-', with input p mapped
  to bit (nvars-1-p) of a minterm index, matching the truth-table row
  encoding.
*/

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bmfsyn
{

/*! \brief True when the cube evaluates to one on the given minterm. */
bool cube_covers( const std::string& cube, uint32_t minterm );

/*! \brief All prime implicants of the on-set (no don't-cares). */
std::vector<std::string> prime_implicants( const std::vector<uint32_t>& on_set, uint32_t nvars );

/*! \brief Minimized on-set cover: primes selected greedily by the number of
 * still-uncovered minterms they cover, ties to the lexicographically smaller
 * cube. Empty on-set gives an empty cover; the full on-set gives the single
 * all-dash cube. */
std::vector<std::string> qm_minimize( const std::vector<uint32_t>& on_set, uint32_t nvars );

} // namespace bmfsyn
