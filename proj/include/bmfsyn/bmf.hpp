/*!
  \file bmf.hpp
  \brief Greedy Boolean matrix factorization with weighted cover objectives

  Factors a Boolean matrix M (k x m) into B (k x f) and C (f x m) such that
  the Boolean product BC approximates M. Candidate basis rows come from
  column-association confidences above a threshold tau; basis vectors are
  selected greedily by weighted cover gain. An exhaustive oracle provides
  ground truth for small instances.
*/

#pragma once

#include <cstdint>
#include <vector>

#include "bmfsyn/bit_matrix.hpp"

namespace bmfsyn
{

/*! \brief One factorization outcome at a fixed degree. */
struct factor_result
{
  bit_matrix b;         //!< k x f compressor table
  bit_matrix c;         //!< f x m decompressor table
  uint32_t degree = 0;  //!< inner dimension f
  double tau = 1.0;     //!< association threshold that produced this result
  double error = 0.0;   //!< weighted mismatch of bool_product(b, c) vs the input
  semiring ring = semiring::or_semiring;
};

enum class weight_mode
{
  uniform,
  pow2
};

/*! \brief Configuration shared by the factorization entry points.
 *
 * `weights` may be left empty, in which case the effective weights are derived
 * from `wmode` for the column count at hand (pow2 is the default: mismatches
 * on more significant output columns cost more).
 */
struct asso_config
{
  std::vector<double> taus{ 0.6, 0.7, 0.8, 0.9, 1.0 };
  semiring ring = semiring::or_semiring;
  weight_mode wmode = weight_mode::pow2;
  weight_vector weights{};
  bool allow_zero_gain = false;

  weight_vector effective_weights( uint32_t cols ) const;
  void validate() const;
};

/*! \brief Candidate basis rows derived from column associations.
 *
 * One candidate per column i of M: bit j is set iff the confidence
 * <c_i,c_j> / <c_i,c_i> reaches tau. An all-zero column contributes its unit
 * row. Duplicates are removed, first occurrence wins. Rows are returned as
 * bit masks (column j at bit j); M must have at most 32 columns.
 */
std::vector<uint32_t> association_candidates( const bit_matrix& m, double tau );

/*! \brief Greedy factorization at degree f with a single threshold tau.
 *
 * f = M.cols() returns the exact fast path B = M, C = I. Otherwise basis
 * vectors are selected one at a time: for every candidate, each row's B bit is
 * set iff it strictly improves that row's weighted cover, and the candidate
 * with the largest total gain wins (smaller candidate index on ties). When the
 * best gain is no longer positive the loop stops early and the remaining
 * degrees stay zero, so the reported error is monotone in the consumed degree.
 */
factor_result asso_factorize( const bit_matrix& m, uint32_t f, double tau, const asso_config& cfg );

/*! \brief Best asso_factorize result over every tau in cfg.taus (ties: smaller tau). */
factor_result factorize_best( const bit_matrix& m, uint32_t f, const asso_config& cfg );

/*! \brief factorize_best for every degree 1..f_max in one pass.
 *
 * Exploits that the greedy selection at degree f is a prefix of the selection
 * at any larger degree, so one run per tau profiles all degrees. Entry [f-1]
 * equals factorize_best(m, f, cfg).
 */
std::vector<factor_result> factorize_sweep( const bit_matrix& m, uint32_t f_max, const asso_config& cfg );

/*! \brief Exhaustive minimum-error factorization for test-scale instances.
 *
 * Enumerates every B and, per output column, every combination of basis rows.
 * Requires M.rows() * f <= 24. Ties resolve to the lexicographically smallest
 * (B, C), read row-major for B and column-major for C.
 */
factor_result oracle_factorize( const bit_matrix& m, uint32_t f, semiring s, const weight_vector& w );

} // namespace bmfsyn
