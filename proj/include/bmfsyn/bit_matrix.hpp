/*!
  \file bit_matrix.hpp
  \brief Bit-packed Boolean matrices with semiring/field products and distances
*/

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace bmfsyn
{

/*! \brief Addition rule used when multiplying Boolean matrices.
 *
 * `or_semiring` adds with logical OR, `xor_field` adds with logical XOR
 * (plain GF(2) arithmetic). Multiplication is logical AND in both cases.
 */
enum class semiring
{
  or_semiring,
  xor_field
};

std::string to_string( semiring s );

/*! \brief Dense Boolean matrix, bit-packed row-major into 64-bit words.
 *
 * Bits beyond `cols()` in the last word of a row are kept zero, so whole-word
 * operations (XOR, popcount, OR-accumulate) need no masking.
 */
class bit_matrix
{
public:
  bit_matrix() = default;
  bit_matrix( uint32_t rows, uint32_t cols );

  uint32_t rows() const { return rows_; }
  uint32_t cols() const { return cols_; }

  bool get( uint32_t r, uint32_t c ) const;
  void set( uint32_t r, uint32_t c, bool v );

  /*! \brief Number of 64-bit words per packed row. */
  uint32_t words_per_row() const { return wpr_; }
  uint64_t* row_data( uint32_t r ) { return bits_.data() + static_cast<size_t>( r ) * wpr_; }
  const uint64_t* row_data( uint32_t r ) const { return bits_.data() + static_cast<size_t>( r ) * wpr_; }

  uint32_t count_ones() const;

  bool operator==( const bit_matrix& other ) const;
  bool operator!=( const bit_matrix& other ) const { return !( *this == other ); }

  static bit_matrix identity( uint32_t n );

  /*! \brief Uniform random matrix with given one-density, for tests. */
  static bit_matrix random( uint32_t rows, uint32_t cols, std::mt19937_64& rng, double density = 0.5 );

  /*! \brief Parse the text dump format: "rows cols" then rows of 0/1 chars. */
  static bit_matrix from_text( const std::string& text );
  std::string to_text() const;

private:
  uint32_t rows_ = 0;
  uint32_t cols_ = 0;
  uint32_t wpr_ = 0;
  std::vector<uint64_t> bits_;
};

/*! \brief Per-output-column weights for distance computations. */
struct weight_vector
{
  std::vector<double> w;

  /*! \brief All-ones weights: weighted distance degenerates to Hamming. */
  static weight_vector uniform( uint32_t cols );

  /*! \brief Powers-of-two weights, column 0 most significant: w_j = 2^(m-1-j). */
  static weight_vector pow2_msb_first( uint32_t cols );

  /*! \brief Enforce the invariants: length matches, entries >= 0, not all zero. */
  void validate( uint32_t cols ) const;
};

/*! \brief Boolean matrix product under the given semiring.
 *
 * result(i,j) = sum over l of B(i,l) AND C(l,j), with sum = OR or XOR.
 * Throws validation_error on inner-dimension mismatch.
 */
bit_matrix bool_product( const bit_matrix& b, const bit_matrix& c, semiring s );

/*! \brief Number of positions where the two matrices differ. */
uint64_t hamming_distance( const bit_matrix& a, const bit_matrix& b );

/*! \brief Column-weighted mismatch count: sum of w_j over differing cells (i,j). */
double weighted_distance( const bit_matrix& a, const bit_matrix& b, const weight_vector& w );

} // namespace bmfsyn
