#include "bmfsyn/bit_matrix.hpp"

#include <bit>
#include <cstring>
#include <sstream>

#include "bmfsyn/common.hpp"

namespace bmfsyn
{

std::string to_string( semiring s )
{
  return s == semiring::or_semiring ? "or" : "xor";
}

bit_matrix::bit_matrix( uint32_t rows, uint32_t cols )
    : rows_( rows ), cols_( cols ), wpr_( ( cols + 63u ) / 64u )
{
  bits_.assign( static_cast<size_t>( rows_ ) * wpr_, 0u );
}

bool bit_matrix::get( uint32_t r, uint32_t c ) const
{
  if ( r >= rows_ || c >= cols_ )
  {
    throw validation_error( "bit_matrix::get out of range" );
  }
  return ( row_data( r )[c >> 6] >> ( c & 63u ) ) & 1u;
}

void bit_matrix::set( uint32_t r, uint32_t c, bool v )
{
  if ( r >= rows_ || c >= cols_ )
  {
    throw validation_error( "bit_matrix::set out of range" );
  }
  uint64_t& word = row_data( r )[c >> 6];
  const uint64_t mask = uint64_t( 1 ) << ( c & 63u );
  word = v ? ( word | mask ) : ( word & ~mask );
}

uint32_t bit_matrix::count_ones() const
{
  uint32_t n = 0;
  for ( uint64_t w : bits_ )
  {
    n += std::popcount( w );
  }
  return n;
}

bool bit_matrix::operator==( const bit_matrix& other ) const
{
  return rows_ == other.rows_ && cols_ == other.cols_ && bits_ == other.bits_;
}

bit_matrix bit_matrix::identity( uint32_t n )
{
  bit_matrix m( n, n );
  for ( uint32_t i = 0; i < n; ++i )
  {
    m.set( i, i, true );
  }
  return m;
}

bit_matrix bit_matrix::random( uint32_t rows, uint32_t cols, std::mt19937_64& rng, double density )
{
  bit_matrix m( rows, cols );
  std::bernoulli_distribution bit( density );
  for ( uint32_t r = 0; r < rows; ++r )
  {
    for ( uint32_t c = 0; c < cols; ++c )
    {
      if ( bit( rng ) )
      {
        m.set( r, c, true );
      }
    }
  }
  return m;
}

bit_matrix bit_matrix::from_text( const std::string& text )
{
  std::istringstream in( text );
  uint32_t rows = 0, cols = 0;
  if ( !( in >> rows >> cols ) )
  {
    throw parse_error( "bit_matrix: missing 'rows cols' header" );
  }
  bit_matrix m( rows, cols );
  std::string line;
  for ( uint32_t r = 0; r < rows; ++r )
  {
    if ( !( in >> line ) || line.size() != cols )
    {
      throw parse_error( "bit_matrix: row " + std::to_string( r ) + " malformed" );
    }
    for ( uint32_t c = 0; c < cols; ++c )
    {
      if ( line[c] != '0' && line[c] != '1' )
      {
        throw parse_error( "bit_matrix: row " + std::to_string( r ) + " has non-binary character" );
      }
      m.set( r, c, line[c] == '1' );
    }
  }
  return m;
}

std::string bit_matrix::to_text() const
{
  std::ostringstream out;
  out << rows_ << ' ' << cols_ << '\n';
  for ( uint32_t r = 0; r < rows_; ++r )
  {
    for ( uint32_t c = 0; c < cols_; ++c )
    {
      out << ( get( r, c ) ? '1' : '0' );
    }
    out << '\n';
  }
  return out.str();
}

weight_vector weight_vector::uniform( uint32_t cols )
{
  return { std::vector<double>( cols, 1.0 ) };
}

weight_vector weight_vector::pow2_msb_first( uint32_t cols )
{
  weight_vector wv;
  wv.w.resize( cols );
  for ( uint32_t j = 0; j < cols; ++j )
  {
    wv.w[j] = std::ldexp( 1.0, static_cast<int>( cols - 1 - j ) );
  }
  return wv;
}

void weight_vector::validate( uint32_t cols ) const
{
  if ( w.size() != cols )
  {
    throw validation_error( "weight vector length " + std::to_string( w.size() ) +
                            " does not match column count " + std::to_string( cols ) );
  }
  bool any_positive = false;
  for ( double x : w )
  {
    if ( x < 0.0 )
    {
      throw validation_error( "weight vector has a negative entry" );
    }
    any_positive |= ( x > 0.0 );
  }
  if ( !any_positive )
  {
    throw validation_error( "weight vector is all zero" );
  }
}

bit_matrix bool_product( const bit_matrix& b, const bit_matrix& c, semiring s )
{
  if ( b.cols() != c.rows() )
  {
    throw validation_error( "bool_product: inner dimensions disagree, left is " +
                            std::to_string( b.rows() ) + "x" + std::to_string( b.cols() ) +
                            ", right is " + std::to_string( c.rows() ) + "x" +
                            std::to_string( c.cols() ) );
  }
  bit_matrix result( b.rows(), c.cols() );
  const uint32_t wpr = result.words_per_row();
  for ( uint32_t i = 0; i < b.rows(); ++i )
  {
    uint64_t* out = result.row_data( i );
    for ( uint32_t l = 0; l < b.cols(); ++l )
    {
      if ( !b.get( i, l ) )
      {
        continue;
      }
      const uint64_t* src = c.row_data( l );
      if ( s == semiring::or_semiring )
      {
        for ( uint32_t wd = 0; wd < wpr; ++wd )
        {
          out[wd] |= src[wd];
        }
      }
      else
      {
        for ( uint32_t wd = 0; wd < wpr; ++wd )
        {
          out[wd] ^= src[wd];
        }
      }
    }
  }
  return result;
}

namespace
{

void require_same_shape( const bit_matrix& a, const bit_matrix& b, const char* op )
{
  if ( a.rows() != b.rows() || a.cols() != b.cols() )
  {
    throw validation_error( std::string( op ) + ": shape mismatch, " + std::to_string( a.rows() ) +
                            "x" + std::to_string( a.cols() ) + " vs " + std::to_string( b.rows() ) +
                            "x" + std::to_string( b.cols() ) );
  }
}

} // namespace

uint64_t hamming_distance( const bit_matrix& a, const bit_matrix& b )
{
  require_same_shape( a, b, "hamming" );
  uint64_t count = 0;
  for ( uint32_t r = 0; r < a.rows(); ++r )
  {
    const uint64_t* wa = a.row_data( r );
    const uint64_t* wb = b.row_data( r );
    for ( uint32_t wd = 0; wd < a.words_per_row(); ++wd )
    {
      count += std::popcount( wa[wd] ^ wb[wd] );
    }
  }
  return count;
}

double weighted_distance( const bit_matrix& a, const bit_matrix& b, const weight_vector& w )
{
  require_same_shape( a, b, "weighted_distance" );
  w.validate( a.cols() );
  double total = 0.0;
  for ( uint32_t r = 0; r < a.rows(); ++r )
  {
    const uint64_t* wa = a.row_data( r );
    const uint64_t* wb = b.row_data( r );
    for ( uint32_t wd = 0; wd < a.words_per_row(); ++wd )
    {
      uint64_t diff = wa[wd] ^ wb[wd];
      while ( diff )
      {
        const int bit = std::countr_zero( diff );
        total += w.w[wd * 64u + static_cast<uint32_t>( bit )];
        diff &= diff - 1;
      }
    }
  }
  return total;
}

} // namespace bmfsyn
