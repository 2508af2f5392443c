#include "bmfsyn/bmf.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "bmfsyn/common.hpp"

namespace bmfsyn
{

namespace
{

constexpr uint32_t max_factor_cols = 32;
constexpr double association_eps = 1e-12;

void check_factor_shape( const bit_matrix& m, uint32_t f )
{
  if ( m.rows() == 0 || m.cols() == 0 )
  {
    throw validation_error( "factorize: matrix is empty" );
  }
  if ( m.cols() > max_factor_cols )
  {
    throw budget_error( "factorize: at most " + std::to_string( max_factor_cols ) +
                        " columns supported, got " + std::to_string( m.cols() ) );
  }
  if ( f < 1 || f > m.cols() )
  {
    throw validation_error( "factorize: degree " + std::to_string( f ) + " out of range [1, " +
                            std::to_string( m.cols() ) + "]" );
  }
}

std::vector<uint32_t> row_masks( const bit_matrix& m )
{
  std::vector<uint32_t> rows( m.rows(), 0u );
  for ( uint32_t r = 0; r < m.rows(); ++r )
  {
    rows[r] = static_cast<uint32_t>( m.row_data( r )[0] );
  }
  return rows;
}

double mask_weight( uint32_t mask, const std::vector<double>& w )
{
  double total = 0.0;
  while ( mask )
  {
    total += w[static_cast<uint32_t>( std::countr_zero( mask ) )];
    mask &= mask - 1;
  }
  return total;
}

/* One greedy run to depth f_max; selections at depth f are a prefix of
 * selections at any deeper run, so the trace serves every degree <= f_max. */
struct greedy_trace
{
  std::vector<uint32_t> basis;             // chosen candidate mask per step
  std::vector<std::vector<uint8_t>> bcol;  // per step, B column bits (one per row)
};

greedy_trace run_greedy( const std::vector<uint32_t>& mrows, const std::vector<uint32_t>& candidates,
                         uint32_t f_max, const std::vector<double>& w, semiring ring,
                         bool allow_zero_gain )
{
  const size_t k = mrows.size();
  std::vector<uint32_t> recon( k, 0u );

  greedy_trace trace;
  std::vector<uint8_t> row_bits( k, 0u );
  std::vector<uint8_t> best_bits( k, 0u );

  for ( uint32_t step = 0; step < f_max; ++step )
  {
    double best_gain = -1.0;
    size_t best_idx = 0;
    for ( size_t ci = 0; ci < candidates.size(); ++ci )
    {
      const uint32_t cand = candidates[ci];
      double gain = 0.0;
      for ( size_t r = 0; r < k; ++r )
      {
        double row_gain;
        if ( ring == semiring::or_semiring )
        {
          const uint32_t newly = cand & ~recon[r];
          row_gain = mask_weight( newly & mrows[r], w ) - mask_weight( newly & ~mrows[r], w );
        }
        else
        {
          const uint32_t mism = recon[r] ^ mrows[r];
          row_gain = mask_weight( cand & mism, w ) - mask_weight( cand & ~mism, w );
        }
        if ( row_gain > 0.0 )
        {
          row_bits[r] = 1;
          gain += row_gain;
        }
        else
        {
          row_bits[r] = 0;
        }
      }
      if ( gain > best_gain )
      {
        best_gain = gain;
        best_idx = ci;
        best_bits = row_bits;
      }
    }

    if ( best_gain <= 0.0 && !allow_zero_gain )
    {
      break;
    }

    const uint32_t cand = candidates[best_idx];
    for ( size_t r = 0; r < k; ++r )
    {
      if ( !best_bits[r] )
      {
        continue;
      }
      if ( ring == semiring::or_semiring )
      {
        recon[r] |= cand;
      }
      else
      {
        recon[r] ^= cand;
      }
    }
    trace.basis.push_back( cand );
    trace.bcol.push_back( best_bits );
  }

  return trace;
}

factor_result materialize( const bit_matrix& m, const greedy_trace& trace, uint32_t f, double tau,
                           semiring ring, const weight_vector& w )
{
  factor_result res;
  res.degree = f;
  res.tau = tau;
  res.ring = ring;
  res.b = bit_matrix( m.rows(), f );
  res.c = bit_matrix( f, m.cols() );

  const uint32_t used = std::min<uint32_t>( f, static_cast<uint32_t>( trace.basis.size() ) );
  for ( uint32_t t = 0; t < used; ++t )
  {
    for ( uint32_t r = 0; r < m.rows(); ++r )
    {
      if ( trace.bcol[t][r] )
      {
        res.b.set( r, t, true );
      }
    }
    for ( uint32_t j = 0; j < m.cols(); ++j )
    {
      if ( ( trace.basis[t] >> j ) & 1u )
      {
        res.c.set( t, j, true );
      }
    }
  }
  res.error = weighted_distance( m, bool_product( res.b, res.c, ring ), w );
  return res;
}

factor_result exact_full_degree( const bit_matrix& m, semiring ring )
{
  factor_result res;
  res.b = m;
  res.c = bit_matrix::identity( m.cols() );
  res.degree = m.cols();
  res.tau = 1.0;
  res.error = 0.0;
  res.ring = ring;
  return res;
}

} // namespace

weight_vector asso_config::effective_weights( uint32_t cols ) const
{
  if ( !weights.w.empty() )
  {
    weights.validate( cols );
    return weights;
  }
  return wmode == weight_mode::pow2 ? weight_vector::pow2_msb_first( cols )
                                    : weight_vector::uniform( cols );
}

void asso_config::validate() const
{
  if ( taus.empty() )
  {
    throw validation_error( "asso_config: tau list is empty" );
  }
  for ( double t : taus )
  {
    if ( !( t > 0.0 && t <= 1.0 ) )
    {
      throw validation_error( "asso_config: tau " + std::to_string( t ) + " outside (0, 1]" );
    }
  }
}

std::vector<uint32_t> association_candidates( const bit_matrix& m, double tau )
{
  if ( m.rows() == 0 || m.cols() == 0 )
  {
    throw validation_error( "association_candidates: matrix is empty" );
  }
  if ( m.cols() > max_factor_cols )
  {
    throw budget_error( "association_candidates: at most 32 columns supported" );
  }
  if ( !( tau > 0.0 && tau <= 1.0 ) )
  {
    throw validation_error( "association_candidates: tau outside (0, 1]" );
  }

  const uint32_t cols = m.cols();
  const auto mrows = row_masks( m );

  // dot[i][j] = number of rows where columns i and j are both one
  std::vector<std::vector<uint32_t>> dot( cols, std::vector<uint32_t>( cols, 0u ) );
  for ( uint32_t mask : mrows )
  {
    uint32_t mi = mask;
    while ( mi )
    {
      const uint32_t i = static_cast<uint32_t>( std::countr_zero( mi ) );
      mi &= mi - 1;
      uint32_t mj = mask;
      while ( mj )
      {
        const uint32_t j = static_cast<uint32_t>( std::countr_zero( mj ) );
        mj &= mj - 1;
        ++dot[i][j];
      }
    }
  }

  std::vector<uint32_t> out;
  std::vector<uint32_t> seen;
  for ( uint32_t i = 0; i < cols; ++i )
  {
    uint32_t cand = 0;
    if ( dot[i][i] == 0 )
    {
      cand = 1u << i;
    }
    else
    {
      const double self = static_cast<double>( dot[i][i] );
      for ( uint32_t j = 0; j < cols; ++j )
      {
        if ( static_cast<double>( dot[i][j] ) / self + association_eps >= tau )
        {
          cand |= 1u << j;
        }
      }
    }
    if ( std::find( seen.begin(), seen.end(), cand ) == seen.end() )
    {
      seen.push_back( cand );
      out.push_back( cand );
    }
  }
  return out;
}

factor_result asso_factorize( const bit_matrix& m, uint32_t f, double tau, const asso_config& cfg )
{
  check_factor_shape( m, f );
  const weight_vector w = cfg.effective_weights( m.cols() );
  if ( f == m.cols() )
  {
    return exact_full_degree( m, cfg.ring );
  }
  const auto candidates = association_candidates( m, tau );
  const auto trace = run_greedy( row_masks( m ), candidates, f, w.w, cfg.ring, cfg.allow_zero_gain );
  return materialize( m, trace, f, tau, cfg.ring, w );
}

factor_result factorize_best( const bit_matrix& m, uint32_t f, const asso_config& cfg )
{
  check_factor_shape( m, f );
  cfg.validate();
  if ( f == m.cols() )
  {
    return exact_full_degree( m, cfg.ring );
  }

  std::vector<double> taus = cfg.taus;
  std::sort( taus.begin(), taus.end() );
  taus.erase( std::unique( taus.begin(), taus.end() ), taus.end() );

  factor_result best;
  bool have = false;
  for ( double tau : taus )
  {
    factor_result res = asso_factorize( m, f, tau, cfg );
    if ( !have || res.error < best.error )
    {
      best = std::move( res );
      have = true;
    }
  }
  return best;
}

std::vector<factor_result> factorize_sweep( const bit_matrix& m, uint32_t f_max, const asso_config& cfg )
{
  check_factor_shape( m, f_max );
  cfg.validate();
  const weight_vector w = cfg.effective_weights( m.cols() );
  const auto mrows = row_masks( m );

  std::vector<double> taus = cfg.taus;
  std::sort( taus.begin(), taus.end() );
  taus.erase( std::unique( taus.begin(), taus.end() ), taus.end() );

  std::vector<factor_result> best( f_max );
  std::vector<bool> have( f_max, false );
  for ( double tau : taus )
  {
    const auto candidates = association_candidates( m, tau );
    const auto trace = run_greedy( mrows, candidates, f_max, w.w, cfg.ring, cfg.allow_zero_gain );
    for ( uint32_t f = 1; f <= f_max; ++f )
    {
      factor_result res = materialize( m, trace, f, tau, cfg.ring, w );
      if ( !have[f - 1] || res.error < best[f - 1].error )
      {
        best[f - 1] = std::move( res );
        have[f - 1] = true;
      }
    }
  }
  return best;
}

factor_result oracle_factorize( const bit_matrix& m, uint32_t f, semiring s, const weight_vector& w )
{
  check_factor_shape( m, f );
  w.validate( m.cols() );
  const uint64_t bits = static_cast<uint64_t>( m.rows() ) * f;
  if ( bits > 24 )
  {
    throw budget_error( "oracle_factorize: rows*f = " + std::to_string( bits ) +
                        " exceeds the enumeration budget of 24" );
  }

  const uint32_t k = m.rows();
  const uint32_t cols = m.cols();
  const uint32_t combos = 1u << f;

  // column masks of M over rows (row r at bit r)
  std::vector<uint32_t> mcol( cols, 0u );
  for ( uint32_t r = 0; r < k; ++r )
  {
    for ( uint32_t j = 0; j < cols; ++j )
    {
      if ( m.get( r, j ) )
      {
        mcol[j] |= 1u << r;
      }
    }
  }

  double best_err = std::numeric_limits<double>::infinity();
  uint64_t best_bcode = 0;
  std::vector<uint32_t> best_ccode( cols, 0u ), ccode( cols, 0u );

  std::vector<uint32_t> bcolumn( f, 0u );
  std::vector<uint32_t> rec( combos, 0u );

  const uint64_t total = uint64_t( 1 ) << bits;
  for ( uint64_t bcode = 0; bcode < total; ++bcode )
  {
    // bit (k*f - 1 - (r*f + l)) of bcode is B(r,l): ascending bcode is
    // ascending row-major lexicographic order of B
    for ( uint32_t l = 0; l < f; ++l )
    {
      uint32_t col = 0;
      for ( uint32_t r = 0; r < k; ++r )
      {
        if ( ( bcode >> ( bits - 1 - ( static_cast<uint64_t>( r ) * f + l ) ) ) & 1u )
        {
          col |= 1u << r;
        }
      }
      bcolumn[l] = col;
    }

    rec[0] = 0;
    for ( uint32_t code = 1; code < combos; ++code )
    {
      const uint32_t low = static_cast<uint32_t>( std::countr_zero( code ) );
      const uint32_t prev = code & ( code - 1 );
      rec[code] = s == semiring::or_semiring ? ( rec[prev] | bcolumn[low] )
                                             : ( rec[prev] ^ bcolumn[low] );
    }

    double err = 0.0;
    for ( uint32_t j = 0; j < cols && err < best_err; ++j )
    {
      uint32_t best_pop = std::numeric_limits<uint32_t>::max();
      uint32_t best_code = 0;
      for ( uint32_t lex = 0; lex < combos; ++lex )
      {
        // scan candidate combinations most-significant-basis-row-first so the
        // first minimum is the lexicographically smallest C column
        uint32_t code = 0;
        for ( uint32_t l = 0; l < f; ++l )
        {
          if ( ( lex >> ( f - 1 - l ) ) & 1u )
          {
            code |= 1u << l;
          }
        }
        const uint32_t pop = static_cast<uint32_t>( std::popcount( rec[code] ^ mcol[j] ) );
        if ( pop < best_pop )
        {
          best_pop = pop;
          best_code = code;
        }
      }
      ccode[j] = best_code;
      err += w.w[j] * best_pop;
    }

    if ( err < best_err )
    {
      best_err = err;
      best_bcode = bcode;
      best_ccode = ccode;
    }
  }

  factor_result res;
  res.degree = f;
  res.tau = 1.0;
  res.ring = s;
  res.error = best_err;
  res.b = bit_matrix( k, f );
  res.c = bit_matrix( f, cols );
  for ( uint32_t r = 0; r < k; ++r )
  {
    for ( uint32_t l = 0; l < f; ++l )
    {
      if ( ( best_bcode >> ( bits - 1 - ( static_cast<uint64_t>( r ) * f + l ) ) ) & 1u )
      {
        res.b.set( r, l, true );
      }
    }
  }
  for ( uint32_t j = 0; j < cols; ++j )
  {
    for ( uint32_t l = 0; l < f; ++l )
    {
      if ( ( best_ccode[j] >> l ) & 1u )
      {
        res.c.set( l, j, true );
      }
    }
  }
  return res;
}

} // namespace bmfsyn
