#include "bmfsyn/explore.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <functional>
#include <thread>

#include "bmfsyn/common.hpp"

namespace bmfsyn
{

namespace
{

void parallel_for( uint64_t count, uint32_t workers, const std::function<void( uint64_t )>& fn )
{
  workers = std::max<uint32_t>( 1, workers );
  if ( workers == 1 || count <= 1 )
  {
    for ( uint64_t i = 0; i < count; ++i )
    {
      fn( i );
    }
    return;
  }
  std::atomic<uint64_t> next{ 0 };
  std::vector<std::thread> pool;
  const uint32_t spawn = static_cast<uint32_t>( std::min<uint64_t>( workers, count ) );
  for ( uint32_t t = 0; t < spawn; ++t )
  {
    pool.emplace_back( [&]() {
      while ( true )
      {
        const uint64_t i = next.fetch_add( 1 );
        if ( i >= count )
        {
          return;
        }
        fn( i );
      }
    } );
  }
  for ( auto& th : pool )
  {
    th.join();
  }
}

double entry_area( const subcircuit_profile& prof, uint32_t degree )
{
  const uint32_t m = static_cast<uint32_t>( prof.sub.boundary_outputs.size() );
  return degree == m ? prof.original_area : prof.by_degree[degree - 1].area;
}

double total_area( const profile_cache& cache, const std::vector<uint32_t>& degrees )
{
  double total = 0.0;
  for ( size_t i = 0; i < cache.subs.size(); ++i )
  {
    total += entry_area( cache.subs[i], degrees[i] );
  }
  return total;
}

std::string format_double( double v )
{
  char buf[64];
  std::snprintf( buf, sizeof( buf ), "%.10g", v );
  return buf;
}

} // namespace

double profile_cache::original_total_area() const
{
  double total = 0.0;
  for ( const auto& prof : subs )
  {
    total += prof.original_area;
  }
  return total;
}

bool profile_cache::any_approximable() const
{
  return std::any_of( subs.begin(), subs.end(),
                      []( const subcircuit_profile& p ) { return !p.by_degree.empty(); } );
}

profile_cache profile_all( const netlist& n, const circuit_partition& p, const asso_config& cfg,
                           uint32_t max_inputs )
{
  cfg.validate();
  profile_cache cache;
  cache.subs.resize( p.subcircuits.size() );
  for ( size_t i = 0; i < p.subcircuits.size(); ++i )
  {
    auto& prof = cache.subs[i];
    prof.sub = p.subcircuits[i];
    prof.original = extract( n, prof.sub );
    prof.original_area = area_proxy( prof.original ).two_input_gate_equivalents;
    const uint32_t m = static_cast<uint32_t>( prof.sub.boundary_outputs.size() );
    if ( m < 2 )
    {
      continue; // unapproximable: no degree below the exact one exists
    }
    prof.by_degree.reserve( m - 1 );
    for ( uint32_t f = 1; f <= m - 1; ++f )
    {
      auto approx = approximate_subcircuit( prof.original, f, cfg, max_inputs );
      profile_entry entry;
      entry.factors = std::move( approx.factors );
      entry.truth = std::move( approx.truth );
      entry.area = area_proxy( approx.circuit ).two_input_gate_equivalents;
      entry.circuit = std::move( approx.circuit );
      prof.by_degree.push_back( std::move( entry ) );
    }
  }
  return cache;
}

netlist compose( const netlist& n, const profile_cache& cache, const std::vector<uint32_t>& degrees )
{
  if ( degrees.size() != cache.subs.size() )
  {
    throw validation_error( "compose: degree vector length does not match the cache" );
  }
  netlist current = n;
  for ( size_t i = 0; i < cache.subs.size(); ++i )
  {
    const auto& prof = cache.subs[i];
    const uint32_t m = static_cast<uint32_t>( prof.sub.boundary_outputs.size() );
    if ( degrees[i] < 1 || degrees[i] > m )
    {
      throw validation_error( "compose: degree " + std::to_string( degrees[i] ) +
                              " out of range for subcircuit " + std::to_string( prof.sub.id ) );
    }
    if ( degrees[i] < m )
    {
      current = substitute( current, prof.sub, prof.by_degree[degrees[i] - 1].circuit );
    }
  }
  return current;
}

explore_result explore( const netlist& golden, const profile_cache& cache,
                        const output_interpretation& interp, const explore_options& opt )
{
  if ( !( opt.threshold > 0.0 ) )
  {
    throw validation_error( "explore: threshold must be positive" );
  }
  if ( opt.samples < opt.probe_samples || opt.probe_samples < 1 )
  {
    throw validation_error( "explore: need samples >= probe_samples >= 1" );
  }
  interp.validate_against( golden, opt.metric != qor_metric::hamming );

  std::vector<uint32_t> degrees;
  degrees.reserve( cache.subs.size() );
  for ( const auto& prof : cache.subs )
  {
    degrees.push_back( static_cast<uint32_t>( prof.sub.boundary_outputs.size() ) );
  }

  explore_result result;

  // baseline: the exact circuit, stream 0 of the master seed
  {
    trajectory_point base;
    base.step = 0;
    base.area = total_area( cache, degrees );
    base.quality = evaluate_monte_carlo( golden, golden, interp,
                                         { opt.samples, derive_seed( opt.seed, 0 ), opt.workers } );
    if ( base.quality.get( opt.metric ).value > opt.threshold )
    {
      throw std::logic_error( "explore: exact circuit fails its own threshold" );
    }
    result.trajectory.push_back( std::move( base ) );
  }

  for ( uint32_t step = 1;; ++step )
  {
    std::vector<size_t> candidates;
    for ( size_t i = 0; i < degrees.size(); ++i )
    {
      if ( degrees[i] > 1 && !cache.subs[i].by_degree.empty() )
      {
        candidates.push_back( i );
      }
    }
    if ( candidates.empty() )
    {
      break;
    }

    // probe every candidate decrement under common random numbers
    const uint64_t probe_seed = derive_seed( opt.seed, 2ull * step - 1 );
    std::vector<double> probe_value( candidates.size(), 0.0 );
    parallel_for( candidates.size(), opt.workers, [&]( uint64_t ci ) {
      const size_t i = candidates[ci];
      auto probe_degrees = degrees;
      --probe_degrees[i];
      const netlist probed = compose( golden, cache, probe_degrees );
      const auto summary = evaluate_monte_carlo( golden, probed, interp,
                                                 { opt.probe_samples, probe_seed, 1 } );
      probe_value[ci] = summary.get( opt.metric ).value;
    } );

    size_t best_ci = 0;
    for ( size_t ci = 1; ci < candidates.size(); ++ci )
    {
      const double delta = probe_value[ci] - probe_value[best_ci];
      if ( delta < 0.0 )
      {
        best_ci = ci;
      }
      else if ( delta == 0.0 )
      {
        // tie: prefer the larger area saving, then the lower subcircuit id
        const size_t a = candidates[ci], b = candidates[best_ci];
        const double save_a = entry_area( cache.subs[a], degrees[a] ) -
                              entry_area( cache.subs[a], degrees[a] - 1 );
        const double save_b = entry_area( cache.subs[b], degrees[b] ) -
                              entry_area( cache.subs[b], degrees[b] - 1 );
        if ( save_a > save_b )
        {
          best_ci = ci;
        }
      }
    }
    const size_t chosen = candidates[best_ci];

    auto next_degrees = degrees;
    --next_degrees[chosen];
    const netlist next_circuit = compose( golden, cache, next_degrees );
    const auto commit_quality = evaluate_monte_carlo(
        golden, next_circuit, interp,
        { opt.samples, derive_seed( opt.seed, 2ull * step ), opt.workers } );

    trajectory_point point;
    point.step = step;
    point.subcircuit_id = cache.subs[chosen].sub.id;
    point.f_before = degrees[chosen];
    point.f_after = next_degrees[chosen];
    point.quality = commit_quality;
    point.area = total_area( cache, next_degrees );
    point.committed = !( commit_quality.get( opt.metric ).value > opt.threshold );
    result.trajectory.push_back( point );

    if ( !point.committed )
    {
      break; // roll the violating decrement back and stop
    }
    degrees = std::move( next_degrees );
  }

  result.degrees = degrees;
  result.circuit = compose( golden, cache, degrees );
  return result;
}

std::string pareto_report( const std::vector<trajectory_point>& trajectory )
{
  if ( trajectory.empty() )
  {
    throw validation_error( "pareto_report: empty trajectory" );
  }
  const double base_area = trajectory.front().area;
  std::string csv = "step,relative_error,normalized_absolute_error,area_proxy,"
                    "area_proxy_normalized,committed\n";
  for ( const auto& point : trajectory )
  {
    csv += std::to_string( point.step );
    csv += ',';
    csv += format_double( point.quality.relative.value );
    csv += ',';
    csv += format_double( point.quality.absolute.normalized );
    csv += ',';
    csv += format_double( point.area );
    csv += ',';
    csv += format_double( base_area > 0.0 ? point.area / base_area : 1.0 );
    csv += ',';
    csv += point.committed ? '1' : '0';
    csv += '\n';
  }
  return csv;
}

} // namespace bmfsyn
