#include "bmfsyn/qor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "bmfsyn/common.hpp"

namespace bmfsyn
{

namespace
{

constexpr uint64_t chunk_samples = 16384; // 256 batches of 64 lanes
constexpr uint32_t exhaustive_input_cap = 20;
constexpr const char* rng_id = "mt19937_64/splitmix64-chunk16384";

struct word_layout
{
  std::vector<uint32_t> bit_index; // positions in the primary-output list, MSB first
  double max_value;
};

struct eval_setup
{
  compiled_netlist golden;
  compiled_netlist approx;
  std::vector<word_layout> words;
  uint32_t num_outputs;

  eval_setup( const netlist& g, const netlist& a, const output_interpretation& interp )
      : golden( g ), approx( a ), num_outputs( static_cast<uint32_t>( g.outputs.size() ) )
  {
    if ( g.inputs != a.inputs || g.outputs != a.outputs )
    {
      throw validation_error( "golden and approximate circuits have different port lists" );
    }
    std::unordered_map<std::string, uint32_t> output_pos;
    for ( uint32_t j = 0; j < g.outputs.size(); ++j )
    {
      output_pos[g.outputs[j]] = j;
    }
    for ( const auto& word : interp.words )
    {
      word_layout layout;
      for ( const auto& bit : word.bits )
      {
        layout.bit_index.push_back( output_pos.at( bit ) );
      }
      layout.max_value = std::ldexp( 1.0, static_cast<int>( word.bits.size() ) ) - 1.0;
      words.push_back( std::move( layout ) );
    }
  }
};

struct accumulator
{
  double sum_rel = 0.0, sum2_rel = 0.0;
  double sum_abs = 0.0, sum2_abs = 0.0;
  double sum_absn = 0.0;
  double sum_ham = 0.0, sum2_ham = 0.0;
  uint64_t count = 0;

  void merge( const accumulator& other )
  {
    sum_rel += other.sum_rel;
    sum2_rel += other.sum2_rel;
    sum_abs += other.sum_abs;
    sum2_abs += other.sum2_abs;
    sum_absn += other.sum_absn;
    sum_ham += other.sum_ham;
    sum2_ham += other.sum2_ham;
    count += other.count;
  }
};

struct batch_buffers
{
  compiled_netlist::state golden_state;
  compiled_netlist::state approx_state;
  std::vector<uint64_t> in_words;
  std::vector<uint64_t> golden_out;
  std::vector<uint64_t> approx_out;

  explicit batch_buffers( const eval_setup& setup )
      : golden_state( setup.golden.make_state() ), approx_state( setup.approx.make_state() ),
        in_words( setup.golden.num_inputs() ), golden_out( setup.golden.num_outputs() ),
        approx_out( setup.golden.num_outputs() )
  {
  }
};

void accumulate_batch( const eval_setup& setup, batch_buffers& buf, uint32_t lanes,
                       accumulator& acc )
{
  setup.golden.eval64( buf.golden_state, buf.in_words.data(), buf.golden_out.data() );
  setup.approx.eval64( buf.approx_state, buf.in_words.data(), buf.approx_out.data() );

  const uint32_t num_words = static_cast<uint32_t>( setup.words.size() );
  for ( uint32_t lane = 0; lane < lanes; ++lane )
  {
    double rel = 0.0, abs_err = 0.0, absn = 0.0;
    for ( const auto& word : setup.words )
    {
      uint64_t r = 0, ra = 0;
      for ( uint32_t b : word.bit_index )
      {
        r = ( r << 1 ) | ( ( buf.golden_out[b] >> lane ) & 1ull );
        ra = ( ra << 1 ) | ( ( buf.approx_out[b] >> lane ) & 1ull );
      }
      const double diff = r >= ra ? static_cast<double>( r - ra ) : static_cast<double>( ra - r );
      rel += diff / static_cast<double>( std::max<uint64_t>( r, 1 ) );
      abs_err += diff;
      absn += diff / word.max_value;
    }
    if ( num_words > 0 )
    {
      rel /= num_words;
      abs_err /= num_words;
      absn /= num_words;
    }

    uint32_t mismatches = 0;
    for ( uint32_t j = 0; j < setup.num_outputs; ++j )
    {
      mismatches += static_cast<uint32_t>( ( ( buf.golden_out[j] ^ buf.approx_out[j] ) >> lane ) & 1ull );
    }
    const double ham = setup.num_outputs > 0
                           ? static_cast<double>( mismatches ) / setup.num_outputs
                           : 0.0;

    acc.sum_rel += rel;
    acc.sum2_rel += rel * rel;
    acc.sum_abs += abs_err;
    acc.sum2_abs += abs_err * abs_err;
    acc.sum_absn += absn;
    acc.sum_ham += ham;
    acc.sum2_ham += ham * ham;
    ++acc.count;
  }
}

qor_report make_report( qor_metric metric, double sum, double sum2, double normalized_sum,
                        uint64_t n, uint64_t seed, bool exhaustive )
{
  qor_report rep;
  rep.metric = metric;
  rep.samples = n;
  rep.seed = seed;
  rep.exhaustive = exhaustive;
  rep.value = n > 0 ? sum / static_cast<double>( n ) : 0.0;
  rep.normalized = n > 0 ? normalized_sum / static_cast<double>( n ) : 0.0;
  if ( !exhaustive && n > 0 )
  {
    const double mean = rep.value;
    const double variance = std::max( 0.0, sum2 / static_cast<double>( n ) - mean * mean );
    rep.standard_error = std::sqrt( variance / static_cast<double>( n ) );
  }
  return rep;
}

qor_summary summarize( const accumulator& acc, uint64_t seed, bool exhaustive )
{
  qor_summary summary;
  summary.relative = make_report( qor_metric::relative, acc.sum_rel, acc.sum2_rel, acc.sum_rel,
                                  acc.count, seed, exhaustive );
  summary.absolute = make_report( qor_metric::absolute, acc.sum_abs, acc.sum2_abs, acc.sum_absn,
                                  acc.count, seed, exhaustive );
  summary.hamming = make_report( qor_metric::hamming, acc.sum_ham, acc.sum2_ham, acc.sum_ham,
                                 acc.count, seed, exhaustive );
  return summary;
}

void run_chunk( const eval_setup& setup, uint64_t chunk_index, uint64_t samples_in_chunk,
                uint64_t master_seed, accumulator& acc )
{
  std::mt19937_64 rng( derive_seed( master_seed, chunk_index ) );
  batch_buffers buf( setup );
  const uint32_t k = setup.golden.num_inputs();
  uint64_t remaining = samples_in_chunk;
  while ( remaining > 0 )
  {
    for ( uint32_t i = 0; i < k; ++i )
    {
      buf.in_words[i] = rng();
    }
    const uint32_t lanes = static_cast<uint32_t>( std::min<uint64_t>( 64, remaining ) );
    accumulate_batch( setup, buf, lanes, acc );
    remaining -= lanes;
  }
}

} // namespace

uint64_t derive_seed( uint64_t master, uint64_t stream )
{
  // splitmix64 on master xored with the stream index
  uint64_t z = master ^ ( 0x9e3779b97f4a7c15ull * ( stream + 1 ) );
  z = ( z ^ ( z >> 30 ) ) * 0xbf58476d1ce4e5b9ull;
  z = ( z ^ ( z >> 27 ) ) * 0x94d049bb133111ebull;
  return z ^ ( z >> 31 );
}

output_interpretation output_interpretation::single_word( const netlist& n, const std::string& name )
{
  output_interpretation interp;
  interp.words.push_back( { name, n.outputs } );
  return interp;
}

output_interpretation output_interpretation::parse( const std::string& spec )
{
  const auto split = []( const std::string& text, char sep ) {
    std::vector<std::string> parts;
    size_t start = 0;
    while ( start <= text.size() )
    {
      const auto pos = text.find( sep, start );
      if ( pos == std::string::npos )
      {
        parts.push_back( text.substr( start ) );
        break;
      }
      parts.push_back( text.substr( start, pos - start ) );
      start = pos + 1;
    }
    return parts;
  };
  const auto split_name_index = []( const std::string& token ) -> std::pair<std::string, long> {
    size_t digits = 0;
    while ( digits < token.size() && std::isdigit( static_cast<unsigned char>(
                                         token[token.size() - 1 - digits] ) ) )
    {
      ++digits;
    }
    if ( digits == 0 )
    {
      throw parse_error( "range endpoint '" + token + "' has no numeric suffix" );
    }
    return { token.substr( 0, token.size() - digits ),
             std::stol( token.substr( token.size() - digits ) ) };
  };

  output_interpretation interp;
  for ( const auto& group : split( spec, ';' ) )
  {
    if ( group.empty() )
    {
      continue;
    }
    const auto colon = group.find( ':' );
    if ( colon == std::string::npos || colon == 0 || colon + 1 >= group.size() )
    {
      throw parse_error( "word group '" + group + "' is not of the form name:bits" );
    }
    output_word word;
    word.name = group.substr( 0, colon );
    for ( const auto& item : split( group.substr( colon + 1 ), ',' ) )
    {
      if ( item.empty() )
      {
        throw parse_error( "empty bit entry in word '" + word.name + "'" );
      }
      const auto dots = item.find( ".." );
      if ( dots == std::string::npos )
      {
        word.bits.push_back( item );
        continue;
      }
      const auto [prefix_a, idx_a] = split_name_index( item.substr( 0, dots ) );
      const auto [prefix_b, idx_b] = split_name_index( item.substr( dots + 2 ) );
      if ( prefix_a != prefix_b )
      {
        throw parse_error( "range '" + item + "' mixes prefixes '" + prefix_a + "' and '" +
                           prefix_b + "'" );
      }
      const long step = idx_a <= idx_b ? 1 : -1;
      for ( long i = idx_a;; i += step )
      {
        word.bits.push_back( prefix_a + std::to_string( i ) );
        if ( i == idx_b )
        {
          break;
        }
      }
    }
    interp.words.push_back( std::move( word ) );
  }
  if ( interp.words.empty() )
  {
    throw parse_error( "words spec '" + spec + "' contains no groups" );
  }
  return interp;
}

void output_interpretation::validate_against( const netlist& n, bool complete ) const
{
  std::unordered_set<std::string> outputs( n.outputs.begin(), n.outputs.end() );
  std::unordered_set<std::string> grouped;
  std::unordered_set<std::string> names;
  for ( const auto& word : words )
  {
    if ( word.bits.empty() )
    {
      throw validation_error( "word '" + word.name + "' has no bits" );
    }
    if ( word.bits.size() > 63 )
    {
      throw validation_error( "word '" + word.name + "' is wider than 63 bits" );
    }
    if ( !names.insert( word.name ).second )
    {
      throw validation_error( "word name '" + word.name + "' used twice" );
    }
    for ( const auto& bit : word.bits )
    {
      if ( !outputs.count( bit ) )
      {
        throw validation_error( "word '" + word.name + "' names unknown output '" + bit + "'" );
      }
      if ( !grouped.insert( bit ).second )
      {
        throw validation_error( "output '" + bit + "' appears in two words" );
      }
    }
  }
  if ( complete && grouped.size() != outputs.size() )
  {
    throw validation_error( "interpretation covers " + std::to_string( grouped.size() ) + " of " +
                            std::to_string( outputs.size() ) +
                            " outputs; numeric metrics need all of them" );
  }
}

std::string to_string( qor_metric m )
{
  switch ( m )
  {
  case qor_metric::relative:
    return "relative";
  case qor_metric::absolute:
    return "absolute";
  default:
    return "hamming";
  }
}

qor_metric metric_from_string( const std::string& s )
{
  if ( s == "relative" )
  {
    return qor_metric::relative;
  }
  if ( s == "absolute" )
  {
    return qor_metric::absolute;
  }
  if ( s == "hamming" )
  {
    return qor_metric::hamming;
  }
  throw parse_error( "unknown metric '" + s + "'" );
}

nlohmann::json qor_report::to_json() const
{
  return { { "metric", to_string( metric ) },
           { "value", value },
           { "normalized", normalized },
           { "samples", samples },
           { "seed", seed },
           { "exhaustive", exhaustive },
           { "standard_error", standard_error },
           { "rng", rng_id } };
}

const qor_report& qor_summary::get( qor_metric m ) const
{
  switch ( m )
  {
  case qor_metric::relative:
    return relative;
  case qor_metric::absolute:
    return absolute;
  default:
    return hamming;
  }
}

qor_summary evaluate_monte_carlo( const netlist& golden, const netlist& approx,
                                  const output_interpretation& interp, const sample_options& opt )
{
  if ( opt.samples < 1 )
  {
    throw validation_error( "monte carlo evaluation needs at least one sample" );
  }
  interp.validate_against( golden, false );
  eval_setup setup( golden, approx, interp );

  const uint64_t num_chunks = ( opt.samples + chunk_samples - 1 ) / chunk_samples;
  std::vector<accumulator> per_chunk( num_chunks );

  const auto chunk_worker = [&]( uint64_t c ) {
    const uint64_t begin = c * chunk_samples;
    const uint64_t count = std::min<uint64_t>( chunk_samples, opt.samples - begin );
    run_chunk( setup, c, count, opt.seed, per_chunk[c] );
  };

  const uint32_t workers = std::max<uint32_t>( 1, opt.workers );
  if ( workers == 1 || num_chunks == 1 )
  {
    for ( uint64_t c = 0; c < num_chunks; ++c )
    {
      chunk_worker( c );
    }
  }
  else
  {
    std::atomic<uint64_t> next{ 0 };
    std::vector<std::thread> pool;
    const uint32_t spawn = static_cast<uint32_t>( std::min<uint64_t>( workers, num_chunks ) );
    for ( uint32_t t = 0; t < spawn; ++t )
    {
      pool.emplace_back( [&]() {
        while ( true )
        {
          const uint64_t c = next.fetch_add( 1 );
          if ( c >= num_chunks )
          {
            return;
          }
          chunk_worker( c );
        }
      } );
    }
    for ( auto& th : pool )
    {
      th.join();
    }
  }

  accumulator total;
  for ( const auto& acc : per_chunk )
  {
    total.merge( acc );
  }
  return summarize( total, opt.seed, false );
}

qor_summary evaluate_exhaustive( const netlist& golden, const netlist& approx,
                                 const output_interpretation& interp, uint32_t max_inputs )
{
  interp.validate_against( golden, false );
  eval_setup setup( golden, approx, interp );
  const uint32_t k = setup.golden.num_inputs();
  if ( k > std::min( max_inputs, exhaustive_input_cap ) )
  {
    throw budget_error( "exhaustive evaluation: " + std::to_string( k ) +
                        " inputs exceed the cap of " +
                        std::to_string( std::min( max_inputs, exhaustive_input_cap ) ) );
  }

  accumulator acc;
  batch_buffers buf( setup );
  const uint64_t rows = uint64_t( 1 ) << k;
  for ( uint64_t base = 0; base < rows; base += 64 )
  {
    const uint64_t batch = base >> 6;
    for ( uint32_t i = 0; i < k; ++i )
    {
      const uint32_t bitpos = k - 1 - i;
      if ( bitpos < 6 )
      {
        static constexpr uint64_t proj[6] = {
            0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
            0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
        };
        buf.in_words[i] = proj[bitpos];
      }
      else
      {
        buf.in_words[i] = ( ( batch >> ( bitpos - 6 ) ) & 1ull ) ? ~0ull : 0ull;
      }
    }
    const uint32_t lanes = static_cast<uint32_t>( std::min<uint64_t>( 64, rows - base ) );
    accumulate_batch( setup, buf, lanes, acc );
  }
  return summarize( acc, 0, true );
}

qor_report avg_relative_error( const netlist& golden, const netlist& approx,
                               const output_interpretation& interp, uint64_t samples, uint64_t seed )
{
  interp.validate_against( golden, true );
  return evaluate_monte_carlo( golden, approx, interp, { samples, seed, 1 } ).relative;
}

qor_report avg_absolute_error( const netlist& golden, const netlist& approx,
                               const output_interpretation& interp, uint64_t samples, uint64_t seed )
{
  interp.validate_against( golden, true );
  return evaluate_monte_carlo( golden, approx, interp, { samples, seed, 1 } ).absolute;
}

qor_report hamming_error_rate( const netlist& golden, const netlist& approx, uint64_t samples,
                               uint64_t seed )
{
  const output_interpretation empty_interp{};
  const uint32_t k = static_cast<uint32_t>( golden.inputs.size() );
  if ( k <= exhaustive_input_cap && ( uint64_t( 1 ) << k ) <= samples )
  {
    return evaluate_exhaustive( golden, approx, empty_interp ).hamming;
  }
  return evaluate_monte_carlo( golden, approx, empty_interp, { samples, seed, 1 } ).hamming;
}

qor_report exhaustive_qor( const netlist& golden, const netlist& approx, qor_metric metric,
                           const output_interpretation& interp )
{
  interp.validate_against( golden, metric != qor_metric::hamming );
  return evaluate_exhaustive( golden, approx, interp ).get( metric );
}

} // namespace bmfsyn
