/*!
  \file bmfsyn.cpp
  \brief Command-line front end: decompose, explore, evaluate, fixture

  Exit codes: 0 success, 1 parse error, 2 validation error, 3 budget error,
  64 usage error.
*/

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bmfsyn/blif.hpp"
#include "bmfsyn/common.hpp"
#include "bmfsyn/explore.hpp"
#include "bmfsyn/fixtures.hpp"
#include "bmfsyn/partition.hpp"
#include "bmfsyn/qor.hpp"

namespace
{

using namespace bmfsyn;
using nlohmann::json;

struct run_config
{
  std::string input;
  uint32_t k = 10;
  uint32_t m = 10;
  std::string metric = "relative";
  double threshold = 0.05;
  std::string taus = "0.6,0.7,0.8,0.9,1.0";
  std::string ring = "or";
  std::string weights = "pow2";
  uint64_t samples = 1000000;
  uint64_t probe_samples = 100000;
  uint64_t seed = 1;
  std::string out_dir = ".";
  std::string words;
  uint32_t workers = 0; // 0 = available parallelism
};

std::vector<double> parse_tau_list( const std::string& text )
{
  std::vector<double> taus;
  std::stringstream ss( text );
  std::string item;
  while ( std::getline( ss, item, ',' ) )
  {
    if ( item.empty() )
    {
      continue;
    }
    try
    {
      size_t pos = 0;
      const double v = std::stod( item, &pos );
      if ( pos != item.size() )
      {
        throw std::invalid_argument( item );
      }
      taus.push_back( v );
    }
    catch ( const std::exception& )
    {
      throw parse_error( "bad tau value '" + item + "'" );
    }
  }
  if ( taus.empty() )
  {
    throw parse_error( "tau list '" + text + "' is empty" );
  }
  return taus;
}

asso_config make_asso_config( const run_config& cfg )
{
  asso_config asso;
  asso.taus = parse_tau_list( cfg.taus );
  if ( cfg.ring == "or" )
  {
    asso.ring = semiring::or_semiring;
  }
  else if ( cfg.ring == "xor" )
  {
    asso.ring = semiring::xor_field;
  }
  else
  {
    throw parse_error( "unknown semiring '" + cfg.ring + "'" );
  }
  if ( cfg.weights == "uniform" )
  {
    asso.wmode = weight_mode::uniform;
  }
  else if ( cfg.weights == "pow2" )
  {
    asso.wmode = weight_mode::pow2;
  }
  else
  {
    throw parse_error( "unknown weights mode '" + cfg.weights + "'" );
  }
  asso.validate();
  return asso;
}

uint32_t effective_workers( const run_config& cfg )
{
  if ( cfg.workers > 0 )
  {
    return cfg.workers;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

output_interpretation make_interpretation( const run_config& cfg, const netlist& n )
{
  if ( cfg.words.empty() )
  {
    return output_interpretation::single_word( n );
  }
  return output_interpretation::parse( cfg.words );
}

void validate_config( const run_config& cfg )
{
  if ( cfg.k < 1 || cfg.m < 1 )
  {
    throw validation_error( "k and m must be at least 1" );
  }
  if ( !( cfg.threshold > 0.0 ) )
  {
    throw validation_error( "threshold must be positive" );
  }
  if ( cfg.samples < cfg.probe_samples || cfg.probe_samples < 1 )
  {
    throw validation_error( "need samples >= probe-samples >= 1" );
  }
}

json config_json( const run_config& cfg )
{
  return { { "input", cfg.input },
           { "k", cfg.k },
           { "m", cfg.m },
           { "metric", cfg.metric },
           { "threshold", cfg.threshold },
           { "taus", cfg.taus },
           { "semiring", cfg.ring },
           { "weights", cfg.weights },
           { "samples", cfg.samples },
           { "probe_samples", cfg.probe_samples },
           { "seed", cfg.seed },
           { "out", cfg.out_dir },
           { "words", cfg.words },
           { "workers", cfg.workers } };
}

/* Values from --config become defaults; explicit flags override them. */
void load_config_file( run_config& cfg, const std::string& path )
{
  std::ifstream in( path );
  if ( !in )
  {
    throw parse_error( "cannot open config file '" + path + "'" );
  }
  json j;
  try
  {
    in >> j;
  }
  catch ( const json::exception& e )
  {
    throw parse_error( "config file '" + path + "': " + e.what() );
  }
  const auto get = [&]( const char* key, auto& field ) {
    if ( j.contains( key ) )
    {
      j.at( key ).get_to( field );
    }
  };
  get( "input", cfg.input );
  get( "k", cfg.k );
  get( "m", cfg.m );
  get( "metric", cfg.metric );
  get( "threshold", cfg.threshold );
  get( "taus", cfg.taus );
  get( "semiring", cfg.ring );
  get( "weights", cfg.weights );
  get( "samples", cfg.samples );
  get( "probe_samples", cfg.probe_samples );
  get( "seed", cfg.seed );
  get( "out", cfg.out_dir );
  get( "words", cfg.words );
  get( "workers", cfg.workers );
}

void add_common_options( CLI::App* cmd, run_config& cfg, bool with_explore_options )
{
  cmd->add_option( "--input", cfg.input, "input BLIF file" );
  cmd->add_option( "-k", cfg.k, "maximum subcircuit inputs" );
  cmd->add_option( "-m", cfg.m, "maximum subcircuit outputs" );
  cmd->add_option( "--out", cfg.out_dir, "output directory" );
  if ( with_explore_options )
  {
    cmd->add_option( "--metric", cfg.metric, "relative | absolute | hamming" );
    cmd->add_option( "--threshold", cfg.threshold, "error threshold" );
    cmd->add_option( "--taus", cfg.taus, "comma-separated association thresholds" );
    cmd->add_option( "--semiring", cfg.ring, "or | xor" );
    cmd->add_option( "--weights", cfg.weights, "uniform | pow2" );
    cmd->add_option( "--samples", cfg.samples, "Monte Carlo samples per committed step" );
    cmd->add_option( "--probe-samples", cfg.probe_samples, "Monte Carlo samples per probe" );
    cmd->add_option( "--seed", cfg.seed, "master PRNG seed" );
    cmd->add_option( "--words", cfg.words, "output interpretation, e.g. \"s:s8..s0;d:d8..d0\"" );
    cmd->add_option( "--workers", cfg.workers, "worker threads (0 = all cores)" );
  }
}

int cmd_decompose( const run_config& cfg )
{
  validate_config( cfg );
  const netlist n = parse_blif_file( cfg.input );
  const circuit_partition part = decompose( n, cfg.k, cfg.m );

  std::filesystem::create_directories( cfg.out_dir );
  const auto report_path = std::filesystem::path( cfg.out_dir ) / "partition.json";
  std::ofstream report( report_path );
  report << partition_report_json( part ) << '\n';
  for ( const auto& sub : part.subcircuits )
  {
    const auto path = std::filesystem::path( cfg.out_dir ) /
                      ( "sub_" + std::to_string( sub.id ) + ".blif" );
    write_blif_file( extract( n, sub ), path.string() );
  }
  std::printf( "subcircuits=%zu report=%s\n", part.subcircuits.size(), report_path.c_str() );
  return 0;
}

int cmd_evaluate( const run_config& cfg, const std::string& golden_path,
                  const std::string& approx_path )
{
  const netlist golden = parse_blif_file( golden_path );
  const netlist approx = parse_blif_file( approx_path );
  const auto metric = metric_from_string( cfg.metric );
  const auto interp = make_interpretation( cfg, golden );
  interp.validate_against( golden, metric != qor_metric::hamming );

  qor_report report;
  const uint32_t k = static_cast<uint32_t>( golden.inputs.size() );
  if ( k <= 20 && ( uint64_t( 1 ) << k ) <= cfg.samples )
  {
    report = evaluate_exhaustive( golden, approx, interp ).get( metric );
  }
  else
  {
    sample_options opt{ cfg.samples, cfg.seed, effective_workers( cfg ) };
    report = evaluate_monte_carlo( golden, approx, interp, opt ).get( metric );
  }
  std::cout << report.to_json().dump( 2 ) << '\n';
  return 0;
}

int cmd_explore( const run_config& cfg )
{
  validate_config( cfg );
  const auto t0 = std::chrono::steady_clock::now();
  const netlist n = parse_blif_file( cfg.input );
  const auto asso = make_asso_config( cfg );
  const auto metric = metric_from_string( cfg.metric );
  const auto interp = make_interpretation( cfg, n );
  interp.validate_against( n, metric != qor_metric::hamming );

  const circuit_partition part = decompose( n, cfg.k, cfg.m );
  const auto t1 = std::chrono::steady_clock::now();
  const profile_cache cache = profile_all( n, part, asso, cfg.k );
  const auto t2 = std::chrono::steady_clock::now();

  explore_options opt;
  opt.metric = metric;
  opt.threshold = cfg.threshold;
  opt.samples = cfg.samples;
  opt.probe_samples = cfg.probe_samples;
  opt.seed = cfg.seed;
  opt.workers = effective_workers( cfg );
  const explore_result result = explore( n, cache, interp, opt );
  const auto t3 = std::chrono::steady_clock::now();

  std::filesystem::create_directories( cfg.out_dir );
  const auto out = [and_dir = std::filesystem::path( cfg.out_dir )]( const char* f ) {
    return ( and_dir / f ).string();
  };
  write_blif_file( result.circuit, out( "final.blif" ) );
  {
    std::ofstream csv( out( "trajectory.csv" ) );
    csv << pareto_report( result.trajectory );
  }

  const auto& final_point = *std::find_if( result.trajectory.rbegin(), result.trajectory.rend(),
                                           []( const trajectory_point& p ) { return p.committed; } );
  const double base_area = result.trajectory.front().area;
  const double final_area = final_point.area;
  const double area_saving = base_area > 0.0 ? 1.0 - final_area / base_area : 0.0;
  const double final_error = final_point.quality.get( metric ).value;
  const uint32_t committed_steps = final_point.step;

  const auto secs = []( auto a, auto b ) {
    return std::chrono::duration<double>( b - a ).count();
  };
  json manifest = { { "tool", "bmfsyn" },
                    { "version", std::string( version_string ) },
                    { "config", config_json( cfg ) },
                    { "rng", "mt19937_64/splitmix64-chunk16384" },
                    { "subcircuits", part.subcircuits.size() },
                    { "results",
                      { { "steps", committed_steps },
                        { "final_error", final_error },
                        { "area_proxy_before", base_area },
                        { "area_proxy_after", final_area },
                        { "area_saving", area_saving },
                        { "final_degrees", result.degrees } } },
                    { "timings_s",
                      { { "parse_partition", secs( t0, t1 ) },
                        { "profile", secs( t1, t2 ) },
                        { "explore", secs( t2, t3 ) } } },
                    { "notes",
                      json::array(
                          { "area proxy covers the partitioned combinational nodes only" } ) } };
  {
    std::ofstream mf( out( "manifest.json" ) );
    mf << manifest.dump( 2 ) << '\n';
  }

  std::printf( "steps=%u final_error=%.6g area_saving=%.4f\n", committed_steps, final_error,
               area_saving );
  return 0;
}

int cmd_fixture( const std::string& name, const std::string& out_path )
{
  write_blif_file( make_fixture( name ), out_path );
  std::printf( "wrote %s\n", out_path.c_str() );
  return 0;
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "approximate logic synthesis via Boolean matrix factorization" };
  app.require_subcommand( 1 );

  run_config cfg;
  std::string config_path;
  std::string golden_path, approx_path;
  std::string fixture_name, fixture_out = "fixture.blif";

  // --config is handled before CLI11 so explicit flags override file values
  for ( int i = 1; i + 1 < argc; ++i )
  {
    if ( std::string( argv[i] ) == "--config" )
    {
      config_path = argv[i + 1];
    }
  }
  if ( !config_path.empty() )
  {
    try
    {
      load_config_file( cfg, config_path );
    }
    catch ( const parse_error& e )
    {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  }

  auto* dec = app.add_subcommand( "decompose", "partition a netlist into bounded subcircuits" );
  add_common_options( dec, cfg, false );
  dec->add_option( "--config", config_path, "JSON config file (flags override)" );

  auto* exp = app.add_subcommand( "explore", "run the full approximation pipeline" );
  add_common_options( exp, cfg, true );
  exp->add_option( "--config", config_path, "JSON config file (flags override)" );

  auto* eva = app.add_subcommand( "evaluate", "measure the error between two circuits" );
  eva->add_option( "golden", golden_path, "accurate BLIF" )->required();
  eva->add_option( "approx", approx_path, "approximate BLIF" )->required();
  eva->add_option( "--metric", cfg.metric, "relative | absolute | hamming" );
  eva->add_option( "--samples", cfg.samples, "Monte Carlo samples" );
  eva->add_option( "--seed", cfg.seed, "PRNG seed" );
  eva->add_option( "--words", cfg.words, "output interpretation" );
  eva->add_option( "--workers", cfg.workers, "worker threads (0 = all cores)" );

  auto* fix = app.add_subcommand( "fixture", "write a generated benchmark netlist" );
  fix->add_option( "name", fixture_name, "adder8 | adder32 | mult8 | butterfly | sad | toy4x4" )
      ->required();
  fix->add_option( "--out", fixture_out, "output BLIF path" );

  try
  {
    app.parse( argc, argv );
  }
  catch ( const CLI::ParseError& e )
  {
    if ( e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
         e.get_name() == "CallForVersion" )
    {
      return app.exit( e );
    }
    std::cerr << "usage error: " << e.what() << '\n';
    return 64;
  }

  if ( exp->parsed() || eva->parsed() )
  {
    try
    {
      metric_from_string( cfg.metric );
      if ( cfg.ring != "or" && cfg.ring != "xor" )
      {
        throw parse_error( "unknown semiring '" + cfg.ring + "'" );
      }
      if ( cfg.weights != "uniform" && cfg.weights != "pow2" )
      {
        throw parse_error( "unknown weights mode '" + cfg.weights + "'" );
      }
    }
    catch ( const parse_error& e )
    {
      std::cerr << "usage error: " << e.what() << '\n';
      return 64;
    }
  }

  try
  {
    if ( dec->parsed() )
    {
      if ( cfg.input.empty() )
      {
        std::cerr << "usage error: --input is required\n";
        return 64;
      }
      return cmd_decompose( cfg );
    }
    if ( exp->parsed() )
    {
      if ( cfg.input.empty() )
      {
        std::cerr << "usage error: --input is required\n";
        return 64;
      }
      return cmd_explore( cfg );
    }
    if ( eva->parsed() )
    {
      return cmd_evaluate( cfg, golden_path, approx_path );
    }
    if ( fix->parsed() )
    {
      return cmd_fixture( fixture_name, fixture_out );
    }
  }
  catch ( const parse_error& e )
  {
    std::cerr << "parse error: " << e.what() << '\n';
    return 1;
  }
  catch ( const budget_error& e )
  {
    std::cerr << "budget error: " << e.what() << '\n';
    return 3;
  }
  catch ( const validation_error& e )
  {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  }
  catch ( const std::exception& e )
  {
    std::cerr << "error: " << e.what() << '\n';
    return 70;
  }
  return 0;
}
