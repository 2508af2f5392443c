#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "bmfsyn/blif.hpp"
#include "bmfsyn/fixtures.hpp"
#include "bmfsyn/qor.hpp"

using namespace bmfsyn;
namespace fs = std::filesystem;

namespace
{

struct run_result
{
  int exit_code;
  std::string out;
  std::string err;
};

fs::path scratch_dir()
{
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ( "bmfsyn_cli_" + std::to_string( ::getpid() ) );
    fs::create_directories( d );
    return d;
  }();
  return dir;
}

run_result run_cli( const std::string& args )
{
  const auto out_file = scratch_dir() / "stdout.txt";
  const auto err_file = scratch_dir() / "stderr.txt";
  const std::string cmd = std::string( BMFSYN_CLI_PATH ) + " " + args + " > " +
                          out_file.string() + " 2> " + err_file.string();
  const int status = std::system( cmd.c_str() );
  const auto slurp = []( const fs::path& p ) {
    std::ifstream in( p );
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  return { WIFEXITED( status ) ? WEXITSTATUS( status ) : -1, slurp( out_file ), slurp( err_file ) };
}

std::string fixture_path( const std::string& name )
{
  const auto path = scratch_dir() / ( name + ".blif" );
  if ( !fs::exists( path ) )
  {
    write_blif_file( make_fixture( name ), path.string() );
  }
  return path.string();
}

} // namespace

TEST_CASE( "decompose writes a report and per-subcircuit netlists" )
{
  const auto out = ( scratch_dir() / "dec_toy" ).string();
  const auto res = run_cli( "decompose --input " + fixture_path( "toy4x4" ) + " --out " + out );
  CHECK( res.exit_code == 0 );
  CHECK( res.out.find( "subcircuits=1" ) != std::string::npos );
  CHECK( fs::exists( fs::path( out ) / "partition.json" ) );
  CHECK( fs::exists( fs::path( out ) / "sub_0.blif" ) );

  const auto mult_out = ( scratch_dir() / "dec_mult" ).string();
  const auto mres = run_cli( "decompose --input " + fixture_path( "mult8" ) + " --out " + mult_out );
  CHECK( mres.exit_code == 0 );
  std::ifstream report( fs::path( mult_out ) / "partition.json" );
  nlohmann::json j;
  report >> j;
  CHECK( j.is_array() );
  CHECK( j.size() >= 2 );
  for ( const auto& entry : j )
  {
    CHECK( entry["inputs"].get<int>() <= 10 );
    CHECK( entry["outputs"].get<int>() <= 10 );
  }
}

TEST_CASE( "malformed BLIF exits 1 with a line number" )
{
  const auto bad = scratch_dir() / "bad.blif";
  std::ofstream( bad ) << ".model broken\n.inputs a\n.outputs y\n.names a y\nxx 1\n.end\n";
  const auto res = run_cli( "decompose --input " + bad.string() + " --out " +
                            ( scratch_dir() / "bad_out" ).string() );
  CHECK( res.exit_code == 1 );
  CHECK( res.err.find( "line 5" ) != std::string::npos );
}

TEST_CASE( "evaluate: a file against itself is exactly zero" )
{
  const auto res = run_cli( "evaluate " + fixture_path( "toy4x4" ) + " " + fixture_path( "toy4x4" ) +
                            " --metric relative" );
  CHECK( res.exit_code == 0 );
  const auto j = nlohmann::json::parse( res.out );
  CHECK( j["value"].get<double>() == 0.0 );
  CHECK( j["metric"] == "relative" );
  CHECK( j["exhaustive"].get<bool>() );
}

TEST_CASE( "evaluate agrees with the library on a truncated adder" )
{
  const auto golden = make_ripple_adder( 8 );
  auto truncated = golden;
  for ( auto& node : truncated.nodes )
  {
    if ( node.output == "s0" )
    {
      node = logic_node{ "s0", gate_kind::const0_gate, {}, {} };
    }
  }
  const auto gpath = scratch_dir() / "adder8.blif";
  const auto apath = scratch_dir() / "adder8_trunc.blif";
  write_blif_file( golden, gpath.string() );
  write_blif_file( truncated, apath.string() );

  const auto res = run_cli( "evaluate " + gpath.string() + " " + apath.string() +
                            " --metric absolute" );
  CHECK( res.exit_code == 0 );
  const auto j = nlohmann::json::parse( res.out );
  const auto expect =
      exhaustive_qor( golden, truncated, qor_metric::absolute,
                      output_interpretation::single_word( golden ) );
  CHECK( j["value"].get<double>() == doctest::Approx( expect.value ).epsilon( 1e-12 ) );
}

TEST_CASE( "evaluate rejects mismatched ports with exit 2" )
{
  const auto res = run_cli( "evaluate " + fixture_path( "toy4x4" ) + " " +
                            fixture_path( "majority3" ) );
  CHECK( res.exit_code == 2 );
}

TEST_CASE( "unknown metric is a usage error (64)" )
{
  const auto res = run_cli( "evaluate " + fixture_path( "toy4x4" ) + " " +
                            fixture_path( "toy4x4" ) + " --metric bogus" );
  CHECK( res.exit_code == 64 );
  const auto res2 = run_cli( "explore --input " + fixture_path( "toy4x4" ) +
                             " --threshold 0.05 --metric nope" );
  CHECK( res2.exit_code == 64 );
  const auto res3 = run_cli( "bogus-subcommand" );
  CHECK( res3.exit_code == 64 );
}

TEST_CASE( "explore with a tiny threshold keeps the circuit intact" )
{
  const auto out = ( scratch_dir() / "exp_tiny" ).string();
  const auto res = run_cli( "explore --input " + fixture_path( "toy4x4" ) +
                            " --threshold 1e-9 --samples 4096 --probe-samples 1024 --seed 3 --out " +
                            out );
  CHECK( res.exit_code == 0 );
  CHECK( res.out.find( "area_saving=0.0000" ) != std::string::npos );
  CHECK( fs::exists( fs::path( out ) / "final.blif" ) );
  CHECK( fs::exists( fs::path( out ) / "trajectory.csv" ) );
  CHECK( fs::exists( fs::path( out ) / "manifest.json" ) );

  const auto final_n = parse_blif_file( ( fs::path( out ) / "final.blif" ).string() );
  CHECK( final_n.outputs == make_toy4x4().outputs );
}

TEST_CASE( "explore runs are reproducible bit for bit" )
{
  const auto base = "explore --input " + fixture_path( "adder8" ) +
                    " --threshold 0.02 -k 6 -m 6 --samples 20000 --probe-samples 4000 --seed 7 ";
  const auto out1 = ( scratch_dir() / "exp_r1" ).string();
  const auto out2 = ( scratch_dir() / "exp_r2" ).string();
  const auto r1 = run_cli( base + "--out " + out1 );
  const auto r2 = run_cli( base + "--out " + out2 + " --workers 2" );
  CHECK( r1.exit_code == 0 );
  CHECK( r2.exit_code == 0 );
  CHECK( r1.out == r2.out );

  const auto slurp = []( const fs::path& p ) {
    std::ifstream in( p );
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  CHECK( slurp( fs::path( out1 ) / "trajectory.csv" ) ==
         slurp( fs::path( out2 ) / "trajectory.csv" ) );
  CHECK( slurp( fs::path( out1 ) / "final.blif" ) == slurp( fs::path( out2 ) / "final.blif" ) );

  std::ifstream mf( fs::path( out1 ) / "manifest.json" );
  nlohmann::json manifest;
  mf >> manifest;
  CHECK( manifest["config"]["seed"] == 7 );
  CHECK( manifest["results"].contains( "area_saving" ) );
  CHECK( manifest["version"] == "0.1.0" );
}

TEST_CASE( "config file values are defaults that flags override" )
{
  const auto cfg_path = scratch_dir() / "run.json";
  std::ofstream( cfg_path ) << nlohmann::json{ { "input", fixture_path( "toy4x4" ) },
                                               { "threshold", 1e-9 },
                                               { "samples", 4096 },
                                               { "probe_samples", 512 },
                                               { "seed", 21 } }
                                   .dump();
  const auto out = ( scratch_dir() / "exp_cfg" ).string();
  const auto res = run_cli( "explore --config " + cfg_path.string() + " --out " + out );
  CHECK( res.exit_code == 0 );
  std::ifstream mf( fs::path( out ) / "manifest.json" );
  nlohmann::json manifest;
  mf >> manifest;
  CHECK( manifest["config"]["seed"] == 21 );
  CHECK( manifest["config"]["samples"] == 4096 );

  // a flag beats the file
  const auto out2 = ( scratch_dir() / "exp_cfg2" ).string();
  const auto res2 = run_cli( "explore --config " + cfg_path.string() + " --seed 99 --out " + out2 );
  CHECK( res2.exit_code == 0 );
  std::ifstream mf2( fs::path( out2 ) / "manifest.json" );
  nlohmann::json manifest2;
  mf2 >> manifest2;
  CHECK( manifest2["config"]["seed"] == 99 );
}

TEST_CASE( "evaluate honors the words flag" )
{
  const auto but = fixture_path( "butterfly" );
  const auto res = run_cli( "evaluate " + but + " " + but +
                            " --metric relative --words \"s:s8..s0;d:d8..d0\"" );
  CHECK( res.exit_code == 0 );
  CHECK( nlohmann::json::parse( res.out )["value"].get<double>() == 0.0 );

  // numeric metrics need a complete interpretation
  const auto partial = run_cli( "evaluate " + but + " " + but +
                                " --metric relative --words s:s8..s0" );
  CHECK( partial.exit_code == 2 );
}

TEST_CASE( "config invariants are enforced" )
{
  const auto res = run_cli( "explore --input " + fixture_path( "toy4x4" ) +
                            " --threshold 0.05 --samples 100 --probe-samples 1000" );
  CHECK( res.exit_code == 2 );
  const auto res2 = run_cli( "explore --input " + fixture_path( "toy4x4" ) + " --threshold 0" );
  CHECK( res2.exit_code == 2 );
}

TEST_CASE( "fixture subcommand writes parseable netlists" )
{
  const auto path = ( scratch_dir() / "gen_butterfly.blif" ).string();
  const auto res = run_cli( "fixture butterfly --out " + path );
  CHECK( res.exit_code == 0 );
  const auto n = parse_blif_file( path );
  CHECK( n.inputs.size() == 16 );
  CHECK( n.outputs.size() == 18 );
}
