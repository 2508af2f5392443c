#include <doctest.h>

#include <algorithm>

#include "bmfsyn/blif.hpp"
#include "bmfsyn/common.hpp"
#include "bmfsyn/fixtures.hpp"
#include "bmfsyn/sim.hpp"
#include "support/oracles.hpp"

using namespace bmfsyn;

TEST_CASE( "parse a two-input AND model" )
{
  const auto n = parse_blif( ".model and2\n.inputs a b\n.outputs y\n.names a b y\n11 1\n.end\n" );
  CHECK( n.name == "and2" );
  CHECK( n.inputs == std::vector<std::string>{ "a", "b" } );
  CHECK( n.outputs == std::vector<std::string>{ "y" } );
  REQUIRE( n.nodes.size() == 1 );
  CHECK( n.nodes[0].kind == gate_kind::pla );
  CHECK( n.nodes[0].cubes == std::vector<std::string>{ "11" } );
}

TEST_CASE( "latch and hierarchy are rejected" )
{
  CHECK_THROWS_WITH_AS( parse_blif( ".model m\n.inputs a\n.outputs q\n.latch a q re clk 0\n.end\n" ),
                        "line 4: sequential constructs (.latch) not supported", parse_error );
  CHECK_THROWS_AS( parse_blif( ".model m\n.subckt foo a=b\n.end\n" ), parse_error );
  CHECK_THROWS_AS( parse_blif( ".model m\n.gate nand2 a=x\n.end\n" ), parse_error );
}

TEST_CASE( "syntax errors carry line numbers" )
{
  try
  {
    parse_blif( ".model m\n.inputs a b\n.outputs y\n.names a b y\n1 1\n.end\n" );
    FAIL( "expected parse_error" );
  }
  catch ( const parse_error& e )
  {
    CHECK( e.line() == 5 );
  }

  CHECK_THROWS_AS( parse_blif( ".model m\n.inputs a\n.outputs y\n.names a y\n0 0\n" ), parse_error );
  CHECK_THROWS_AS( parse_blif( "garbage\n" ), parse_error );
  CHECK_THROWS_AS( parse_blif( ".model m\n.bogus x\n" ), parse_error );
}

TEST_CASE( "structural problems are validation errors" )
{
  // duplicate driver
  CHECK_THROWS_AS( parse_blif( ".model m\n.inputs a\n.outputs y\n.names a y\n1 1\n.names a y\n0 1\n" ),
                   parse_error ); // caught at parse time with a line number
  // undriven output
  CHECK_THROWS_AS( parse_blif( ".model m\n.inputs a\n.outputs y z\n.names a y\n1 1\n.end\n" ),
                   validation_error );
  // combinational cycle
  CHECK_THROWS_AS(
      parse_blif( ".model m\n.inputs a\n.outputs y\n.names x a y\n11 1\n.names y x\n1 1\n.end\n" ),
      validation_error );
}

TEST_CASE( "line continuations and comments" )
{
  const auto n = parse_blif( "# a comment\n.model c # trailing\n.inputs a \\\n b\n"
                             ".outputs y\n.names a b y\n1- 1\n-1 1\n.end\n" );
  CHECK( n.inputs == std::vector<std::string>{ "a", "b" } );
  CHECK( n.nodes[0].cubes.size() == 2 );
}

TEST_CASE( "constant conventions round trip" )
{
  const auto n = parse_blif( ".model consts\n.inputs\n.outputs one zero\n.names one\n1\n.names zero\n.end\n" );
  REQUIRE( n.nodes.size() == 2 );
  CHECK( n.nodes[0].cubes == std::vector<std::string>{ "" } );
  CHECK( n.nodes[1].cubes.empty() );

  const auto text = emit_blif( n );
  CHECK( text.find( ".names one\n1\n" ) != std::string::npos );
  CHECK( structurally_equal( parse_blif( text ), n ) );
}

TEST_CASE( "primitive gates emit their covers" )
{
  netlist n;
  n.name = "buffy";
  n.add_input( "a" );
  n.add_gate( gate_kind::buf_gate, { "a" }, "y" );
  n.add_output( "y" );
  const auto text = emit_blif( n );
  CHECK( text.find( ".names a y\n1 1\n" ) != std::string::npos );
  CHECK( structurally_equal( parse_blif( text ), n ) );

  netlist c1;
  c1.name = "c1";
  c1.add_gate( gate_kind::const1_gate, {}, "x" );
  c1.add_output( "x" );
  CHECK( emit_blif( c1 ).find( ".names x\n1\n" ) != std::string::npos );
}

TEST_CASE( "round trip is the identity on a 100-gate netlist" )
{
  const auto n = test::random_netlist( 6, 100, 42 );
  const auto once = parse_blif( emit_blif( n ) );
  const auto twice = parse_blif( emit_blif( once ) );
  CHECK( structurally_equal( once, twice ) );
  CHECK( test::exhaustive_equivalent( n, once ) );
  // canonical form: emission is idempotent byte for byte
  CHECK( emit_blif( once ) == emit_blif( twice ) );
}

TEST_CASE( "emission is canonical under node reordering" )
{
  const auto n = test::random_netlist( 5, 40, 7 );
  auto shuffled = n;
  std::reverse( shuffled.nodes.begin(), shuffled.nodes.end() );
  CHECK( emit_blif( n ) == emit_blif( shuffled ) );
}

TEST_CASE( "round trip preserves the generated fixtures" )
{
  for ( const char* name : { "adder8", "mult8", "butterfly", "toy4x4" } )
  {
    const auto n = make_fixture( name );
    const auto once = parse_blif( emit_blif( n ) );
    CHECK( structurally_equal( parse_blif( emit_blif( once ) ), once ) );
    CHECK( test::exhaustive_equivalent( n, once ) );
  }
}

TEST_CASE( ".inputs and .outputs may repeat" )
{
  const auto n = parse_blif( ".model r\n.inputs a\n.inputs b c\n.outputs y\n.outputs z\n"
                             ".names a b y\n11 1\n.names c z\n1 1\n.end\n" );
  CHECK( n.inputs == std::vector<std::string>{ "a", "b", "c" } );
  CHECK( n.outputs == std::vector<std::string>{ "y", "z" } );
}

TEST_CASE( "zero-input constant models work end to end" )
{
  const auto n = parse_blif( ".model k0\n.inputs\n.outputs one\n.names one\n1\n.end\n" );
  CHECK( simulate( n, {} ) == std::vector<bool>{ true } );
  const auto table = truth_table( n );
  CHECK( table.rows() == 1 );
  CHECK( table.get( 0, 0 ) );
}

TEST_CASE( "passthrough output driven by an input is legal" )
{
  const auto n = parse_blif( ".model wire\n.inputs a\n.outputs a\n.end\n" );
  CHECK( n.nodes.empty() );
  CHECK( structurally_equal( parse_blif( emit_blif( n ) ), n ) );
}
