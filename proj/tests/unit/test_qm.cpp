#include <doctest.h>

#include <random>

#include "bmfsyn/qm.hpp"

using namespace bmfsyn;

namespace
{

bool cover_value( const std::vector<std::string>& cover, uint32_t minterm )
{
  for ( const auto& cube : cover )
  {
    if ( cube_covers( cube, minterm ) )
    {
      return true;
    }
  }
  return false;
}

} // namespace

TEST_CASE( "known minimizations" )
{
  // f = ~x2 over 4 vars (x0 is the minterm MSB)
  const std::vector<uint32_t> on{ 0, 1, 4, 5, 8, 9, 12, 13 };
  const auto cover = qm_minimize( on, 4 );
  REQUIRE( cover.size() == 1 );
  CHECK( cover[0] == "--0-" );

  CHECK( qm_minimize( {}, 3 ).empty() );
  CHECK( qm_minimize( { 0, 1, 2, 3 }, 2 ) == std::vector<std::string>{ "--" } );
  CHECK( qm_minimize( { 3 }, 2 ) == std::vector<std::string>{ "11" } );

  // 2-bit parity has no mergeable pairs
  const auto parity = qm_minimize( { 1, 2 }, 2 );
  CHECK( parity == std::vector<std::string>{ "01", "10" } );
}

TEST_CASE( "minimized covers are exhaustively equivalent to the on-set" )
{
  std::mt19937_64 rng( 31 );
  for ( int t = 0; t < 50; ++t )
  {
    const uint32_t nvars = 3 + t % 4; // 3..6
    std::vector<uint32_t> on;
    for ( uint32_t m = 0; m < ( 1u << nvars ); ++m )
    {
      if ( rng() & 1ull )
      {
        on.push_back( m );
      }
    }
    const auto cover = qm_minimize( on, nvars );
    std::vector<bool> truth( 1u << nvars, false );
    for ( uint32_t m : on )
    {
      truth[m] = true;
    }
    for ( uint32_t m = 0; m < ( 1u << nvars ); ++m )
    {
      REQUIRE( cover_value( cover, m ) == truth[m] );
    }
  }
}

TEST_CASE( "every selected implicant is prime" )
{
  std::mt19937_64 rng( 37 );
  for ( int t = 0; t < 25; ++t )
  {
    const uint32_t nvars = 4;
    std::vector<uint32_t> on;
    for ( uint32_t m = 0; m < 16; ++m )
    {
      if ( rng() % 3 )
      {
        on.push_back( m );
      }
    }
    std::vector<bool> truth( 16, false );
    for ( uint32_t m : on )
    {
      truth[m] = true;
    }
    const auto cover = qm_minimize( on, nvars );
    if ( cover.size() == 1 && cover[0] == std::string( nvars, '-' ) )
    {
      continue; // tautology
    }
    for ( const auto& cube : cover )
    {
      // widening any single literal must pull in an off-set minterm
      for ( uint32_t p = 0; p < nvars; ++p )
      {
        if ( cube[p] == '-' )
        {
          continue;
        }
        std::string widened = cube;
        widened[p] = '-';
        bool hits_offset = false;
        for ( uint32_t m = 0; m < 16 && !hits_offset; ++m )
        {
          if ( cube_covers( widened, m ) && !truth[m] )
          {
            hits_offset = true;
          }
        }
        CHECK( hits_offset );
      }
    }
  }
}

TEST_CASE( "cube_covers respects the MSB-first input convention" )
{
  CHECK( cube_covers( "1-0", 0b100 ) );
  CHECK( cube_covers( "1-0", 0b110 ) );
  CHECK_FALSE( cube_covers( "1-0", 0b101 ) );
  CHECK_FALSE( cube_covers( "1-0", 0b000 ) );
}
