#include "bmfsyn/qm.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>
#include <unordered_set>

#include "bmfsyn/common.hpp"

namespace bmfsyn
{

namespace
{

struct implicant
{
  uint32_t value; // fixed bits (dashed positions zero)
  uint32_t dash;  // dashed positions

  bool operator==( const implicant& other ) const
  {
    return value == other.value && dash == other.dash;
  }
};

struct implicant_hash
{
  size_t operator()( const implicant& i ) const
  {
    return std::hash<uint64_t>()( ( uint64_t( i.dash ) << 32 ) | i.value );
  }
};

std::string to_cube( const implicant& imp, uint32_t nvars )
{
  std::string cube( nvars, '-' );
  for ( uint32_t p = 0; p < nvars; ++p )
  {
    const uint32_t bit = nvars - 1 - p;
    if ( !( ( imp.dash >> bit ) & 1u ) )
    {
      cube[p] = ( ( imp.value >> bit ) & 1u ) ? '1' : '0';
    }
  }
  return cube;
}

} // namespace

bool cube_covers( const std::string& cube, uint32_t minterm )
{
  const uint32_t nvars = static_cast<uint32_t>( cube.size() );
  for ( uint32_t p = 0; p < nvars; ++p )
  {
    if ( cube[p] == '-' )
    {
      continue;
    }
    const bool bit = ( minterm >> ( nvars - 1 - p ) ) & 1u;
    if ( bit != ( cube[p] == '1' ) )
    {
      return false;
    }
  }
  return true;
}

std::vector<std::string> prime_implicants( const std::vector<uint32_t>& on_set, uint32_t nvars )
{
  if ( nvars > 20 )
  {
    throw budget_error( "prime_implicants: too many variables" );
  }

  std::vector<implicant> current;
  {
    std::unordered_set<implicant, implicant_hash> dedup;
    for ( uint32_t m : on_set )
    {
      if ( m >= ( 1u << nvars ) )
      {
        throw validation_error( "prime_implicants: minterm out of range" );
      }
      implicant imp{ m, 0 };
      if ( dedup.insert( imp ).second )
      {
        current.push_back( imp );
      }
    }
  }

  std::vector<std::string> primes;
  while ( !current.empty() )
  {
    // pair implicants with the same dash set whose values differ in one bit
    std::vector<bool> combined( current.size(), false );
    std::unordered_set<implicant, implicant_hash> next_set;
    std::vector<implicant> next;

    // bucket by (dash, popcount of value) so only adjacent groups are scanned
    std::unordered_map<uint64_t, std::vector<size_t>> groups;
    for ( size_t i = 0; i < current.size(); ++i )
    {
      const uint64_t key = ( uint64_t( current[i].dash ) << 6 ) |
                           uint32_t( std::popcount( current[i].value ) );
      groups[key].push_back( i );
    }

    for ( size_t i = 0; i < current.size(); ++i )
    {
      const auto& a = current[i];
      const uint64_t up_key = ( uint64_t( a.dash ) << 6 ) |
                              ( uint32_t( std::popcount( a.value ) ) + 1 );
      const auto it = groups.find( up_key );
      if ( it == groups.end() )
      {
        continue;
      }
      for ( size_t j : it->second )
      {
        const auto& b = current[j];
        const uint32_t diff = a.value ^ b.value;
        if ( std::popcount( diff ) != 1 )
        {
          continue;
        }
        combined[i] = combined[j] = true;
        implicant merged{ a.value & ~diff, a.dash | diff };
        if ( next_set.insert( merged ).second )
        {
          next.push_back( merged );
        }
      }
    }

    for ( size_t i = 0; i < current.size(); ++i )
    {
      if ( !combined[i] )
      {
        primes.push_back( to_cube( current[i], nvars ) );
      }
    }
    current = std::move( next );
  }

  std::sort( primes.begin(), primes.end() );
  return primes;
}

std::vector<std::string> qm_minimize( const std::vector<uint32_t>& on_set, uint32_t nvars )
{
  std::vector<uint32_t> minterms = on_set;
  std::sort( minterms.begin(), minterms.end() );
  minterms.erase( std::unique( minterms.begin(), minterms.end() ), minterms.end() );

  if ( minterms.empty() )
  {
    return {};
  }
  if ( nvars == 0 || minterms.size() == ( size_t( 1 ) << nvars ) )
  {
    return { std::string( nvars, '-' ) };
  }

  const auto primes = prime_implicants( minterms, nvars );

  // coverage lists: indices into `minterms` covered by each prime
  std::unordered_map<uint32_t, uint32_t> minterm_pos;
  for ( uint32_t i = 0; i < minterms.size(); ++i )
  {
    minterm_pos[minterms[i]] = i;
  }
  std::vector<std::vector<uint32_t>> covers( primes.size() );
  for ( size_t pi = 0; pi < primes.size(); ++pi )
  {
    const auto& cube = primes[pi];
    uint32_t base = 0, dash = 0;
    for ( uint32_t p = 0; p < nvars; ++p )
    {
      const uint32_t bit = nvars - 1 - p;
      if ( cube[p] == '-' )
      {
        dash |= 1u << bit;
      }
      else if ( cube[p] == '1' )
      {
        base |= 1u << bit;
      }
    }
    // enumerate subsets of the dash mask
    uint32_t sub = 0;
    while ( true )
    {
      const auto it = minterm_pos.find( base | sub );
      if ( it != minterm_pos.end() )
      {
        covers[pi].push_back( it->second );
      }
      if ( sub == dash )
      {
        break;
      }
      sub = ( sub - dash ) & dash;
    }
  }

  std::vector<bool> covered( minterms.size(), false );
  size_t remaining = minterms.size();
  std::vector<std::string> cover;
  std::vector<bool> used( primes.size(), false );

  while ( remaining > 0 )
  {
    size_t best = primes.size();
    size_t best_count = 0;
    for ( size_t pi = 0; pi < primes.size(); ++pi )
    {
      if ( used[pi] )
      {
        continue;
      }
      size_t count = 0;
      for ( uint32_t idx : covers[pi] )
      {
        if ( !covered[idx] )
        {
          ++count;
        }
      }
      if ( count > best_count || ( count == best_count && count > 0 && primes[pi] < primes[best] ) )
      {
        best = pi;
        best_count = count;
      }
    }
    if ( best == primes.size() )
    {
      throw validation_error( "qm_minimize: cover construction failed" );
    }
    used[best] = true;
    cover.push_back( primes[best] );
    for ( uint32_t idx : covers[best] )
    {
      if ( !covered[idx] )
      {
        covered[idx] = true;
        --remaining;
      }
    }
  }

  std::sort( cover.begin(), cover.end() );
  return cover;
}

} // namespace bmfsyn
