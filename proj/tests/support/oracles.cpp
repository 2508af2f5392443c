#include "support/oracles.hpp"

#include <algorithm>
#include <stdexcept>

#include "bmfsyn/sim.hpp"

namespace bmfsyn::test
{

uint64_t loop_hamming( const bit_matrix& a, const bit_matrix& b )
{
  uint64_t count = 0;
  for ( uint32_t i = 0; i < a.rows(); ++i )
  {
    for ( uint32_t j = 0; j < a.cols(); ++j )
    {
      if ( a.get( i, j ) != b.get( i, j ) )
      {
        ++count;
      }
    }
  }
  return count;
}

double loop_weighted( const bit_matrix& a, const bit_matrix& b, const std::vector<double>& w )
{
  double total = 0.0;
  for ( uint32_t i = 0; i < a.rows(); ++i )
  {
    for ( uint32_t j = 0; j < a.cols(); ++j )
    {
      if ( a.get( i, j ) != b.get( i, j ) )
      {
        total += w[j];
      }
    }
  }
  return total;
}

bit_matrix loop_product( const bit_matrix& b, const bit_matrix& c, semiring s )
{
  bit_matrix out( b.rows(), c.cols() );
  for ( uint32_t i = 0; i < b.rows(); ++i )
  {
    for ( uint32_t j = 0; j < c.cols(); ++j )
    {
      bool acc = false;
      for ( uint32_t l = 0; l < b.cols(); ++l )
      {
        const bool term = b.get( i, l ) && c.get( l, j );
        acc = s == semiring::or_semiring ? ( acc || term ) : ( acc != term );
      }
      out.set( i, j, acc );
    }
  }
  return out;
}

netlist random_netlist( uint32_t num_inputs, uint32_t gates, uint64_t seed )
{
  std::mt19937_64 rng( seed );
  netlist n;
  n.name = "rand" + std::to_string( seed );
  std::vector<std::string> pool;
  for ( uint32_t i = 0; i < num_inputs; ++i )
  {
    const std::string name = "i" + std::to_string( i );
    n.add_input( name );
    pool.push_back( name );
  }

  std::uniform_int_distribution<int> kind_pick( 0, 6 );
  for ( uint32_t g = 0; g < gates; ++g )
  {
    const std::string out = "g" + std::to_string( g );
    std::uniform_int_distribution<size_t> net_pick( 0, pool.size() - 1 );
    const int kind = kind_pick( rng );
    if ( kind == 0 )
    {
      n.add_gate( gate_kind::not_gate, { pool[net_pick( rng )] }, out );
    }
    else if ( kind <= 4 )
    {
      static const gate_kind kinds[4] = { gate_kind::and_gate, gate_kind::or_gate,
                                          gate_kind::xor_gate, gate_kind::nand_gate };
      std::string f0 = pool[net_pick( rng )], f1 = pool[net_pick( rng )];
      while ( f1 == f0 )
      {
        f1 = pool[net_pick( rng )];
      }
      n.add_gate( kinds[kind - 1], { f0, f1 }, out );
    }
    else
    {
      // random 3-input PLA cover
      std::string f0 = pool[net_pick( rng )], f1 = pool[net_pick( rng )], f2 = pool[net_pick( rng )];
      while ( f1 == f0 )
      {
        f1 = pool[net_pick( rng )];
      }
      while ( f2 == f0 || f2 == f1 )
      {
        f2 = pool[net_pick( rng )];
      }
      std::uniform_int_distribution<int> rows_pick( 1, 3 );
      std::uniform_int_distribution<int> ch_pick( 0, 2 );
      std::vector<std::string> cubes;
      const int rows = rows_pick( rng );
      for ( int r = 0; r < rows; ++r )
      {
        std::string cube( 3, '-' );
        for ( int p = 0; p < 3; ++p )
        {
          cube[p] = "01-"[ch_pick( rng )];
        }
        cubes.push_back( cube );
      }
      n.add_pla( { f0, f1, f2 }, cubes, out );
    }
    pool.push_back( out );
  }

  // outputs: the last few gate nets
  const uint32_t num_outputs = std::min<uint32_t>( gates, 8 );
  for ( uint32_t j = 0; j < num_outputs; ++j )
  {
    n.add_output( "g" + std::to_string( gates - 1 - j ) );
  }
  n.validate();
  return n;
}

bool exhaustive_equivalent( const netlist& a, const netlist& b )
{
  if ( a.inputs.size() != b.inputs.size() || a.outputs.size() != b.outputs.size() )
  {
    return false;
  }
  if ( a.inputs.size() > 20 )
  {
    throw std::runtime_error( "exhaustive_equivalent: too many inputs" );
  }
  compiled_netlist pa( a ), pb( b );
  auto sa = pa.make_state(), sb = pb.make_state();
  std::vector<uint64_t> ia( pa.num_inputs() ), ib( pb.num_inputs() );
  std::vector<uint64_t> oa( pa.num_outputs() ), ob( pb.num_outputs() );
  const uint64_t rows = uint64_t( 1 ) << a.inputs.size();
  for ( uint64_t base = 0; base < rows; base += 64 )
  {
    for ( uint64_t lane = 0; lane < 64; ++lane )
    {
      const uint64_t r = base + lane;
      for ( size_t i = 0; i < a.inputs.size(); ++i )
      {
        const uint64_t bit = ( r >> ( a.inputs.size() - 1 - i ) ) & 1ull;
        if ( lane == 0 )
        {
          ia[i] = 0;
        }
        ia[i] |= bit << lane;
      }
    }
    ib = ia;
    pa.eval64( sa, ia.data(), oa.data() );
    pb.eval64( sb, ib.data(), ob.data() );
    const uint64_t lanes = std::min<uint64_t>( 64, rows - base );
    const uint64_t mask = lanes == 64 ? ~0ull : ( ( 1ull << lanes ) - 1 );
    for ( size_t j = 0; j < oa.size(); ++j )
    {
      if ( ( ( oa[j] ^ ob[j] ) & mask ) != 0 )
      {
        return false;
      }
    }
  }
  return true;
}

std::vector<bool> random_inputs( const netlist& n, std::mt19937_64& rng )
{
  std::vector<bool> iv( n.inputs.size() );
  for ( size_t i = 0; i < iv.size(); ++i )
  {
    iv[i] = ( rng() & 1ull ) != 0;
  }
  return iv;
}

uint64_t word_value( const std::vector<std::string>& bits_msb_first,
                     const std::vector<std::string>& port_names, const std::vector<bool>& values )
{
  uint64_t value = 0;
  for ( const auto& bit : bits_msb_first )
  {
    const auto it = std::find( port_names.begin(), port_names.end(), bit );
    if ( it == port_names.end() )
    {
      throw std::runtime_error( "word_value: unknown port '" + bit + "'" );
    }
    value = ( value << 1 ) | ( values[it - port_names.begin()] ? 1ull : 0ull );
  }
  return value;
}

netlist invert_output( const netlist& n, const std::string& output )
{
  netlist out = n;
  const std::string inner = fresh_net_name( output + "_pre", net_names( out ) );
  bool found = false;
  for ( auto& node : out.nodes )
  {
    if ( node.output == output )
    {
      node.output = inner;
      found = true;
      break;
    }
  }
  if ( !found )
  {
    throw std::runtime_error( "invert_output: '" + output + "' has no driving node" );
  }
  out.add_gate( gate_kind::not_gate, { inner }, output );
  out.validate();
  return out;
}

netlist force_zero_outputs( const netlist& n, const std::vector<std::string>& outputs )
{
  netlist out = n;
  for ( const auto& name : outputs )
  {
    bool found = false;
    for ( auto& node : out.nodes )
    {
      if ( node.output == name )
      {
        node = logic_node{ name, gate_kind::const0_gate, {}, {} };
        found = true;
        break;
      }
    }
    if ( !found )
    {
      throw std::runtime_error( "force_zero_outputs: '" + name + "' has no driving node" );
    }
  }
  out.validate();
  return out;
}

netlist rename_nets( const netlist& n, const std::unordered_map<std::string, std::string>& fixed,
                     const std::string& prefix )
{
  const auto map_net = [&]( const std::string& net ) {
    const auto it = fixed.find( net );
    return it != fixed.end() ? it->second : prefix + net;
  };
  netlist out;
  out.name = n.name;
  for ( const auto& in : n.inputs )
  {
    out.add_input( map_net( in ) );
  }
  for ( const auto& po : n.outputs )
  {
    out.add_output( map_net( po ) );
  }
  for ( const auto& node : n.nodes )
  {
    logic_node copy = node;
    copy.output = map_net( node.output );
    for ( auto& fi : copy.fanins )
    {
      fi = map_net( fi );
    }
    out.nodes.push_back( std::move( copy ) );
  }
  return out;
}

} // namespace bmfsyn::test
