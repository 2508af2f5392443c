#include "bmfsyn/netlist.hpp"

#include <algorithm>
#include <bit>

#include "bmfsyn/common.hpp"

namespace bmfsyn
{

namespace
{

uint32_t min_arity( gate_kind kind )
{
  switch ( kind )
  {
  case gate_kind::const0_gate:
  case gate_kind::const1_gate:
    return 0;
  case gate_kind::not_gate:
  case gate_kind::buf_gate:
    return 1;
  case gate_kind::pla:
    return 0;
  default:
    return 2;
  }
}

uint32_t max_arity( gate_kind kind )
{
  switch ( kind )
  {
  case gate_kind::const0_gate:
  case gate_kind::const1_gate:
    return 0;
  case gate_kind::not_gate:
  case gate_kind::buf_gate:
    return 1;
  case gate_kind::pla:
    return 0xffffffffu;
  default:
    return 0xffffffffu;
  }
}

} // namespace

void netlist::add_gate( gate_kind kind, const std::vector<std::string>& fanins,
                        const std::string& output )
{
  logic_node node;
  node.output = output;
  node.kind = kind;
  node.fanins = fanins;
  nodes.push_back( std::move( node ) );
}

void netlist::add_pla( const std::vector<std::string>& fanins, const std::vector<std::string>& cubes,
                       const std::string& output )
{
  logic_node node;
  node.output = output;
  node.kind = gate_kind::pla;
  node.fanins = fanins;
  node.cubes = cubes;
  nodes.push_back( std::move( node ) );
}

std::unordered_map<std::string, size_t> netlist::driver_map() const
{
  std::unordered_map<std::string, size_t> drivers;
  drivers.reserve( nodes.size() );
  for ( size_t i = 0; i < nodes.size(); ++i )
  {
    if ( !drivers.emplace( nodes[i].output, i ).second )
    {
      throw validation_error( "net '" + nodes[i].output + "' has more than one driver" );
    }
  }
  return drivers;
}

std::vector<size_t> netlist::topological_order() const
{
  const auto drivers = driver_map();
  std::vector<uint8_t> mark( nodes.size(), 0 ); // 0 new, 1 on stack, 2 done
  std::vector<size_t> order;
  order.reserve( nodes.size() );

  // iterative DFS over nodes in declaration order keeps the result deterministic
  std::vector<std::pair<size_t, size_t>> stack;
  for ( size_t root = 0; root < nodes.size(); ++root )
  {
    if ( mark[root] )
    {
      continue;
    }
    stack.emplace_back( root, 0 );
    mark[root] = 1;
    while ( !stack.empty() )
    {
      auto& [idx, next] = stack.back();
      if ( next < nodes[idx].fanins.size() )
      {
        const auto it = drivers.find( nodes[idx].fanins[next] );
        ++next;
        if ( it == drivers.end() )
        {
          continue; // primary input (or undefined; validate() reports those)
        }
        const size_t child = it->second;
        if ( mark[child] == 1 )
        {
          throw validation_error( "combinational cycle through net '" + nodes[child].output + "'" );
        }
        if ( mark[child] == 0 )
        {
          mark[child] = 1;
          stack.emplace_back( child, 0 );
        }
      }
      else
      {
        mark[idx] = 2;
        order.push_back( idx );
        stack.pop_back();
      }
    }
  }
  return order;
}

std::vector<uint32_t> netlist::node_levels() const
{
  const auto drivers = driver_map();
  const auto order = topological_order();
  std::vector<uint32_t> level( nodes.size(), 1 );
  for ( size_t idx : order )
  {
    uint32_t lvl = 0;
    for ( const auto& fi : nodes[idx].fanins )
    {
      const auto it = drivers.find( fi );
      if ( it != drivers.end() )
      {
        lvl = std::max( lvl, level[it->second] );
      }
    }
    level[idx] = lvl + 1;
  }
  return level;
}

void netlist::validate() const
{
  if ( name.empty() )
  {
    throw validation_error( "netlist has no model name" );
  }

  std::unordered_set<std::string> input_set;
  for ( const auto& in : inputs )
  {
    if ( !input_set.insert( in ).second )
    {
      throw validation_error( "primary input '" + in + "' listed twice" );
    }
  }

  const auto drivers = driver_map();
  for ( const auto& [net, idx] : drivers )
  {
    (void)idx;
    if ( input_set.count( net ) )
    {
      throw validation_error( "net '" + net + "' is both a primary input and a node output" );
    }
  }

  for ( const auto& node : nodes )
  {
    const auto arity = static_cast<uint32_t>( node.fanins.size() );
    if ( arity < min_arity( node.kind ) || arity > max_arity( node.kind ) )
    {
      throw validation_error( "node '" + node.output + "' has invalid fanin count " +
                              std::to_string( arity ) );
    }
    for ( const auto& fi : node.fanins )
    {
      if ( !input_set.count( fi ) && !drivers.count( fi ) )
      {
        throw validation_error( "node '" + node.output + "' references undriven net '" + fi + "'" );
      }
    }
    if ( node.kind == gate_kind::pla )
    {
      for ( const auto& cube : node.cubes )
      {
        if ( cube.size() != node.fanins.size() )
        {
          throw validation_error( "node '" + node.output + "' has a cube of width " +
                                  std::to_string( cube.size() ) + ", expected " +
                                  std::to_string( node.fanins.size() ) );
        }
        for ( char ch : cube )
        {
          if ( ch != '0' && ch != '1' && ch != '-' )
          {
            throw validation_error( "node '" + node.output + "' has invalid cube character '" +
                                    std::string( 1, ch ) + "'" );
          }
        }
      }
    }
    else if ( !node.cubes.empty() )
    {
      throw validation_error( "primitive node '" + node.output + "' carries cube rows" );
    }
  }

  std::unordered_set<std::string> output_set;
  for ( const auto& out : outputs )
  {
    if ( !output_set.insert( out ).second )
    {
      throw validation_error( "primary output '" + out + "' listed twice" );
    }
    if ( !input_set.count( out ) && !drivers.count( out ) )
    {
      throw validation_error( "primary output '" + out + "' is undriven" );
    }
  }

  topological_order(); // throws on cycles
}

std::vector<std::string> node_cover( const logic_node& node )
{
  const size_t n = node.fanins.size();
  std::vector<std::string> cover;
  switch ( node.kind )
  {
  case gate_kind::pla:
    cover = node.cubes;
    break;
  case gate_kind::const0_gate:
    break;
  case gate_kind::const1_gate:
    cover.push_back( "" );
    break;
  case gate_kind::buf_gate:
    cover.push_back( "1" );
    break;
  case gate_kind::not_gate:
    cover.push_back( "0" );
    break;
  case gate_kind::and_gate:
    cover.push_back( std::string( n, '1' ) );
    break;
  case gate_kind::nor_gate:
    cover.push_back( std::string( n, '0' ) );
    break;
  case gate_kind::or_gate:
    for ( size_t i = 0; i < n; ++i )
    {
      std::string cube( n, '-' );
      cube[i] = '1';
      cover.push_back( std::move( cube ) );
    }
    break;
  case gate_kind::nand_gate:
    for ( size_t i = 0; i < n; ++i )
    {
      std::string cube( n, '-' );
      cube[i] = '0';
      cover.push_back( std::move( cube ) );
    }
    break;
  case gate_kind::xor_gate:
  case gate_kind::xnor_gate:
  {
    // parity expands to minterms; decompressor trees keep arity at two
    const bool want_odd = node.kind == gate_kind::xor_gate;
    if ( n > 20 )
    {
      throw validation_error( "parity gate fanin too large to expand" );
    }
    for ( uint32_t v = 0; v < ( 1u << n ); ++v )
    {
      const bool odd = ( std::popcount( v ) & 1 ) != 0;
      if ( odd != want_odd )
      {
        continue;
      }
      std::string cube( n, '0' );
      for ( size_t i = 0; i < n; ++i )
      {
        if ( ( v >> i ) & 1u )
        {
          cube[i] = '1';
        }
      }
      cover.push_back( std::move( cube ) );
    }
    break;
  }
  }
  std::sort( cover.begin(), cover.end() );
  return cover;
}

bool structurally_equal( const netlist& a, const netlist& b )
{
  if ( a.name != b.name || a.inputs != b.inputs || a.outputs != b.outputs ||
       a.nodes.size() != b.nodes.size() )
  {
    return false;
  }
  std::unordered_map<std::string, const logic_node*> b_nodes;
  for ( const auto& node : b.nodes )
  {
    b_nodes[node.output] = &node;
  }
  for ( const auto& node : a.nodes )
  {
    const auto it = b_nodes.find( node.output );
    if ( it == b_nodes.end() || node.fanins != it->second->fanins ||
         node_cover( node ) != node_cover( *it->second ) )
    {
      return false;
    }
  }
  return true;
}

std::string fresh_net_name( const std::string& base, const std::unordered_set<std::string>& used )
{
  if ( !used.count( base ) )
  {
    return base;
  }
  for ( uint32_t i = 0;; ++i )
  {
    std::string candidate = base + "_" + std::to_string( i );
    if ( !used.count( candidate ) )
    {
      return candidate;
    }
  }
}

std::unordered_set<std::string> net_names( const netlist& n )
{
  std::unordered_set<std::string> names;
  names.insert( n.inputs.begin(), n.inputs.end() );
  names.insert( n.outputs.begin(), n.outputs.end() );
  for ( const auto& node : n.nodes )
  {
    names.insert( node.output );
    names.insert( node.fanins.begin(), node.fanins.end() );
  }
  return names;
}

} // namespace bmfsyn
