#include "bmfsyn/blif.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "bmfsyn/common.hpp"

namespace bmfsyn
{

namespace
{

struct logical_line
{
  std::vector<std::string> tokens;
  int number = 0; // first physical line of the (possibly continued) line
};

std::vector<logical_line> tokenize( const std::string& text )
{
  std::vector<logical_line> lines;
  std::istringstream in( text );
  std::string physical;
  int lineno = 0;
  bool continuing = false;
  while ( std::getline( in, physical ) )
  {
    ++lineno;
    const auto hash = physical.find( '#' );
    if ( hash != std::string::npos )
    {
      physical.erase( hash );
    }
    bool continues = false;
    auto end = physical.find_last_not_of( " \t\r" );
    if ( end != std::string::npos && physical[end] == '\\' )
    {
      continues = true;
      physical.erase( end );
    }
    else if ( end == std::string::npos )
    {
      physical.clear();
    }

    std::istringstream ls( physical );
    std::string token;
    if ( !continuing )
    {
      logical_line ll;
      ll.number = lineno;
      lines.push_back( ll );
    }
    while ( ls >> token )
    {
      lines.back().tokens.push_back( token );
    }
    continuing = continues;
    if ( !continuing && lines.back().tokens.empty() )
    {
      lines.pop_back();
    }
  }
  if ( !lines.empty() && lines.back().tokens.empty() )
  {
    lines.pop_back();
  }
  return lines;
}

} // namespace

netlist parse_blif( const std::string& text )
{
  const auto lines = tokenize( text );
  netlist n;
  std::unordered_set<std::string> driven;
  bool saw_model = false;
  bool saw_end = false;
  logic_node* open_names = nullptr;

  for ( const auto& line : lines )
  {
    if ( saw_end )
    {
      break;
    }
    const std::string& head = line.tokens.front();
    if ( head[0] == '.' )
    {
      open_names = nullptr;
      if ( head == ".model" )
      {
        if ( saw_model )
        {
          throw parse_error( "duplicate .model", line.number );
        }
        if ( line.tokens.size() != 2 )
        {
          throw parse_error( ".model expects exactly one name", line.number );
        }
        n.name = line.tokens[1];
        saw_model = true;
      }
      else if ( !saw_model )
      {
        throw parse_error( "expected .model before '" + head + "'", line.number );
      }
      else if ( head == ".inputs" )
      {
        for ( size_t i = 1; i < line.tokens.size(); ++i )
        {
          n.add_input( line.tokens[i] );
          driven.insert( line.tokens[i] );
        }
      }
      else if ( head == ".outputs" )
      {
        for ( size_t i = 1; i < line.tokens.size(); ++i )
        {
          n.add_output( line.tokens[i] );
        }
      }
      else if ( head == ".names" )
      {
        if ( line.tokens.size() < 2 )
        {
          throw parse_error( ".names expects at least an output", line.number );
        }
        logic_node node;
        node.kind = gate_kind::pla;
        node.output = line.tokens.back();
        node.fanins.assign( line.tokens.begin() + 1, line.tokens.end() - 1 );
        if ( !driven.insert( node.output ).second )
        {
          throw parse_error( "net '" + node.output + "' already has a driver", line.number );
        }
        n.nodes.push_back( std::move( node ) );
        open_names = &n.nodes.back();
      }
      else if ( head == ".end" )
      {
        saw_end = true;
      }
      else if ( head == ".latch" )
      {
        throw parse_error( "sequential constructs (.latch) not supported", line.number );
      }
      else if ( head == ".subckt" || head == ".gate" )
      {
        throw parse_error( "hierarchical construct '" + head + "' not supported", line.number );
      }
      else
      {
        throw parse_error( "unsupported construct '" + head + "'", line.number );
      }
    }
    else
    {
      if ( open_names == nullptr )
      {
        throw parse_error( "cover row outside a .names block", line.number );
      }
      const size_t width = open_names->fanins.size();
      std::string plane, out;
      if ( width == 0 )
      {
        if ( line.tokens.size() != 1 )
        {
          throw parse_error( "constant cover row expects a single output value", line.number );
        }
        out = line.tokens[0];
      }
      else
      {
        if ( line.tokens.size() != 2 )
        {
          throw parse_error( "cover row expects an input plane and an output value", line.number );
        }
        plane = line.tokens[0];
        out = line.tokens[1];
      }
      if ( out == "0" )
      {
        throw parse_error( "off-set (0) output plane not supported", line.number );
      }
      if ( out != "1" )
      {
        throw parse_error( "output plane must be '1'", line.number );
      }
      if ( plane.size() != width )
      {
        throw parse_error( "cover row width " + std::to_string( plane.size() ) + " does not match " +
                           std::to_string( width ) + " fanins", line.number );
      }
      for ( char ch : plane )
      {
        if ( ch != '0' && ch != '1' && ch != '-' )
        {
          throw parse_error( "invalid cover character '" + std::string( 1, ch ) + "'", line.number );
        }
      }
      open_names->cubes.push_back( plane );
    }
  }

  if ( !saw_model )
  {
    throw parse_error( "missing .model" );
  }
  n.validate();
  return n;
}

netlist parse_blif_file( const std::string& path )
{
  std::ifstream in( path );
  if ( !in )
  {
    throw parse_error( "cannot open '" + path + "'" );
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_blif( buf.str() );
}

std::string emit_blif( const netlist& n )
{
  n.validate();
  const auto levels = n.node_levels();

  std::vector<size_t> order( n.nodes.size() );
  for ( size_t i = 0; i < order.size(); ++i )
  {
    order[i] = i;
  }
  std::sort( order.begin(), order.end(), [&]( size_t a, size_t b ) {
    if ( levels[a] != levels[b] )
    {
      return levels[a] < levels[b];
    }
    return n.nodes[a].output < n.nodes[b].output;
  } );

  std::ostringstream out;
  out << ".model " << n.name << '\n';
  out << ".inputs";
  for ( const auto& in : n.inputs )
  {
    out << ' ' << in;
  }
  out << '\n';
  out << ".outputs";
  for ( const auto& po : n.outputs )
  {
    out << ' ' << po;
  }
  out << '\n';

  for ( size_t idx : order )
  {
    const auto& node = n.nodes[idx];
    out << ".names";
    for ( const auto& fi : node.fanins )
    {
      out << ' ' << fi;
    }
    out << ' ' << node.output << '\n';
    for ( const auto& cube : node_cover( node ) )
    {
      if ( cube.empty() )
      {
        out << "1\n";
      }
      else
      {
        out << cube << " 1\n";
      }
    }
  }
  out << ".end\n";
  return out.str();
}

void write_blif_file( const netlist& n, const std::string& path )
{
  std::ofstream out( path );
  if ( !out )
  {
    throw validation_error( "cannot write '" + path + "'" );
  }
  out << emit_blif( n );
}

} // namespace bmfsyn
