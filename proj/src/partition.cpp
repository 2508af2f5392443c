#include "bmfsyn/partition.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "bmfsyn/common.hpp"

namespace bmfsyn
{

namespace
{

struct partition_context
{
  const netlist& n;
  std::unordered_map<std::string, size_t> drivers;
  std::vector<std::vector<size_t>> consumers; // node idx -> consuming node idxs
  std::unordered_set<std::string> po_set;
  std::vector<size_t> topo;

  explicit partition_context( const netlist& nl ) : n( nl )
  {
    drivers = n.driver_map();
    consumers.resize( n.nodes.size() );
    for ( size_t v = 0; v < n.nodes.size(); ++v )
    {
      for ( const auto& fi : n.nodes[v].fanins )
      {
        const auto it = drivers.find( fi );
        if ( it != drivers.end() )
        {
          consumers[it->second].push_back( v );
        }
      }
    }
    po_set.insert( n.outputs.begin(), n.outputs.end() );
    topo = n.topological_order();
  }

  /* A member output is a boundary output when it feeds a primary output, a
   * node outside the cluster, or nothing at all (dangling nets stay
   * observable so dead logic keeps a well-formed subcircuit). */
  bool is_boundary_output( size_t v, const std::vector<int>& cluster_of, int cluster ) const
  {
    if ( po_set.count( n.nodes[v].output ) )
    {
      return true;
    }
    if ( consumers[v].empty() )
    {
      return true;
    }
    for ( size_t c : consumers[v] )
    {
      if ( cluster_of[c] != cluster )
      {
        return true;
      }
    }
    return false;
  }

  void count_bounds( const std::vector<size_t>& members, const std::vector<int>& cluster_of,
                     int cluster, uint32_t& num_in, uint32_t& num_out ) const
  {
    std::unordered_set<std::string> ins;
    num_out = 0;
    for ( size_t v : members )
    {
      for ( const auto& fi : n.nodes[v].fanins )
      {
        const auto it = drivers.find( fi );
        if ( it == drivers.end() || cluster_of[it->second] != cluster )
        {
          ins.insert( fi );
        }
      }
      if ( is_boundary_output( v, cluster_of, cluster ) )
      {
        ++num_out;
      }
    }
    num_in = static_cast<uint32_t>( ins.size() );
  }

  bool quotient_acyclic( const std::vector<int>& cluster_of, size_t num_clusters ) const
  {
    std::vector<std::unordered_set<int>> edges( num_clusters );
    for ( size_t u = 0; u < n.nodes.size(); ++u )
    {
      for ( size_t v : consumers[u] )
      {
        if ( cluster_of[u] != cluster_of[v] )
        {
          edges[cluster_of[u]].insert( cluster_of[v] );
        }
      }
    }
    std::vector<uint8_t> mark( num_clusters, 0 );
    std::vector<std::pair<int, std::unordered_set<int>::const_iterator>> stack;
    for ( size_t root = 0; root < num_clusters; ++root )
    {
      if ( mark[root] )
      {
        continue;
      }
      mark[root] = 1;
      stack.emplace_back( static_cast<int>( root ), edges[root].begin() );
      while ( !stack.empty() )
      {
        auto& [c, it] = stack.back();
        if ( it != edges[c].end() )
        {
          const int next = *it++;
          if ( mark[next] == 1 )
          {
            return false;
          }
          if ( mark[next] == 0 )
          {
            mark[next] = 1;
            stack.emplace_back( next, edges[next].begin() );
          }
        }
        else
        {
          mark[c] = 2;
          stack.pop_back();
        }
      }
    }
    return true;
  }
};

} // namespace

circuit_partition decompose( const netlist& n, uint32_t k, uint32_t m )
{
  if ( k < 1 || m < 1 )
  {
    throw validation_error( "decompose: k and m must be at least 1" );
  }
  n.validate();
  partition_context ctx( n );

  std::vector<int> cluster_of( n.nodes.size(), -1 );
  std::vector<std::vector<size_t>> clusters;

  for ( size_t v : ctx.topo )
  {
    std::unordered_set<std::string> fanin_nets( n.nodes[v].fanins.begin(), n.nodes[v].fanins.end() );
    if ( fanin_nets.size() > k )
    {
      throw validation_error( "decompose: node '" + n.nodes[v].output + "' has " +
                              std::to_string( fanin_nets.size() ) + " fanin nets, more than k = " +
                              std::to_string( k ) );
    }

    bool placed = false;
    if ( !clusters.empty() )
    {
      const int c = static_cast<int>( clusters.size() ) - 1;
      clusters[c].push_back( v );
      cluster_of[v] = c;
      uint32_t num_in = 0, num_out = 0;
      ctx.count_bounds( clusters[c], cluster_of, c, num_in, num_out );
      if ( num_in <= k && num_out <= m )
      {
        placed = true;
      }
      else
      {
        clusters[c].pop_back();
        cluster_of[v] = -1;
      }
    }
    if ( !placed )
    {
      cluster_of[v] = static_cast<int>( clusters.size() );
      clusters.push_back( { v } );
    }
  }

  // refinement: move single nodes toward neighbouring clusters when that
  // shrinks the total boundary, preserving bounds and quotient acyclicity
  for ( size_t v : ctx.topo )
  {
    const int c = cluster_of[v];
    if ( clusters[c].size() <= 1 )
    {
      continue;
    }
    std::vector<int> targets;
    for ( const auto& fi : n.nodes[v].fanins )
    {
      const auto it = ctx.drivers.find( fi );
      if ( it != ctx.drivers.end() && cluster_of[it->second] != c )
      {
        targets.push_back( cluster_of[it->second] );
      }
    }
    for ( size_t u : ctx.consumers[v] )
    {
      if ( cluster_of[u] != c )
      {
        targets.push_back( cluster_of[u] );
      }
    }
    std::sort( targets.begin(), targets.end() );
    targets.erase( std::unique( targets.begin(), targets.end() ), targets.end() );

    uint32_t c_in = 0, c_out = 0;
    ctx.count_bounds( clusters[c], cluster_of, c, c_in, c_out );

    int best_target = -1;
    uint32_t best_cost = 0;
    for ( int t : targets )
    {
      uint32_t t_in = 0, t_out = 0;
      ctx.count_bounds( clusters[t], cluster_of, t, t_in, t_out );
      const uint32_t before = c_in + c_out + t_in + t_out;

      // tentative move
      cluster_of[v] = t;
      auto& cm = clusters[c];
      cm.erase( std::find( cm.begin(), cm.end(), v ) );
      clusters[t].push_back( v );

      uint32_t nc_in = 0, nc_out = 0, nt_in = 0, nt_out = 0;
      ctx.count_bounds( clusters[c], cluster_of, c, nc_in, nc_out );
      ctx.count_bounds( clusters[t], cluster_of, t, nt_in, nt_out );
      const uint32_t after = nc_in + nc_out + nt_in + nt_out;

      const bool ok = nt_in <= k && nt_out <= m && nc_in <= k && nc_out >= 1 && nc_out <= m &&
                      after < before && ctx.quotient_acyclic( cluster_of, clusters.size() );

      // undo
      clusters[t].pop_back();
      cm.insert( std::upper_bound( cm.begin(), cm.end(), v ), v );
      cluster_of[v] = c;

      if ( ok && ( best_target < 0 || after < best_cost ) )
      {
        best_target = t;
        best_cost = after;
      }
    }
    if ( best_target >= 0 )
    {
      auto& cm = clusters[c];
      cm.erase( std::find( cm.begin(), cm.end(), v ) );
      clusters[best_target].push_back( v );
      std::sort( clusters[best_target].begin(), clusters[best_target].end() );
      cluster_of[v] = best_target;
    }
  }

  // materialize, ordering members and boundaries by parent topological order
  std::vector<uint32_t> topo_pos( n.nodes.size() );
  for ( size_t i = 0; i < ctx.topo.size(); ++i )
  {
    topo_pos[ctx.topo[i]] = static_cast<uint32_t>( i );
  }

  circuit_partition part;
  for ( size_t c = 0; c < clusters.size(); ++c )
  {
    auto members = clusters[c];
    std::sort( members.begin(), members.end(),
               [&]( size_t a, size_t b ) { return topo_pos[a] < topo_pos[b]; } );
    subcircuit sub;
    sub.id = static_cast<int>( c );
    std::unordered_set<std::string> seen_in;
    for ( size_t v : members )
    {
      sub.nodes.push_back( n.nodes[v].output );
      part.assignment[n.nodes[v].output] = sub.id;
      for ( const auto& fi : n.nodes[v].fanins )
      {
        const auto it = ctx.drivers.find( fi );
        const bool external = it == ctx.drivers.end() || cluster_of[it->second] != static_cast<int>( c );
        if ( external && seen_in.insert( fi ).second )
        {
          sub.boundary_inputs.push_back( fi );
        }
      }
      if ( ctx.is_boundary_output( v, cluster_of, static_cast<int>( c ) ) )
      {
        sub.boundary_outputs.push_back( n.nodes[v].output );
      }
    }
    part.subcircuits.push_back( std::move( sub ) );
  }

  validate_partition( n, part, k, m );
  return part;
}

void validate_partition( const netlist& n, const circuit_partition& p, uint32_t k, uint32_t m )
{
  const auto drivers = n.driver_map();
  const std::unordered_set<std::string> po_set( n.outputs.begin(), n.outputs.end() );

  // disjoint cover
  std::unordered_map<std::string, int> seen;
  size_t total = 0;
  for ( const auto& sub : p.subcircuits )
  {
    if ( sub.nodes.empty() )
    {
      throw validation_error( "partition: subcircuit " + std::to_string( sub.id ) + " is empty" );
    }
    for ( const auto& net : sub.nodes )
    {
      if ( !drivers.count( net ) )
      {
        throw validation_error( "partition: node '" + net + "' not present in the netlist" );
      }
      if ( !seen.emplace( net, sub.id ).second )
      {
        throw validation_error( "partition: node '" + net + "' assigned twice" );
      }
      const auto it = p.assignment.find( net );
      if ( it == p.assignment.end() || it->second != sub.id )
      {
        throw validation_error( "partition: assignment map inconsistent for '" + net + "'" );
      }
      ++total;
    }
  }
  if ( total != n.nodes.size() )
  {
    throw validation_error( "partition: covers " + std::to_string( total ) + " of " +
                            std::to_string( n.nodes.size() ) + " nodes" );
  }

  const auto cluster_of_net = [&]( const std::string& net ) -> int {
    const auto it = seen.find( net );
    return it == seen.end() ? -1 : it->second;
  };

  for ( const auto& sub : p.subcircuits )
  {
    std::unordered_set<std::string> members( sub.nodes.begin(), sub.nodes.end() );
    std::unordered_set<std::string> expected_in;
    std::unordered_set<std::string> expected_out;
    for ( const auto& net : sub.nodes )
    {
      const auto& node = n.nodes.at( drivers.at( net ) );
      for ( const auto& fi : node.fanins )
      {
        if ( !members.count( fi ) )
        {
          expected_in.insert( fi );
        }
      }
    }
    // recompute boundary outputs from consumers
    for ( const auto& net : sub.nodes )
    {
      bool boundary = po_set.count( net ) > 0;
      bool consumed = false;
      for ( const auto& other : n.nodes )
      {
        for ( const auto& fi : other.fanins )
        {
          if ( fi == net )
          {
            consumed = true;
            if ( !members.count( other.output ) )
            {
              boundary = true;
            }
          }
        }
      }
      if ( !consumed && !po_set.count( net ) )
      {
        boundary = true; // dangling
      }
      if ( boundary )
      {
        expected_out.insert( net );
      }
    }

    if ( expected_in.size() != sub.boundary_inputs.size() ||
         !std::all_of( sub.boundary_inputs.begin(), sub.boundary_inputs.end(),
                       [&]( const std::string& s ) { return expected_in.count( s ) > 0; } ) )
    {
      throw validation_error( "partition: boundary inputs of subcircuit " + std::to_string( sub.id ) +
                              " are inconsistent" );
    }
    if ( expected_out.size() != sub.boundary_outputs.size() ||
         !std::all_of( sub.boundary_outputs.begin(), sub.boundary_outputs.end(),
                       [&]( const std::string& s ) { return expected_out.count( s ) > 0; } ) )
    {
      throw validation_error( "partition: boundary outputs of subcircuit " + std::to_string( sub.id ) +
                              " are inconsistent" );
    }
    if ( sub.boundary_inputs.size() > k )
    {
      throw validation_error( "partition: subcircuit " + std::to_string( sub.id ) + " has " +
                              std::to_string( sub.boundary_inputs.size() ) + " inputs, bound is " +
                              std::to_string( k ) );
    }
    if ( sub.boundary_outputs.empty() || sub.boundary_outputs.size() > m )
    {
      throw validation_error( "partition: subcircuit " + std::to_string( sub.id ) + " has " +
                              std::to_string( sub.boundary_outputs.size() ) + " outputs, bound is " +
                              std::to_string( m ) );
    }
  }

  // quotient acyclicity via repeated source elimination
  const size_t num = p.subcircuits.size();
  std::vector<std::unordered_set<int>> edges( num );
  std::vector<int> indeg( num, 0 );
  for ( const auto& node : n.nodes )
  {
    const int to = cluster_of_net( node.output );
    for ( const auto& fi : node.fanins )
    {
      const int from = cluster_of_net( fi );
      if ( from >= 0 && from != to && edges[from].insert( to ).second )
      {
        ++indeg[to];
      }
    }
  }
  std::vector<int> queue;
  for ( size_t c = 0; c < num; ++c )
  {
    if ( indeg[c] == 0 )
    {
      queue.push_back( static_cast<int>( c ) );
    }
  }
  size_t processed = 0;
  while ( !queue.empty() )
  {
    const int c = queue.back();
    queue.pop_back();
    ++processed;
    for ( int t : edges[c] )
    {
      if ( --indeg[t] == 0 )
      {
        queue.push_back( t );
      }
    }
  }
  if ( processed != num )
  {
    throw validation_error( "partition: quotient graph has a cycle" );
  }
}

netlist extract( const netlist& n, const subcircuit& s )
{
  const auto drivers = n.driver_map();
  netlist out;
  out.name = n.name + "_s" + std::to_string( s.id );
  out.inputs = s.boundary_inputs;
  out.outputs = s.boundary_outputs;

  for ( const auto& net : s.nodes )
  {
    const auto it = drivers.find( net );
    if ( it == drivers.end() )
    {
      throw validation_error( "extract: stale subcircuit, node '" + net + "' missing" );
    }
    out.nodes.push_back( n.nodes[it->second] );
  }
  out.validate();
  return out;
}

netlist substitute( const netlist& n, const subcircuit& s, const netlist& replacement )
{
  if ( replacement.inputs.size() != s.boundary_inputs.size() ||
       replacement.outputs.size() != s.boundary_outputs.size() )
  {
    throw validation_error( "substitute: replacement ports (" +
                            std::to_string( replacement.inputs.size() ) + " in, " +
                            std::to_string( replacement.outputs.size() ) +
                            " out) do not match the subcircuit boundary (" +
                            std::to_string( s.boundary_inputs.size() ) + " in, " +
                            std::to_string( s.boundary_outputs.size() ) + " out)" );
  }
  const auto drivers = n.driver_map();
  std::unordered_set<std::string> members;
  for ( const auto& net : s.nodes )
  {
    if ( !drivers.count( net ) )
    {
      throw validation_error( "substitute: stale subcircuit, node '" + net + "' missing" );
    }
    members.insert( net );
  }

  netlist out;
  out.name = n.name;
  out.inputs = n.inputs;
  out.outputs = n.outputs;
  for ( const auto& node : n.nodes )
  {
    if ( !members.count( node.output ) )
    {
      out.nodes.push_back( node );
    }
  }

  // map replacement nets: input ports onto boundary inputs, output ports onto
  // boundary outputs, everything else onto fresh internal names
  std::unordered_set<std::string> used = net_names( n );
  std::unordered_map<std::string, std::string> rename;
  for ( size_t i = 0; i < replacement.inputs.size(); ++i )
  {
    rename.emplace( replacement.inputs[i], s.boundary_inputs[i] );
  }
  for ( size_t j = 0; j < replacement.outputs.size(); ++j )
  {
    rename.emplace( replacement.outputs[j], s.boundary_outputs[j] );
  }
  const auto map_net = [&]( const std::string& net ) -> std::string {
    const auto it = rename.find( net );
    if ( it != rename.end() )
    {
      return it->second;
    }
    std::string fresh = fresh_net_name( "s" + std::to_string( s.id ) + "_" + net, used );
    used.insert( fresh );
    rename.emplace( net, fresh );
    return fresh;
  };

  const auto repl_order = replacement.topological_order();
  for ( size_t idx : repl_order )
  {
    const auto& node = replacement.nodes[idx];
    logic_node copy;
    copy.kind = node.kind;
    copy.cubes = node.cubes;
    copy.output = map_net( node.output );
    for ( const auto& fi : node.fanins )
    {
      copy.fanins.push_back( map_net( fi ) );
    }
    out.nodes.push_back( std::move( copy ) );
  }

  // output ports whose replacement net is an input port (wire-through) have
  // no driver after renaming; buffer them explicitly
  const auto out_drivers_check = [&]() {
    std::unordered_set<std::string> driven( out.inputs.begin(), out.inputs.end() );
    for ( const auto& node : out.nodes )
    {
      driven.insert( node.output );
    }
    return driven;
  };
  const auto driven = out_drivers_check();
  for ( size_t j = 0; j < replacement.outputs.size(); ++j )
  {
    const std::string& target = s.boundary_outputs[j];
    if ( !driven.count( target ) )
    {
      out.add_gate( gate_kind::buf_gate, { rename.at( replacement.outputs[j] ) }, target );
    }
  }

  out.validate();
  return out;
}

std::string partition_report_json( const circuit_partition& p )
{
  nlohmann::json report = nlohmann::json::array();
  for ( const auto& sub : p.subcircuits )
  {
    report.push_back( { { "id", sub.id },
                        { "node_count", sub.nodes.size() },
                        { "inputs", sub.boundary_inputs.size() },
                        { "outputs", sub.boundary_outputs.size() } } );
  }
  return report.dump( 2 );
}

} // namespace bmfsyn
