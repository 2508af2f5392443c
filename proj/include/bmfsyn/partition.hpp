/*!
  \file partition.hpp
  \brief Bounded-I/O netlist decomposition

  Splits a netlist into disjoint subcircuits with at most k boundary inputs
  and m boundary outputs each, keeping the quotient graph acyclic so any
  subcircuit can later be swapped for a resynthesized replacement without
  creating combinational cycles. Nodes are identified by their output net,
  which stays stable across substitutions elsewhere in the circuit.
*/

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bmfsyn/netlist.hpp"

namespace bmfsyn
{

struct subcircuit
{
  int id = 0;
  std::vector<std::string> nodes;            //!< member node output nets, topological order
  std::vector<std::string> boundary_inputs;  //!< ordered nets feeding the set from outside
  std::vector<std::string> boundary_outputs; //!< ordered member nets consumed outside or POs
};

struct circuit_partition
{
  std::vector<subcircuit> subcircuits;
  std::unordered_map<std::string, int> assignment; //!< node output net -> subcircuit id
};

/*! \brief Greedy topological clustering under (k, m) bounds with one
 * boundary-reducing refinement pass. Deterministic. Rejects netlists holding
 * a node with more than k fanin nets. */
circuit_partition decompose( const netlist& n, uint32_t k, uint32_t m );

/*! \brief Independent re-check of the partition contract: disjoint cover of
 * all nodes, per-subcircuit bounds, quotient acyclicity, boundary lists
 * consistent. Throws validation_error when violated. */
void validate_partition( const netlist& n, const circuit_partition& p, uint32_t k, uint32_t m );

/*! \brief Standalone netlist for one subcircuit: primary inputs are the
 * boundary inputs, primary outputs the boundary outputs. */
netlist extract( const netlist& n, const subcircuit& s );

/*! \brief Splice `replacement` in place of the subcircuit. Replacement ports
 * match the boundary lists by position; internal replacement nets are renamed
 * to avoid collisions. The result is validated. */
netlist substitute( const netlist& n, const subcircuit& s, const netlist& replacement );

/*! \brief JSON report: [{id, node_count, inputs, outputs}]. */
std::string partition_report_json( const circuit_partition& p );

} // namespace bmfsyn
