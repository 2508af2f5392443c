/*!
  \file netlist.hpp
  \brief Combinational gate-level netlist IR

  Nets are identified by name and have exactly one driver: a primary input or
  a logic node. Node functions are either primitive gates or single-output PLA
  covers (on-set cube rows over the node's fanins). The IR is combinational
  only; validation rejects cycles.
*/

#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace bmfsyn
{

enum class gate_kind
{
  pla,
  and_gate,
  or_gate,
  not_gate,
  xor_gate,
  nand_gate,
  nor_gate,
  xnor_gate,
  buf_gate,
  const0_gate,
  const1_gate
};

struct logic_node
{
  std::string output;
  gate_kind kind = gate_kind::pla;
  std::vector<std::string> fanins;
  std::vector<std::string> cubes; //!< PLA only: on-set rows over fanins, chars {0,1,-}
};

class netlist
{
public:
  std::string name;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<logic_node> nodes;

  void add_input( const std::string& net ) { inputs.push_back( net ); }
  void add_output( const std::string& net ) { outputs.push_back( net ); }

  void add_gate( gate_kind kind, const std::vector<std::string>& fanins, const std::string& output );
  void add_pla( const std::vector<std::string>& fanins, const std::vector<std::string>& cubes,
                const std::string& output );

  /*! \brief Index of the node driving each net; primary inputs are absent. */
  std::unordered_map<std::string, size_t> driver_map() const;

  /*! \brief Node indices in dependency order; throws on cycles. Deterministic. */
  std::vector<size_t> topological_order() const;

  /*! \brief Longest-path depth per node (primary inputs at depth 0). */
  std::vector<uint32_t> node_levels() const;

  /*! \brief Full consistency check: arities, drivers, acyclicity, driven outputs. */
  void validate() const;
};

/*! \brief Canonical cover of a node function, used for emission and comparison.
 *
 * Primitive gates expand to their on-set cube rows; PLA nodes pass through.
 */
std::vector<std::string> node_cover( const logic_node& node );

/*! \brief Structural equality modulo node order and cube row order.
 *
 * Port lists must match exactly; node functions compare by canonical cover,
 * so a primitive gate equals the PLA node it round-trips into.
 */
bool structurally_equal( const netlist& a, const netlist& b );

/*! \brief A net name based on `base` that does not collide with `used`. */
std::string fresh_net_name( const std::string& base, const std::unordered_set<std::string>& used );

/*! \brief All net names present in the netlist (ports and node outputs). */
std::unordered_set<std::string> net_names( const netlist& n );

} // namespace bmfsyn
