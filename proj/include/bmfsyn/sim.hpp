/*!
  \file sim.hpp
  \brief Netlist evaluation: scalar, word-parallel, and exhaustive truth tables

  A compiled_netlist is an immutable evaluation plan (net indices plus node
  instructions in dependency order). Evaluation state lives in a separate
  object so one plan can be shared read-only across worker threads.
*/

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bmfsyn/bit_matrix.hpp"
#include "bmfsyn/netlist.hpp"

namespace bmfsyn
{

class compiled_netlist
{
public:
  explicit compiled_netlist( const netlist& n );

  uint32_t num_inputs() const { return num_inputs_; }
  uint32_t num_outputs() const { return static_cast<uint32_t>( output_nets_.size() ); }
  uint32_t num_nets() const { return static_cast<uint32_t>( net_count_ ); }

  /*! \brief Net index by name, or -1 when absent. */
  int net_index( const std::string& name ) const;

  struct state
  {
    std::vector<uint64_t> nets;
  };

  state make_state() const { return state{ std::vector<uint64_t>( net_count_, 0 ) }; }

  /*! \brief Evaluate 64 samples at once; inputs/outputs are one word per port,
   * lane L of every word belonging to sample L. */
  void eval64( state& st, const uint64_t* input_words, uint64_t* output_words ) const;

private:
  struct literal
  {
    uint32_t net;
    bool positive;
  };
  struct instruction
  {
    gate_kind kind;
    uint32_t out;
    std::vector<uint32_t> fanins;
    std::vector<std::vector<literal>> cube_literals; // PLA only
    uint32_t dash_only_cubes = 0;                    // cubes with no literals (tautology rows)
  };

  size_t net_count_ = 0;
  uint32_t num_inputs_ = 0;
  std::vector<uint32_t> input_nets_;
  std::vector<uint32_t> output_nets_;
  std::vector<instruction> program_;
  std::unordered_map<std::string, uint32_t> net_ids_;
};

/*! \brief Evaluate one input assignment (bit i belongs to primary input i). */
std::vector<bool> simulate( const netlist& n, const std::vector<bool>& input_vector );

/*! \brief Word-parallel batch evaluation; bit-for-bit equal to mapping simulate. */
std::vector<std::vector<bool>> simulate_batch( const netlist& n,
                                               const std::vector<std::vector<bool>>& input_vectors );

/*! \brief Exhaustive 2^k x m truth table.
 *
 * Row r encodes the assignment with primary input 0 as the most significant
 * bit of r; column j is primary output j. Throws budget_error when the input
 * count exceeds `max_inputs`.
 */
bit_matrix truth_table( const netlist& n, uint32_t max_inputs = 10 );

} // namespace bmfsyn
