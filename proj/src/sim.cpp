#include "bmfsyn/sim.hpp"

#include <algorithm>

#include "bmfsyn/common.hpp"

namespace bmfsyn
{

namespace
{

// lane L of proj_word(j) holds bit j of L
constexpr uint64_t proj_word[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
};

} // namespace

compiled_netlist::compiled_netlist( const netlist& n )
{
  n.validate();

  const auto assign_id = [this]( const std::string& name ) {
    const auto it = net_ids_.find( name );
    if ( it != net_ids_.end() )
    {
      return it->second;
    }
    const auto id = static_cast<uint32_t>( net_ids_.size() );
    net_ids_.emplace( name, id );
    return id;
  };

  for ( const auto& in : n.inputs )
  {
    input_nets_.push_back( assign_id( in ) );
  }
  num_inputs_ = static_cast<uint32_t>( input_nets_.size() );

  const auto order = n.topological_order();
  program_.reserve( order.size() );
  for ( size_t idx : order )
  {
    const auto& node = n.nodes[idx];
    instruction ins;
    ins.kind = node.kind;
    for ( const auto& fi : node.fanins )
    {
      ins.fanins.push_back( assign_id( fi ) );
    }
    ins.out = assign_id( node.output );
    if ( node.kind == gate_kind::pla )
    {
      for ( const auto& cube : node.cubes )
      {
        std::vector<literal> lits;
        for ( size_t p = 0; p < cube.size(); ++p )
        {
          if ( cube[p] != '-' )
          {
            lits.push_back( { ins.fanins[p], cube[p] == '1' } );
          }
        }
        if ( lits.empty() )
        {
          ++ins.dash_only_cubes;
        }
        else
        {
          ins.cube_literals.push_back( std::move( lits ) );
        }
      }
    }
    program_.push_back( std::move( ins ) );
  }

  for ( const auto& out : n.outputs )
  {
    output_nets_.push_back( assign_id( out ) );
  }
  net_count_ = net_ids_.size();
}

int compiled_netlist::net_index( const std::string& name ) const
{
  const auto it = net_ids_.find( name );
  return it == net_ids_.end() ? -1 : static_cast<int>( it->second );
}

void compiled_netlist::eval64( state& st, const uint64_t* input_words, uint64_t* output_words ) const
{
  auto& nets = st.nets;
  for ( uint32_t i = 0; i < num_inputs_; ++i )
  {
    nets[input_nets_[i]] = input_words[i];
  }

  for ( const auto& ins : program_ )
  {
    uint64_t value = 0;
    switch ( ins.kind )
    {
    case gate_kind::pla:
      if ( ins.dash_only_cubes > 0 )
      {
        value = ~0ull;
        break;
      }
      for ( const auto& lits : ins.cube_literals )
      {
        uint64_t term = ~0ull;
        for ( const auto& lit : lits )
        {
          term &= lit.positive ? nets[lit.net] : ~nets[lit.net];
        }
        value |= term;
      }
      break;
    case gate_kind::and_gate:
    case gate_kind::nand_gate:
      value = ~0ull;
      for ( uint32_t fi : ins.fanins )
      {
        value &= nets[fi];
      }
      if ( ins.kind == gate_kind::nand_gate )
      {
        value = ~value;
      }
      break;
    case gate_kind::or_gate:
    case gate_kind::nor_gate:
      for ( uint32_t fi : ins.fanins )
      {
        value |= nets[fi];
      }
      if ( ins.kind == gate_kind::nor_gate )
      {
        value = ~value;
      }
      break;
    case gate_kind::xor_gate:
    case gate_kind::xnor_gate:
      for ( uint32_t fi : ins.fanins )
      {
        value ^= nets[fi];
      }
      if ( ins.kind == gate_kind::xnor_gate )
      {
        value = ~value;
      }
      break;
    case gate_kind::not_gate:
      value = ~nets[ins.fanins[0]];
      break;
    case gate_kind::buf_gate:
      value = nets[ins.fanins[0]];
      break;
    case gate_kind::const0_gate:
      value = 0;
      break;
    case gate_kind::const1_gate:
      value = ~0ull;
      break;
    }
    nets[ins.out] = value;
  }

  for ( size_t j = 0; j < output_nets_.size(); ++j )
  {
    output_words[j] = nets[output_nets_[j]];
  }
}

std::vector<bool> simulate( const netlist& n, const std::vector<bool>& input_vector )
{
  compiled_netlist plan( n );
  if ( input_vector.size() != plan.num_inputs() )
  {
    throw validation_error( "input vector length " + std::to_string( input_vector.size() ) +
                            " does not match " + std::to_string( plan.num_inputs() ) + " inputs" );
  }
  auto st = plan.make_state();
  std::vector<uint64_t> in_words( plan.num_inputs(), 0 );
  std::vector<uint64_t> out_words( plan.num_outputs(), 0 );
  for ( size_t i = 0; i < input_vector.size(); ++i )
  {
    in_words[i] = input_vector[i] ? 1ull : 0ull;
  }
  plan.eval64( st, in_words.data(), out_words.data() );
  std::vector<bool> out( plan.num_outputs() );
  for ( size_t j = 0; j < out.size(); ++j )
  {
    out[j] = ( out_words[j] & 1ull ) != 0;
  }
  return out;
}

std::vector<std::vector<bool>> simulate_batch( const netlist& n,
                                               const std::vector<std::vector<bool>>& input_vectors )
{
  compiled_netlist plan( n );
  std::vector<std::vector<bool>> results( input_vectors.size() );
  auto st = plan.make_state();
  std::vector<uint64_t> in_words( plan.num_inputs() );
  std::vector<uint64_t> out_words( plan.num_outputs() );

  for ( size_t base = 0; base < input_vectors.size(); base += 64 )
  {
    const size_t lanes = std::min<size_t>( 64, input_vectors.size() - base );
    std::fill( in_words.begin(), in_words.end(), 0 );
    for ( size_t lane = 0; lane < lanes; ++lane )
    {
      const auto& iv = input_vectors[base + lane];
      if ( iv.size() != plan.num_inputs() )
      {
        throw validation_error( "input vector length mismatch in batch" );
      }
      for ( size_t i = 0; i < iv.size(); ++i )
      {
        if ( iv[i] )
        {
          in_words[i] |= 1ull << lane;
        }
      }
    }
    plan.eval64( st, in_words.data(), out_words.data() );
    for ( size_t lane = 0; lane < lanes; ++lane )
    {
      auto& ov = results[base + lane];
      ov.resize( plan.num_outputs() );
      for ( size_t j = 0; j < ov.size(); ++j )
      {
        ov[j] = ( ( out_words[j] >> lane ) & 1ull ) != 0;
      }
    }
  }
  return results;
}

bit_matrix truth_table( const netlist& n, uint32_t max_inputs )
{
  compiled_netlist plan( n );
  const uint32_t k = plan.num_inputs();
  if ( k > max_inputs )
  {
    throw budget_error( "truth_table: " + std::to_string( k ) + " inputs exceed the cap of " +
                        std::to_string( max_inputs ) );
  }
  const uint32_t rows = 1u << k;
  bit_matrix table( rows, plan.num_outputs() );

  auto st = plan.make_state();
  std::vector<uint64_t> in_words( k );
  std::vector<uint64_t> out_words( plan.num_outputs() );

  for ( uint32_t base = 0; base < rows; base += 64 )
  {
    const uint32_t batch = base >> 6;
    for ( uint32_t i = 0; i < k; ++i )
    {
      // primary input 0 is the most significant bit of the row index
      const uint32_t bitpos = k - 1 - i;
      if ( bitpos < 6 )
      {
        in_words[i] = proj_word[bitpos];
      }
      else
      {
        in_words[i] = ( ( batch >> ( bitpos - 6 ) ) & 1u ) ? ~0ull : 0ull;
      }
    }
    plan.eval64( st, in_words.data(), out_words.data() );
    const uint32_t lanes = std::min<uint32_t>( 64, rows - base );
    for ( uint32_t lane = 0; lane < lanes; ++lane )
    {
      for ( uint32_t j = 0; j < plan.num_outputs(); ++j )
      {
        if ( ( out_words[j] >> lane ) & 1ull )
        {
          table.set( base + lane, j, true );
        }
      }
    }
  }
  return table;
}

} // namespace bmfsyn
