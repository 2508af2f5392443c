#include "bmfsyn/resynth.hpp"

#include <array>
#include <bit>
#include <cstdio>

#include "bmfsyn/common.hpp"
#include "bmfsyn/qm.hpp"
#include "bmfsyn/sim.hpp"

namespace bmfsyn
{

namespace
{

/* Append a node computing the given minimized cover over `fanins`,
 * degenerating to constants, buffers, and inverters where possible. */
void append_sop_node( netlist& n, const std::vector<std::string>& cover,
                      const std::vector<std::string>& fanins, const std::string& output )
{
  if ( cover.empty() )
  {
    n.add_gate( gate_kind::const0_gate, {}, output );
    return;
  }
  uint32_t literals = 0;
  for ( const auto& cube : cover )
  {
    for ( char ch : cube )
    {
      if ( ch != '-' )
      {
        ++literals;
      }
    }
  }
  if ( literals == 0 )
  {
    n.add_gate( gate_kind::const1_gate, {}, output );
    return;
  }
  if ( cover.size() == 1 && literals == 1 )
  {
    const auto& cube = cover.front();
    const auto pos = cube.find_first_not_of( '-' );
    n.add_gate( cube[pos] == '1' ? gate_kind::buf_gate : gate_kind::not_gate, { fanins[pos] },
                output );
    return;
  }
  n.add_pla( fanins, cover, output );
}

/* Balanced tree of two-input OR or XOR gates over `terms`. */
void append_combine_tree( netlist& n, gate_kind kind, std::vector<std::string> terms,
                          const std::string& output, const std::string& tmp_prefix,
                          std::unordered_set<std::string>& used )
{
  if ( terms.size() == 1 )
  {
    n.add_gate( gate_kind::buf_gate, { terms.front() }, output );
    return;
  }
  uint32_t tmp_id = 0;
  while ( terms.size() > 2 )
  {
    std::vector<std::string> next;
    for ( size_t i = 0; i + 1 < terms.size(); i += 2 )
    {
      std::string t = fresh_net_name( tmp_prefix + std::to_string( tmp_id++ ), used );
      used.insert( t );
      n.add_gate( kind, { terms[i], terms[i + 1] }, t );
      next.push_back( std::move( t ) );
    }
    if ( terms.size() & 1 )
    {
      next.push_back( terms.back() );
    }
    terms = std::move( next );
  }
  n.add_gate( kind, { terms[0], terms[1] }, output );
}

void append_compressor_nodes( netlist& n, const bit_matrix& b, uint32_t k,
                              const std::vector<std::string>& input_nets,
                              const std::vector<std::string>& intermediate_nets )
{
  for ( uint32_t l = 0; l < b.cols(); ++l )
  {
    std::vector<uint32_t> on_set;
    for ( uint32_t r = 0; r < b.rows(); ++r )
    {
      if ( b.get( r, l ) )
      {
        on_set.push_back( r );
      }
    }
    append_sop_node( n, qm_minimize( on_set, k ), input_nets, intermediate_nets[l] );
  }
}

/* Multi-level synthesis of truth columns by recursive decomposition.
 *
 * At every node the splitting variable is chosen greedily: variables the
 * function does not depend on are dropped, complementary cofactors collapse
 * to an XOR, one-sided constant cofactors to a single AND/OR, and only the
 * general case pays for a multiplexer. Subfunctions are hash-consed on
 * (support set, truth bits) with complement edges (inverters are free in the
 * area proxy), shared across all outputs of one call. Two-level covers of
 * arithmetic-style functions blow up exponentially; this keeps resynthesized
 * subcircuits within a small factor of their multi-level originals. */
class cofactor_synthesizer
{
public:
  cofactor_synthesizer( netlist& n, std::vector<std::string> input_nets,
                        std::unordered_set<std::string>& used )
      : n_( n ), inputs_( std::move( input_nets ) ),
        k_( static_cast<uint32_t>( inputs_.size() ) ), used_( used ),
        not_nets_( inputs_.size() )
  {
  }

  /* column: bit r holds the function value on assignment r (input 0 is the
   * most significant bit of r). Returns the driving net. */
  std::string synthesize( const std::vector<uint64_t>& column )
  {
    std::vector<uint32_t> vars( k_ );
    for ( uint32_t i = 0; i < k_; ++i )
    {
      vars[i] = i;
    }
    // reorder the packed bits so that list position 0 is the LSB stride
    table t( std::max<uint64_t>( 1, ( uint64_t( 1 ) << k_ ) / 64 ), 0 );
    for ( uint64_t r = 0; r < ( uint64_t( 1 ) << k_ ); ++r )
    {
      if ( ( column[r >> 6] >> ( r & 63u ) ) & 1ull )
      {
        // assignment r gives input i the bit (k-1-i); re-index so that list
        // position j (input j) occupies bit j of the new index
        uint64_t idx = 0;
        for ( uint32_t i = 0; i < k_; ++i )
        {
          idx |= ( ( r >> ( k_ - 1 - i ) ) & 1ull ) << i;
        }
        t[idx >> 6] |= 1ull << ( idx & 63u );
      }
    }
    const auto lit = synth( vars, t );
    return materialize( lit );
  }

private:
  using table = std::vector<uint64_t>;

  struct literal
  {
    int node = -1;      // -1 encodes a constant
    bool complement = false;
  };

  // one synthesized subfunction; `net` materialized on demand
  struct entry
  {
    std::string net;
    std::string not_net;
  };

  static uint64_t word_mask( uint64_t bits, uint64_t word )
  {
    const uint64_t remaining = bits - 64 * word;
    return remaining >= 64 ? ~0ull : ( ( 1ull << remaining ) - 1 );
  }

  static bool is_const( const table& t, uint64_t bits, bool one )
  {
    for ( uint64_t w = 0; w < ( bits + 63 ) / 64; ++w )
    {
      const uint64_t mask = word_mask( bits, w );
      if ( ( ( one ? ~t[w] : t[w] ) & mask ) != 0 )
      {
        return false;
      }
    }
    return true;
  }

  /* cofactors with respect to list position j (bit j of the index). */
  static void cofactors( const table& t, uint64_t bits, uint32_t j, table& lo, table& hi )
  {
    const uint64_t half = bits / 2;
    lo.assign( std::max<uint64_t>( 1, half / 64 ), 0 );
    hi.assign( std::max<uint64_t>( 1, half / 64 ), 0 );
    if ( j >= 6 )
    {
      // whole-word stride
      const uint64_t stride = uint64_t( 1 ) << ( j - 6 );
      uint64_t out = 0;
      for ( uint64_t base = 0; base < bits / 64; base += 2 * stride )
      {
        for ( uint64_t w = 0; w < stride; ++w, ++out )
        {
          lo[out] = t[base + w];
          hi[out] = t[base + stride + w];
        }
      }
      return;
    }
    // sub-word stride: gather pairs of blocks of 2^j bits
    const uint32_t block = 1u << j;
    uint64_t out_bit = 0;
    for ( uint64_t b = 0; b < bits; b += 2 * block )
    {
      const uint64_t blk_mask = ( 1ull << block ) - 1;
      const uint64_t lo_blk = ( t[b >> 6] >> ( b & 63u ) ) & blk_mask;
      const uint64_t hi_blk = ( t[( b + block ) >> 6] >> ( ( b + block ) & 63u ) ) & blk_mask;
      lo[out_bit >> 6] |= lo_blk << ( out_bit & 63u );
      hi[out_bit >> 6] |= hi_blk << ( out_bit & 63u );
      out_bit += block;
    }
  }

  static bool tables_equal( const table& a, const table& b, uint64_t bits )
  {
    for ( uint64_t w = 0; w < ( bits + 63 ) / 64; ++w )
    {
      const uint64_t mask = word_mask( bits, w );
      if ( ( ( a[w] ^ b[w] ) & mask ) != 0 )
      {
        return false;
      }
    }
    return true;
  }

  static bool tables_complementary( const table& a, const table& b, uint64_t bits )
  {
    for ( uint64_t w = 0; w < ( bits + 63 ) / 64; ++w )
    {
      const uint64_t mask = word_mask( bits, w );
      if ( ( ( a[w] ^ b[w] ) & mask ) != mask )
      {
        return false;
      }
    }
    return true;
  }

  std::string fresh( const char* tag )
  {
    std::string net = fresh_net_name( "n" + std::to_string( next_id_++ ) + tag, used_ );
    used_.insert( net );
    return net;
  }

  std::string const_net( bool one )
  {
    std::string& net = one ? const1_ : const0_;
    if ( net.empty() )
    {
      net = fresh( one ? "_vdd" : "_gnd" );
      n_.add_gate( one ? gate_kind::const1_gate : gate_kind::const0_gate, {}, net );
    }
    return net;
  }

  std::string not_of( uint32_t input )
  {
    if ( not_nets_[input].empty() )
    {
      not_nets_[input] = fresh( "_inv" );
      n_.add_gate( gate_kind::not_gate, { inputs_[input] }, not_nets_[input] );
    }
    return not_nets_[input];
  }

  std::string materialize( const literal& lit )
  {
    if ( lit.node < 0 )
    {
      return const_net( lit.complement );
    }
    entry& e = entries_[lit.node];
    if ( !lit.complement )
    {
      return e.net;
    }
    if ( e.not_net.empty() )
    {
      e.not_net = fresh( "_n" );
      n_.add_gate( gate_kind::not_gate, { e.net }, e.not_net );
    }
    return e.not_net;
  }

  literal input_literal( uint32_t input, bool complement )
  {
    auto& cached = input_nodes_[input];
    if ( cached < 0 )
    {
      cached = static_cast<int>( entries_.size() );
      entries_.push_back( { inputs_[input], not_nets_[input] } );
    }
    // keep the shared per-input inverter in sync
    if ( complement )
    {
      entries_[cached].not_net = not_of( input );
    }
    return { cached, complement };
  }

  literal make_gate( gate_kind kind, const literal& a, const literal& b, const char* tag )
  {
    std::string net = fresh( tag );
    n_.add_gate( kind, { materialize( a ), materialize( b ) }, net );
    entries_.push_back( { std::move( net ), "" } );
    return { static_cast<int>( entries_.size() ) - 1, false };
  }

  static std::string make_key( const std::vector<uint32_t>& vars, const table& t, uint64_t bits )
  {
    std::string key;
    for ( uint32_t v : vars )
    {
      key += std::to_string( v ) + ".";
    }
    key += ":";
    for ( uint64_t w = 0; w < ( bits + 63 ) / 64; ++w )
    {
      char buf[20];
      std::snprintf( buf, sizeof( buf ), "%llx,", (unsigned long long)( t[w] & word_mask( bits, w ) ) );
      key += buf;
    }
    return key;
  }

  literal synth( std::vector<uint32_t> vars, table t )
  {
    uint64_t bits = uint64_t( 1 ) << vars.size();
    if ( is_const( t, bits, false ) )
    {
      return { -1, false };
    }
    if ( is_const( t, bits, true ) )
    {
      return { -1, true };
    }

    // drop variables the function does not depend on
    {
      table lo, hi;
      for ( size_t j = vars.size(); j-- > 0; )
      {
        cofactors( t, bits, static_cast<uint32_t>( j ), lo, hi );
        if ( tables_equal( lo, hi, bits / 2 ) )
        {
          t = lo;
          vars.erase( vars.begin() + j );
          bits /= 2;
        }
      }
    }

    if ( vars.size() == 1 )
    {
      // t is 0b01 (the variable) or 0b10 (its complement)
      return input_literal( vars[0], ( t[0] & 1ull ) != 0 );
    }

    // canonical polarity: value at the all-zero assignment is zero
    bool flip = ( t[0] & 1ull ) != 0;
    if ( flip )
    {
      for ( auto& w : t )
      {
        w = ~w;
      }
    }

    const std::string key = make_key( vars, t, bits );
    const auto hit = memo_.find( key );
    if ( hit != memo_.end() )
    {
      return { hit->second, flip };
    }

    // pick the split: XOR collapse > one-sided constant > multiplexer; among
    // multiplexers put the variable with the most influence on top, its
    // cofactors are simplest
    table lo, hi, best_lo, best_hi;
    int best_class = 99;
    uint64_t best_score = 0;
    uint32_t best_j = 0;
    for ( uint32_t j = 0; j < vars.size(); ++j )
    {
      cofactors( t, bits, j, lo, hi );
      int cls = 3;
      uint64_t score = 0;
      if ( tables_complementary( lo, hi, bits / 2 ) )
      {
        cls = 0;
      }
      else if ( is_const( lo, bits / 2, false ) || is_const( lo, bits / 2, true ) ||
                is_const( hi, bits / 2, false ) || is_const( hi, bits / 2, true ) )
      {
        cls = 1;
      }
      else
      {
        for ( uint64_t w = 0; w < ( bits / 2 + 63 ) / 64; ++w )
        {
          score += static_cast<uint64_t>(
              std::popcount( ( lo[w] ^ hi[w] ) & word_mask( bits / 2, w ) ) );
        }
      }
      if ( cls < best_class || ( cls == best_class && score > best_score ) )
      {
        best_class = cls;
        best_score = score;
        best_j = j;
        best_lo = lo;
        best_hi = hi;
        if ( cls == 0 )
        {
          break;
        }
      }
    }

    const uint32_t input = vars[best_j];
    std::vector<uint32_t> sub_vars = vars;
    sub_vars.erase( sub_vars.begin() + best_j );
    const uint64_t half = bits / 2;

    literal result;
    if ( best_class == 0 )
    {
      // lo xor var; canonical polarity makes lo(0...0) = 0
      const literal sub = synth( sub_vars, best_lo );
      result = make_gate( gate_kind::xor_gate, input_literal( input, false ), sub, "_x" );
    }
    else if ( is_const( best_lo, half, false ) )
    {
      result = make_gate( gate_kind::and_gate, input_literal( input, false ),
                          synth( sub_vars, best_hi ), "_a" );
    }
    else if ( is_const( best_hi, half, false ) )
    {
      result = make_gate( gate_kind::and_gate, input_literal( input, true ),
                          synth( sub_vars, best_lo ), "_a" );
    }
    else if ( is_const( best_lo, half, true ) )
    {
      result = make_gate( gate_kind::or_gate, input_literal( input, true ),
                          synth( sub_vars, best_hi ), "_o" );
    }
    else if ( is_const( best_hi, half, true ) )
    {
      result = make_gate( gate_kind::or_gate, input_literal( input, false ),
                          synth( sub_vars, best_lo ), "_o" );
    }
    else
    {
      const literal l = synth( sub_vars, best_lo );
      const literal h = synth( sub_vars, best_hi );
      const literal a1 = make_gate( gate_kind::and_gate, input_literal( input, false ), h, "_a" );
      const literal a0 = make_gate( gate_kind::and_gate, input_literal( input, true ), l, "_a" );
      result = make_gate( gate_kind::or_gate, a1, a0, "_o" );
    }

    memo_.emplace( key, result.node );
    return { result.node, flip };
  }

  netlist& n_;
  std::vector<std::string> inputs_;
  uint32_t k_;
  std::unordered_set<std::string>& used_;
  std::vector<std::string> not_nets_;
  std::vector<entry> entries_;
  std::unordered_map<std::string, int> memo_;
  std::string const0_, const1_;
  uint32_t next_id_ = 0;
  std::array<int, 32> input_nodes_ = [] { std::array<int, 32> a; a.fill( -1 ); return a; }();
};

void append_multilevel_compressor( netlist& n, const bit_matrix& b, uint32_t k,
                                   const std::vector<std::string>& input_nets,
                                   const std::vector<std::string>& intermediate_nets,
                                   std::unordered_set<std::string>& used )
{
  cofactor_synthesizer synth( n, input_nets, used );
  const size_t words = ( ( uint64_t( 1 ) << k ) + 63 ) / 64;
  for ( uint32_t l = 0; l < b.cols(); ++l )
  {
    std::vector<uint64_t> column( words, 0 );
    for ( uint32_t r = 0; r < b.rows(); ++r )
    {
      if ( b.get( r, l ) )
      {
        column[r >> 6] |= 1ull << ( r & 63u );
      }
    }
    const std::string net = synth.synthesize( column );
    n.add_gate( gate_kind::buf_gate, { net }, intermediate_nets[l] );
  }
}

void append_decompressor_nodes( netlist& n, const bit_matrix& c, semiring s,
                                const std::vector<std::string>& intermediate_nets,
                                const std::vector<std::string>& output_nets,
                                std::unordered_set<std::string>& used )
{
  const gate_kind kind = s == semiring::or_semiring ? gate_kind::or_gate : gate_kind::xor_gate;
  std::unordered_map<uint64_t, std::string> column_nets; // identical columns share one tree
  for ( uint32_t j = 0; j < c.cols(); ++j )
  {
    uint64_t selector = 0;
    std::vector<std::string> terms;
    for ( uint32_t l = 0; l < c.rows(); ++l )
    {
      if ( c.get( l, j ) )
      {
        selector |= uint64_t( 1 ) << l;
        terms.push_back( intermediate_nets[l] );
      }
    }
    if ( terms.empty() )
    {
      n.add_gate( gate_kind::const0_gate, {}, output_nets[j] );
      continue;
    }
    const auto shared = column_nets.find( selector );
    if ( shared != column_nets.end() )
    {
      n.add_gate( gate_kind::buf_gate, { shared->second }, output_nets[j] );
      continue;
    }
    append_combine_tree( n, kind, std::move( terms ), output_nets[j],
                         output_nets[j] + "_t", used );
    column_nets.emplace( selector, output_nets[j] );
  }
}

} // namespace

area_cost area_proxy( const netlist& n )
{
  n.validate();
  double total = 0.0;
  for ( const auto& node : n.nodes )
  {
    switch ( node.kind )
    {
    case gate_kind::not_gate:
    case gate_kind::buf_gate:
    case gate_kind::const0_gate:
    case gate_kind::const1_gate:
      break;
    case gate_kind::pla:
    {
      if ( node.cubes.empty() )
      {
        break;
      }
      uint32_t literals = 0;
      for ( const auto& cube : node.cubes )
      {
        for ( char ch : cube )
        {
          if ( ch != '-' )
          {
            ++literals;
          }
        }
      }
      if ( literals == 0 || ( node.cubes.size() == 1 && literals == 1 ) )
      {
        break;
      }
      total += literals + ( node.cubes.size() - 1 );
      break;
    }
    default:
      total += static_cast<double>( node.fanins.size() ) - 1.0;
      break;
    }
  }
  return { total };
}

netlist compressor_from_b( const bit_matrix& b, uint32_t k )
{
  if ( b.rows() != ( 1u << k ) )
  {
    throw validation_error( "compressor_from_b: " + std::to_string( b.rows() ) +
                            " rows is not 2^" + std::to_string( k ) );
  }
  netlist n;
  n.name = "compressor";
  std::vector<std::string> ins, outs;
  for ( uint32_t i = 0; i < k; ++i )
  {
    ins.push_back( "x" + std::to_string( i ) );
    n.add_input( ins.back() );
  }
  for ( uint32_t l = 0; l < b.cols(); ++l )
  {
    outs.push_back( "y" + std::to_string( l ) );
    n.add_output( outs.back() );
  }
  append_compressor_nodes( n, b, k, ins, outs );
  n.validate();
  return n;
}

netlist decompressor_from_c( const bit_matrix& c, semiring s )
{
  if ( c.rows() == 0 || c.cols() == 0 )
  {
    throw validation_error( "decompressor_from_c: matrix is empty" );
  }
  netlist n;
  n.name = "decompressor";
  std::vector<std::string> ins, outs;
  for ( uint32_t l = 0; l < c.rows(); ++l )
  {
    ins.push_back( "x" + std::to_string( l ) );
    n.add_input( ins.back() );
  }
  for ( uint32_t j = 0; j < c.cols(); ++j )
  {
    outs.push_back( "y" + std::to_string( j ) );
    n.add_output( outs.back() );
  }
  std::unordered_set<std::string> used( ins.begin(), ins.end() );
  used.insert( outs.begin(), outs.end() );
  append_decompressor_nodes( n, c, s, ins, outs, used );
  n.validate();
  return n;
}

approx_subcircuit approximate_subcircuit( const netlist& sub, uint32_t f, const asso_config& cfg,
                                          uint32_t max_inputs )
{
  const uint32_t k = static_cast<uint32_t>( sub.inputs.size() );
  for ( const auto& out : sub.outputs )
  {
    for ( const auto& in : sub.inputs )
    {
      if ( out == in )
      {
        throw validation_error( "approximate_subcircuit: output '" + out +
                                "' aliases an input port" );
      }
    }
  }

  const bit_matrix table = truth_table( sub, max_inputs );
  factor_result factors = factorize_best( table, f, cfg );
  bit_matrix reconstruction = bool_product( factors.b, factors.c, factors.ring );

  netlist n;
  n.name = sub.name + "_f" + std::to_string( f );
  n.inputs = sub.inputs;
  n.outputs = sub.outputs;

  std::unordered_set<std::string> used( sub.inputs.begin(), sub.inputs.end() );
  used.insert( sub.outputs.begin(), sub.outputs.end() );
  std::vector<std::string> intermediates;
  for ( uint32_t l = 0; l < f; ++l )
  {
    std::string t = fresh_net_name( "f" + std::to_string( l ), used );
    used.insert( t );
    intermediates.push_back( std::move( t ) );
  }

  append_multilevel_compressor( n, factors.b, k, sub.inputs, intermediates, used );
  append_decompressor_nodes( n, factors.c, factors.ring, intermediates, n.outputs, used );
  n.validate();

  if ( truth_table( n, max_inputs ) != reconstruction )
  {
    throw std::logic_error( "approximate_subcircuit: resynthesized circuit does not match the "
                            "factorization reconstruction" );
  }
  return { std::move( n ), std::move( reconstruction ), std::move( factors ) };
}

} // namespace bmfsyn
