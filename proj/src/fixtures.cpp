#include "bmfsyn/fixtures.hpp"

#include <algorithm>

#include "bmfsyn/common.hpp"

namespace bmfsyn
{

namespace
{

// buses are LSB-first vectors of net names; "" stands for a constant zero bit
using bus = std::vector<std::string>;

bus input_bus( netlist& n, const std::string& prefix, uint32_t bits )
{
  bus b;
  for ( uint32_t i = 0; i < bits; ++i )
  {
    b.push_back( prefix + std::to_string( i ) );
    n.add_input( b.back() );
  }
  return b;
}

void output_bus_msb_first( netlist& n, const bus& b )
{
  for ( auto it = b.rbegin(); it != b.rend(); ++it )
  {
    n.add_output( *it );
  }
}

/* One adder cell over up to three operand bits; absent bits ("") are zero.
 * Returns {sum, carry}; carry is "" when it cannot be set. Degenerate cells
 * alias nets instead of inserting buffers. */
std::pair<std::string, std::string> adder_cell( netlist& n, const std::string& a,
                                                const std::string& b, const std::string& c,
                                                const std::string& prefix )
{
  std::vector<std::string> present;
  for ( const auto& net : { a, b, c } )
  {
    if ( !net.empty() )
    {
      present.push_back( net );
    }
  }
  if ( present.empty() )
  {
    return { "", "" };
  }
  if ( present.size() == 1 )
  {
    return { present[0], "" };
  }
  if ( present.size() == 2 )
  {
    const std::string sum = prefix + "_s";
    const std::string carry = prefix + "_c";
    n.add_gate( gate_kind::xor_gate, { present[0], present[1] }, sum );
    n.add_gate( gate_kind::and_gate, { present[0], present[1] }, carry );
    return { sum, carry };
  }
  const std::string axb = prefix + "_x";
  const std::string sum = prefix + "_s";
  const std::string g1 = prefix + "_g";
  const std::string g2 = prefix + "_h";
  const std::string carry = prefix + "_c";
  n.add_gate( gate_kind::xor_gate, { a, b }, axb );
  n.add_gate( gate_kind::xor_gate, { axb, c }, sum );
  n.add_gate( gate_kind::and_gate, { a, b }, g1 );
  n.add_gate( gate_kind::and_gate, { axb, c }, g2 );
  n.add_gate( gate_kind::or_gate, { g1, g2 }, carry );
  return { sum, carry };
}

/* Ripple addition of two buses with an optional carry-in; the result carries
 * one extra bit when a final carry exists. */
bus bus_add( netlist& n, const bus& x, const bus& y, const std::string& carry_in,
             const std::string& prefix )
{
  const size_t width = std::max( x.size(), y.size() );
  bus out;
  std::string carry = carry_in;
  for ( size_t i = 0; i < width; ++i )
  {
    const std::string xa = i < x.size() ? x[i] : "";
    const std::string yb = i < y.size() ? y[i] : "";
    auto [sum, cnew] = adder_cell( n, xa, yb, carry, prefix + std::to_string( i ) );
    out.push_back( sum );
    carry = cnew;
  }
  if ( !carry.empty() )
  {
    out.push_back( carry );
  }
  return out;
}

/* Replace "" placeholder bits with a shared constant-zero net. */
void ground_bus( netlist& n, bus& b, const std::string& zero_net )
{
  bool needed = false;
  for ( auto& bit : b )
  {
    if ( bit.empty() )
    {
      bit = zero_net;
      needed = true;
    }
  }
  if ( needed )
  {
    n.add_gate( gate_kind::const0_gate, {}, zero_net );
  }
}

/* a - b as a (bits+1)-wide two's complement bus. */
bus subtract_bus( netlist& n, const bus& a, const bus& b, const std::string& prefix )
{
  bus nb;
  for ( size_t i = 0; i < b.size(); ++i )
  {
    nb.push_back( prefix + "_nb" + std::to_string( i ) );
    n.add_gate( gate_kind::not_gate, { b[i] }, nb.back() );
  }
  const std::string one = prefix + "_one";
  n.add_gate( gate_kind::const1_gate, {}, one );
  nb.push_back( one ); // b zero-extends, so the inverted extension bit is one

  bus ax = a; // zero-extended implicitly by bus_add
  bus diff = bus_add( n, ax, nb, one, prefix + "_d" );
  diff.resize( b.size() + 1 ); // modulo 2^(bits+1)
  return diff;
}

/* |d| of a two's complement bus: (d xor sign) + sign. */
bus absolute_bus( netlist& n, const bus& d, const std::string& prefix )
{
  const std::string sign = d.back();
  bus flipped;
  for ( size_t i = 0; i < d.size(); ++i )
  {
    flipped.push_back( prefix + "_f" + std::to_string( i ) );
    n.add_gate( gate_kind::xor_gate, { d[i], sign }, flipped.back() );
  }
  bus abs = bus_add( n, flipped, bus{ sign }, "", prefix + "_a" );
  abs.resize( d.size() ); // |d| < 2^(width-1)
  return abs;
}

} // namespace

netlist make_ripple_adder( uint32_t bits )
{
  netlist n;
  n.name = "adder" + std::to_string( bits );
  const bus a = input_bus( n, "a", bits );
  const bus b = input_bus( n, "b", bits );
  bus sum = bus_add( n, a, b, "", "fa" );

  // expose with stable s-names (the top cell aliases nets on degenerate adds)
  bus s;
  for ( size_t i = 0; i < sum.size(); ++i )
  {
    s.push_back( "s" + std::to_string( i ) );
    n.add_gate( gate_kind::buf_gate, { sum[i] }, s.back() );
  }
  output_bus_msb_first( n, s );
  n.validate();
  return n;
}

netlist make_array_multiplier( uint32_t bits )
{
  netlist n;
  n.name = "mult" + std::to_string( bits );
  const bus a = input_bus( n, "a", bits );
  const bus b = input_bus( n, "b", bits );

  bus acc;
  for ( uint32_t j = 0; j < bits; ++j )
  {
    bus pp;
    pp.assign( j, "" ); // shift left by j
    for ( uint32_t i = 0; i < bits; ++i )
    {
      const std::string net = "pp" + std::to_string( j ) + "_" + std::to_string( i );
      n.add_gate( gate_kind::and_gate, { a[i], b[j] }, net );
      pp.push_back( net );
    }
    acc = j == 0 ? pp : bus_add( n, acc, pp, "", "st" + std::to_string( j ) + "_" );
  }
  acc.resize( 2 * bits, "" );
  ground_bus( n, acc, "gnd" );

  bus p;
  for ( size_t i = 0; i < acc.size(); ++i )
  {
    p.push_back( "p" + std::to_string( i ) );
    n.add_gate( gate_kind::buf_gate, { acc[i] }, p.back() );
  }
  output_bus_msb_first( n, p );
  n.validate();
  return n;
}

netlist make_butterfly( uint32_t bits )
{
  netlist n;
  n.name = "butterfly" + std::to_string( bits );
  const bus a = input_bus( n, "a", bits );
  const bus b = input_bus( n, "b", bits );

  bus sum = bus_add( n, a, b, "", "add" );
  sum.resize( bits + 1, "" );
  ground_bus( n, sum, "gnd" );
  bus diff = subtract_bus( n, a, b, "sub" );

  bus s, d;
  for ( uint32_t i = 0; i <= bits; ++i )
  {
    s.push_back( "s" + std::to_string( i ) );
    n.add_gate( gate_kind::buf_gate, { sum[i] }, s.back() );
    d.push_back( "d" + std::to_string( i ) );
    n.add_gate( gate_kind::buf_gate, { diff[i] }, d.back() );
  }
  output_bus_msb_first( n, s );
  output_bus_msb_first( n, d );
  n.validate();
  return n;
}

netlist make_sad( uint32_t bits, uint32_t pairs )
{
  if ( pairs < 1 )
  {
    throw validation_error( "make_sad: need at least one operand pair" );
  }
  netlist n;
  n.name = "sad" + std::to_string( pairs ) + "x" + std::to_string( bits );
  std::vector<bus> a( pairs ), b( pairs );
  for ( uint32_t p = 0; p < pairs; ++p )
  {
    a[p] = input_bus( n, "a" + std::to_string( p ) + "_", bits );
  }
  for ( uint32_t p = 0; p < pairs; ++p )
  {
    b[p] = input_bus( n, "b" + std::to_string( p ) + "_", bits );
  }

  bus total;
  for ( uint32_t p = 0; p < pairs; ++p )
  {
    const std::string prefix = "u" + std::to_string( p );
    const bus diff = subtract_bus( n, a[p], b[p], prefix );
    const bus abs = absolute_bus( n, diff, prefix );
    total = p == 0 ? abs : bus_add( n, total, abs, "", prefix + "_t" );
  }
  uint64_t max_total = static_cast<uint64_t>( pairs ) * ( ( uint64_t( 1 ) << bits ) - 1 );
  uint32_t width = 0;
  while ( max_total >> width )
  {
    ++width;
  }
  total.resize( width, "" );
  ground_bus( n, total, "gnd" );

  bus o;
  for ( size_t i = 0; i < total.size(); ++i )
  {
    o.push_back( "o" + std::to_string( i ) );
    n.add_gate( gate_kind::buf_gate, { total[i] }, o.back() );
  }
  output_bus_msb_first( n, o );
  n.validate();
  return n;
}

netlist make_toy4x4()
{
  netlist n;
  n.name = "toy4x4";
  for ( int i = 0; i < 4; ++i )
  {
    n.add_input( "n" + std::to_string( i ) );
  }
  n.add_gate( gate_kind::and_gate, { "n0", "n1" }, "t0" );
  n.add_gate( gate_kind::and_gate, { "n2", "n3" }, "t1" );
  n.add_gate( gate_kind::xor_gate, { "t0", "t1" }, "o0" );
  n.add_gate( gate_kind::or_gate, { "n0", "n2" }, "t2" );
  n.add_gate( gate_kind::xor_gate, { "n1", "n3" }, "t3" );
  n.add_gate( gate_kind::and_gate, { "t2", "t3" }, "o1" );
  n.add_gate( gate_kind::and_gate, { "n0", "n1" }, "t4" );
  n.add_gate( gate_kind::and_gate, { "n0", "n2" }, "t5" );
  n.add_gate( gate_kind::and_gate, { "n1", "n2" }, "t6" );
  n.add_gate( gate_kind::or_gate, { "t4", "t5", "t6" }, "o2" );
  n.add_gate( gate_kind::not_gate, { "n3" }, "t7" );
  n.add_gate( gate_kind::and_gate, { "n1", "t7" }, "t8" );
  n.add_gate( gate_kind::and_gate, { "n0", "n2" }, "t9" );
  n.add_gate( gate_kind::or_gate, { "t8", "t9" }, "o3" );
  for ( int i = 0; i < 4; ++i )
  {
    n.add_output( "o" + std::to_string( i ) );
  }
  n.validate();
  return n;
}

netlist make_majority3()
{
  netlist n;
  n.name = "majority3";
  n.add_input( "a" );
  n.add_input( "b" );
  n.add_input( "c" );
  n.add_gate( gate_kind::and_gate, { "a", "b" }, "ab" );
  n.add_gate( gate_kind::and_gate, { "a", "c" }, "ac" );
  n.add_gate( gate_kind::and_gate, { "b", "c" }, "bc" );
  n.add_gate( gate_kind::or_gate, { "ab", "ac", "bc" }, "maj" );
  n.add_output( "maj" );
  n.validate();
  return n;
}

netlist make_xor_chain( uint32_t bits )
{
  netlist n;
  n.name = "xorchain" + std::to_string( bits );
  const bus in = input_bus( n, "x", bits );
  std::string acc = in[0];
  for ( uint32_t i = 1; i < bits; ++i )
  {
    const std::string next = "p" + std::to_string( i );
    n.add_gate( gate_kind::xor_gate, { acc, in[i] }, next );
    acc = next;
  }
  if ( bits == 1 )
  {
    n.add_gate( gate_kind::buf_gate, { acc }, "p1" );
    acc = "p1";
  }
  n.add_output( acc );
  n.validate();
  return n;
}

netlist make_fixture( const std::string& name )
{
  if ( name == "adder8" )
  {
    return make_ripple_adder( 8 );
  }
  if ( name == "adder32" )
  {
    return make_ripple_adder( 32 );
  }
  if ( name == "mult8" )
  {
    return make_array_multiplier( 8 );
  }
  if ( name == "butterfly" )
  {
    return make_butterfly( 8 );
  }
  if ( name == "sad" )
  {
    return make_sad( 8, 3 );
  }
  if ( name == "toy4x4" )
  {
    return make_toy4x4();
  }
  if ( name == "majority3" )
  {
    return make_majority3();
  }
  throw parse_error( "unknown fixture '" + name + "'" );
}

} // namespace bmfsyn
