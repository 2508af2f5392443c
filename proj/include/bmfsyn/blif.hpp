/*!
  \file blif.hpp
  \brief BLIF-subset reader and writer

  Supported constructs: .model NAME, .inputs, .outputs (both may repeat and
  continue with a trailing backslash), .names with on-set cover rows, .end,
  and # comments. Sequential and hierarchical constructs (.latch, .subckt,
  .gate) are rejected, as are off-set (0) output planes.
*/

#pragma once

#include <string>

#include "bmfsyn/netlist.hpp"

namespace bmfsyn
{

/*! \brief Parse BLIF text into a validated netlist. Throws parse_error with a
 * line number for malformed text and validation_error for structural issues
 * (cycles, duplicate drivers, undriven outputs). */
netlist parse_blif( const std::string& text );

netlist parse_blif_file( const std::string& path );

/*! \brief Canonical BLIF: nodes ordered by (depth, output name), cube rows
 * sorted. Re-parsing yields a structurally equal netlist. */
std::string emit_blif( const netlist& n );

void write_blif_file( const netlist& n, const std::string& path );

} // namespace bmfsyn
