/*!
  \file qor.hpp
  \brief Error metrics between an accurate and an approximate circuit

  Three metrics: average relative error and average absolute error interpret
  groups of outputs as unsigned numbers (MSB first); the Hamming error rate
  counts mismatched output bits. Small circuits are evaluated exhaustively,
  large ones with seeded Monte Carlo sampling. Sampling is chunked with
  per-chunk sub-seeds derived from the master seed, so results depend only on
  (seed, samples) and never on the worker count.
*/

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bmfsyn/netlist.hpp"
#include "bmfsyn/sim.hpp"

namespace bmfsyn
{

/*! \brief One unsigned word: named group of primary outputs, MSB first. */
struct output_word
{
  std::string name;
  std::vector<std::string> bits;
};

struct output_interpretation
{
  std::vector<output_word> words;

  /*! \brief All primary outputs as one word, output 0 most significant. */
  static output_interpretation single_word( const netlist& n, const std::string& name = "out" );

  /*! \brief Parse "name:msb..lsb;name:b2,b1,b0;...". Ranges expand a shared
   * alphabetic prefix with a numeric suffix, comma lists are taken verbatim. */
  static output_interpretation parse( const std::string& spec );

  /*! \brief Words must be disjoint and name existing outputs; when `complete`
   * every output must belong to a word (required by the numeric metrics). */
  void validate_against( const netlist& n, bool complete ) const;
};

enum class qor_metric
{
  relative,
  absolute,
  hamming
};

std::string to_string( qor_metric m );
qor_metric metric_from_string( const std::string& s );

struct qor_report
{
  qor_metric metric = qor_metric::relative;
  double value = 0.0;
  double normalized = 0.0; //!< absolute: value over the word maxima; otherwise = value
  uint64_t samples = 0;
  uint64_t seed = 0;
  bool exhaustive = false;
  double standard_error = 0.0; //!< CLT standard error of `value` (0 when exhaustive)

  nlohmann::json to_json() const;
};

/*! \brief All three metrics measured in one pass over the same samples. */
struct qor_summary
{
  qor_report relative;
  qor_report absolute;
  qor_report hamming;

  const qor_report& get( qor_metric m ) const;
};

struct sample_options
{
  uint64_t samples = 1000000;
  uint64_t seed = 1;
  uint32_t workers = 1;
};

/*! \brief Seeded Monte Carlo evaluation with uniform random inputs. */
qor_summary evaluate_monte_carlo( const netlist& golden, const netlist& approx,
                                  const output_interpretation& interp, const sample_options& opt );

/*! \brief Exact evaluation over all 2^k inputs (k capped at 20). */
qor_summary evaluate_exhaustive( const netlist& golden, const netlist& approx,
                                 const output_interpretation& interp, uint32_t max_inputs = 20 );

qor_report avg_relative_error( const netlist& golden, const netlist& approx,
                               const output_interpretation& interp, uint64_t samples, uint64_t seed );

qor_report avg_absolute_error( const netlist& golden, const netlist& approx,
                               const output_interpretation& interp, uint64_t samples, uint64_t seed );

/*! \brief Mismatched output bits over samples * outputs; switches to the
 * exhaustive sweep when 2^k fits into the sample budget. */
qor_report hamming_error_rate( const netlist& golden, const netlist& approx, uint64_t samples,
                               uint64_t seed );

qor_report exhaustive_qor( const netlist& golden, const netlist& approx, qor_metric metric,
                           const output_interpretation& interp );

/*! \brief splitmix64 step, used to derive chunk seeds from the master seed. */
uint64_t derive_seed( uint64_t master, uint64_t stream );

} // namespace bmfsyn
