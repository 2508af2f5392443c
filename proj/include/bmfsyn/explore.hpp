/*!
  \file explore.hpp
  \brief Degree-decrement design-space exploration

  Profiling resynthesizes every subcircuit at every feasible factorization
  degree once. Exploration then starts from the exact circuit (all degrees at
  their maximum) and repeatedly decrements the degree of the subcircuit whose
  decrement hurts the whole-circuit quality least, measured by Monte Carlo
  simulation with common random numbers within each iteration. A step whose
  committed-quality check exceeds the threshold is rolled back and recorded,
  so the returned circuit always meets the threshold.
*/

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bmfsyn/bmf.hpp"
#include "bmfsyn/netlist.hpp"
#include "bmfsyn/partition.hpp"
#include "bmfsyn/qor.hpp"
#include "bmfsyn/resynth.hpp"

namespace bmfsyn
{

struct profile_entry
{
  factor_result factors;
  bit_matrix truth;   //!< reconstruction T_{s,f}
  netlist circuit;    //!< resynthesized subcircuit at this degree
  double area = 0.0;  //!< area proxy of `circuit`
};

struct subcircuit_profile
{
  subcircuit sub;
  netlist original;            //!< extracted subcircuit
  double original_area = 0.0;
  std::vector<profile_entry> by_degree; //!< index f-1, degrees 1..m_i-1; empty when m_i = 1
};

struct profile_cache
{
  std::vector<subcircuit_profile> subs;

  double original_total_area() const;
  bool any_approximable() const;
};

/*! \brief Resynthesize every subcircuit at every degree 1..m_i-1. Subcircuits
 * with a single output are recorded as unapproximable (no entries). */
profile_cache profile_all( const netlist& n, const circuit_partition& p, const asso_config& cfg,
                           uint32_t max_inputs = 10 );

/*! \brief The circuit with each subcircuit at the given degree (m_i = exact
 * original). degrees[i] must lie in [1, m_i]. */
netlist compose( const netlist& n, const profile_cache& cache, const std::vector<uint32_t>& degrees );

struct trajectory_point
{
  uint32_t step = 0;       //!< 0 is the exact baseline
  int subcircuit_id = -1;  //!< decremented subcircuit (-1 for the baseline)
  uint32_t f_before = 0;
  uint32_t f_after = 0;
  bool committed = true;   //!< false marks the probed-but-rejected final step
  qor_summary quality;     //!< measured on the circuit after this step
  double area = 0.0;       //!< additive area proxy after this step
};

struct explore_options
{
  qor_metric metric = qor_metric::relative;
  double threshold = 0.05;
  uint64_t samples = 1000000;        //!< commit and baseline evaluations
  uint64_t probe_samples = 100000;   //!< per-candidate probes inside one iteration
  uint64_t seed = 1;
  uint32_t workers = 1;
};

struct explore_result
{
  netlist circuit;
  std::vector<uint32_t> degrees;
  std::vector<trajectory_point> trajectory;
};

explore_result explore( const netlist& golden, const profile_cache& cache,
                        const output_interpretation& interp, const explore_options& opt );

/*! \brief Trajectory CSV: step, relative error, normalized absolute error,
 * area proxy, area normalized to the baseline, committed flag. */
std::string pareto_report( const std::vector<trajectory_point>& trajectory );

} // namespace bmfsyn
