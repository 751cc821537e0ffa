#pragma once

#include <iosfwd>
#include <string>

#include "sdps/instance.hpp"
#include "sdps/ipm.hpp"

#include <json.hpp>

namespace sdps {

// Machine-readable run summary. Everything serialized here is reproducible:
// identical instance, config and seeds yield byte-identical documents. Wall
// time is therefore reported on the human summary only.
struct RunReport {
  Index n = 0;
  Index m = 0;
  InstanceStats stats;

  double eps = 0.0;
  double eta0 = 0.0;
  Index iteration_budget = 0;
  bool exact_hessian = false;
  double sketch_eps = 0.0;
  double sketch_delta = 0.0;
  Index sketch_size = 0;  // 0 in exact-Hessian mode
  bool resketch_each_iteration = false;
  std::uint64_t rng_seed = 0;
  std::optional<double> R_hint;

  double objective = 0.0;
  double infeas_l1 = 0.0;
  double gap_estimate = 0.0;
  double eta_final = 0.0;
  Index centering_iterations = 0;
  Index main_iterations = 0;
  Index polish_iterations = 0;
  Index passes_used = 0;
  PassBreakdown passes;
  Index backtrack_extras = 0;
  Index peak_space_words = 0;
  Index peak_n_quadratic_words = 0;
  Index peak_m_sketch_words = 0;
  Index peak_oracle_words = 0;
  std::string stop_reason;

  double wall_time_s = 0.0;  // not serialized
};

RunReport make_report(const SdpInstance& instance, const InstanceStats& stats,
                      const SolverConfig& config, const Solution& solution);

nlohmann::ordered_json report_json(const RunReport& report);

void print_report_summary(const RunReport& report, std::ostream& out);

}  // namespace sdps
