#include "sdps/report.hpp"

#include <ostream>

#include "sdps/sketch.hpp"

namespace sdps {

namespace {

double effective_sketch_delta(const SolverConfig& config, Index n) {
  if (config.sketch_delta) return *config.sketch_delta;
  const double nd = static_cast<double>(n);
  return std::min(1.0 / (nd * nd * nd), 1.0 / 16.0);
}

}  // namespace

RunReport make_report(const SdpInstance& instance, const InstanceStats& stats,
                      const SolverConfig& config, const Solution& solution) {
  RunReport r;
  r.n = instance.header.n;
  r.m = instance.header.m;
  r.stats = stats;

  r.eps = config.eps;
  r.eta0 = config.eta0;
  r.iteration_budget = solution.iteration_budget;
  r.exact_hessian = config.exact_hessian;
  r.sketch_eps = config.sketch_eps;
  r.sketch_delta = effective_sketch_delta(config, r.n);
  r.sketch_size = config.exact_hessian
                      ? 0
                      : planned_sketch_size(r.n, r.m, config.sketch_eps,
                                            r.sketch_delta, config.sketch_size);
  r.resketch_each_iteration = config.resketch_each_iteration;
  r.rng_seed = config.rng_seed;
  r.R_hint = config.R_hint;

  r.objective = solution.objective;
  r.infeas_l1 = solution.infeas_l1;
  r.gap_estimate = solution.gap_estimate;
  r.eta_final = solution.eta_final;
  r.centering_iterations = solution.centering_iterations;
  r.main_iterations = solution.main_iterations;
  r.polish_iterations = solution.polish_iterations;
  r.passes_used = solution.passes_used;
  r.passes = solution.passes;
  r.backtrack_extras = solution.backtrack_extras;
  r.peak_space_words = solution.peak_space_words;
  r.peak_n_quadratic_words = solution.peak_n_quadratic_words;
  r.peak_m_sketch_words = solution.peak_m_sketch_words;
  r.peak_oracle_words = solution.peak_oracle_words;
  r.stop_reason = solution.stop_reason;
  return r;
}

nlohmann::ordered_json report_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["instance"] = {{"n", r.n},
                   {"m", r.m},
                   {"sum_schatten1", r.stats.sum_schatten1},
                   {"b_l1", r.stats.b_l1},
                   {"c_spectral", r.stats.c_spectral}};
  nlohmann::ordered_json cfg = {
      {"eps", r.eps},
      {"eta0", r.eta0},
      {"iteration_budget", r.iteration_budget},
      {"exact_hessian", r.exact_hessian},
      {"sketch_eps", r.sketch_eps},
      {"sketch_delta", r.sketch_delta},
      {"sketch_size", r.sketch_size},
      {"resketch_each_iteration", r.resketch_each_iteration},
      {"rng_seed", r.rng_seed}};
  if (r.R_hint) cfg["R_hint"] = *r.R_hint;
  j["config"] = cfg;
  j["result"] = {
      {"objective", r.objective},
      {"infeas_l1", r.infeas_l1},
      {"gap_estimate", r.gap_estimate},
      {"eta_final", r.eta_final},
      {"stop_reason", r.stop_reason},
      {"iterations",
       {{"centering", r.centering_iterations},
        {"main", r.main_iterations},
        {"polish", r.polish_iterations}}},
      {"passes",
       {{"total", r.passes_used},
        {"setup", r.passes.setup},
        {"centering", r.passes.centering},
        {"main", r.passes.main},
        {"polish", r.passes.polish},
        {"final_certificate", r.passes.final_certificate},
        {"backtrack_extras", r.backtrack_extras}}},
      {"space_words",
       {{"streaming_peak", r.peak_space_words},
        {"n_quadratic_peak", r.peak_n_quadratic_words},
        {"m_sketch_peak", r.peak_m_sketch_words},
        {"oracle_peak", r.peak_oracle_words}}}};
  return j;
}

void print_report_summary(const RunReport& r, std::ostream& out) {
  out << "instance: n=" << r.n << " m=" << r.m
      << "  sum||A_i||_S1=" << r.stats.sum_schatten1
      << "  ||b||_1=" << r.stats.b_l1 << "  ||C||=" << r.stats.c_spectral
      << '\n';
  out << "mode: " << (r.exact_hessian ? "exact-hessian" : "sketched")
      << "  s=" << r.sketch_size << "  eps=" << r.eps
      << "  seed=" << r.rng_seed << '\n';
  out << "objective=" << r.objective << "  infeas_l1=" << r.infeas_l1
      << "  gap<=" << r.gap_estimate << "  (" << r.stop_reason << ")\n";
  out << "iterations: centering=" << r.centering_iterations
      << " main=" << r.main_iterations << " polish=" << r.polish_iterations
      << "  passes=" << r.passes_used << '\n';
  out << "space: streaming peak " << r.peak_space_words << " words ("
      << r.peak_n_quadratic_words << " n-class, " << r.peak_m_sketch_words
      << " m-class, oracle " << r.peak_oracle_words << ")\n";
  out << "wall time: " << r.wall_time_s << " s\n";
}

}  // namespace sdps
