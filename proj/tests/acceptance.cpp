// Acceptance suite: every check below runs at its stated tolerance and
// prints one PASS/FAIL line. The process exits nonzero if any check fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "oracles.hpp"
#include "sdps/hessian.hpp"
#include "sdps/ipm.hpp"
#include "sdps/report.hpp"
#include "sdps/sketch_audit.hpp"

using namespace sdps;

namespace {

struct Suite {
  int failures = 0;

  void run(const std::string& name, double time_limit_s,
           const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
      ok = body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
      ok = false;
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (time_limit_s > 0.0 && elapsed >= time_limit_s) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + std::string("over time limit");
    }
    if (!ok) ++failures;
    std::printf("[%s] %s (%.2fs%s%s)\n", ok ? "PASS" : "FAIL", name.c_str(),
                elapsed, detail.empty() ? "" : ": ", detail.c_str());
    std::fflush(stdout);
  }
};

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string write_temp(const InstanceData& data, const std::string& name) {
  const std::string path = temp_path(name);
  write_instance(data, path);
  return path;
}

InstanceData analytic_instance() {
  InstanceData d;
  d.C = Matrix::Zero(2, 2);
  d.C(0, 0) = 2.0;
  d.C(1, 1) = 1.0;
  d.b = Vector::Ones(1);
  d.constraints.push_back(Matrix::Identity(2, 2));
  d.y0 = Vector::Constant(1, 3.0);
  return d;
}

// 1. Fast sketch path equals the dense materialized sketch.
bool sketch_fast_equals_dense(std::string& detail) {
  const Index ns[] = {2, 4, 8, 16};
  const Index ms[] = {1, 3};
  double worst = 0.0;
  int cases = 0;
  SplitMix64 rng(1001);
  while (cases < 50) {
    const Index n = ns[cases % 4];
    const Index m = ms[(cases / 4) % 2];
    SlackFactors f = slack_factors(oracle::random_spd(n, rng));
    SketchSeed seed = new_seed(n, m, 0.05, 0.01,
                               2000 + static_cast<std::uint64_t>(cases));
    SketchWorkspace ws = make_workspace(seed, f.S_inv_sqrt);
    for (Index j = 0; j < m; ++j) {
      Matrix a = oracle::random_symmetric(n, rng);
      Vector fast = sketch_constraint(ws, seed, a);
      Vector dense = oracle::dense_sketch(seed, f.S_inv_sqrt, a);
      worst = std::max(worst, (fast - dense).norm() / (1.0 + dense.norm()));
    }
    ++cases;
  }
  std::ostringstream os;
  os << "50 cases, worst rel err " << worst;
  detail = os.str();
  return worst <= 1e-9;
}

// 2. E ||Pi x||^2 = ||x||^2 across seeds.
bool sketch_unbiasedness(std::string& detail) {
  SplitMix64 rng(1002);
  const Index n_pad = 16;
  Vector x(n_pad * n_pad);
  for (Index i = 0; i < x.size(); ++i) x(i) = rng.next_gaussian();
  const double target = x.squaredNorm();

  const int trials = 2000;
  double sum = 0.0, sum_sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    SketchSeed seed = new_seed(n_pad, 1, 0.05, 0.05,
                               3000 + static_cast<std::uint64_t>(t), 64);
    const double v = sketch_padded_vector(seed, x).squaredNorm();
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / trials;
  const double var = (sum_sq / trials - mean * mean) * trials / (trials - 1);
  const double stderr3 = 3.0 * std::sqrt(var / trials);
  std::ostringstream os;
  os << "mean " << mean << " vs " << target << ", 3se " << stderr3;
  detail = os.str();
  return std::abs(mean - target) <= stderr3;
}

// 3. Subspace embedding: singular values of Pi U stay in [0.5, 1.5].
bool subspace_embedding(std::string& detail) {
  const Index n = 32;  // n_pad^2 = 1024
  const Index m = 4;
  const Index s = 512;
  SplitMix64 rng(1003);
  int good = 0;
  for (int t = 0; t < 100; ++t) {
    Matrix g(n * n, m);
    for (Index i = 0; i < g.size(); ++i) g(i) = rng.next_gaussian();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix u = qr.householderQ() * Matrix::Identity(n * n, m);

    SketchSeed seed = new_seed(n, m, 0.05, 0.05,
                               4000 + static_cast<std::uint64_t>(t), s);
    Matrix sketched(s, m);
    for (Index j = 0; j < m; ++j)
      sketched.col(j) = sketch_padded_vector(seed, u.col(j));
    Eigen::JacobiSVD<Matrix> svd(sketched);
    const double lo = svd.singularValues().minCoeff();
    const double hi = svd.singularValues().maxCoeff();
    if (lo >= 0.5 && hi <= 1.5) ++good;
  }
  detail = std::to_string(good) + "/100 trials inside [0.5, 1.5]";
  return good >= 95;
}

// 4. Hessian spectral approximation at a centered state.
bool hessian_spectral_band(std::string& detail) {
  const std::string path =
      write_temp(generate_random_feasible(16, 4, 505).data, "acc_c4.sdps");

  SketchAuditOptions opt;
  opt.eps_h = 0.1;
  opt.trials = 100;
  opt.rng_seed = 42;
  opt.sketch_size = 32768;
  OpenedInstance a = open_stream(path);
  SketchAuditResult mc = audit_sketch_quality(a.stream, a.instance, opt);

  SketchAuditOptions ex;
  ex.exhaustive = true;
  ex.rng_seed = 42;
  OpenedInstance b = open_stream(path);
  SketchAuditResult iso = audit_sketch_quality(b.stream, b.instance, ex);
  std::remove(path.c_str());

  const double iso_err = std::max(std::abs(iso.ratios.at(0).lo - 1.0),
                                  std::abs(iso.ratios.at(0).hi - 1.0));
  std::ostringstream os;
  os << mc.within_band << "/100 in [0.9, 1.1] at s=" << mc.s
     << "; exhaustive ratio err " << iso_err;
  detail = os.str();
  return mc.within_band >= 95 && iso_err <= 1e-9;
}

// 5. Exact Hessian oracle equals the dense n^2 x n^2 Kronecker computation.
bool exact_hessian_oracle(std::string& detail) {
  SplitMix64 rng(1005);
  double worst = 0.0;
  for (Index n = 1; n <= 6; ++n) {
    for (Index m = 1; m <= 4; ++m) {
      InstanceData d;
      d.C = Matrix::Zero(n, n);
      d.b = Vector::Ones(m);
      for (Index i = 0; i < m; ++i)
        d.constraints.push_back(oracle::random_symmetric(n, rng));
      const std::string path = write_temp(d, "acc_c5.sdps");
      OpenedInstance opened = open_stream(path);
      SlackFactors f = slack_factors(oracle::random_spd(n, rng));
      HessianMatrix h = exact_hessian(opened.stream, f);
      const Matrix dense = oracle::dense_hessian(d.constraints, f.S_inv);
      worst = std::max(worst,
                       (h.entries - dense).norm() / (1.0 + dense.norm()));
      std::remove(path.c_str());
    }
  }
  std::ostringstream os;
  os << "24 cases, worst rel err " << worst;
  detail = os.str();
  return worst <= 1e-9;
}

bool analytic_solution_ok(const Solution& sol) {
  return sol.objective >= 2.0 - 2e-3 && sol.objective <= 2.0 + 1e-6 &&
         sol.infeas_l1 <= 0.024;
}

// 6. End-to-end analytic solve at eps = 1e-3 (both Hessian modes).
bool analytic_solve(std::string& detail) {
  const std::string path = write_temp(analytic_instance(), "acc_c6.sdps");

  SolverConfig exact_cfg;
  exact_cfg.eps = 1e-3;
  exact_cfg.exact_hessian = true;
  OpenedInstance a = open_stream(path);
  Solution exact_sol = solve(a.stream, a.instance, exact_cfg);

  SolverConfig sk_cfg;
  sk_cfg.eps = 1e-3;
  sk_cfg.rng_seed = 11;
  OpenedInstance b = open_stream(path);
  Solution sk_sol = solve(b.stream, b.instance, sk_cfg);
  std::remove(path.c_str());

  std::ostringstream os;
  os << "exact obj " << exact_sol.objective << " infeas " << exact_sol.infeas_l1
     << "; sketched obj " << sk_sol.objective << " infeas "
     << sk_sol.infeas_l1 << " (bound 0.024)";
  detail = os.str();
  return analytic_solution_ok(exact_sol) && analytic_solution_ok(sk_sol);
}

struct SolvedPair {
  Solution exact;
  Solution sketched;
  InstanceStats stats;
};

SolvedPair solve_both(const std::string& path, double eps,
                      std::uint64_t sketch_seed,
                      std::optional<Index> sketch_size = std::nullopt) {
  SolvedPair out;
  {
    OpenedInstance opened = open_stream(path);
    out.stats = compute_stats(opened.instance, opened.stream);
    SolverConfig cfg;
    cfg.eps = eps;
    cfg.exact_hessian = true;
    out.exact = solve(opened.stream, opened.instance, cfg);
  }
  {
    OpenedInstance opened = open_stream(path);
    SolverConfig cfg;
    cfg.eps = eps;
    cfg.rng_seed = sketch_seed;
    cfg.sketch_size = sketch_size;
    out.sketched = solve(opened.stream, opened.instance, cfg);
  }
  return out;
}

// 7. Sketched solve against the exact-Hessian oracle solve, plus the output
// quality inequalities with measured norms (oracle run standing in for X*).
bool sketched_vs_oracle(std::string& detail) {
  const double eps = 1e-3;
  const std::string path =
      write_temp(generate_random_feasible(16, 4, 2024).data, "acc_c7.sdps");
  SolvedPair run = solve_both(path, eps, 7);
  std::remove(path.c_str());

  const double c_norm = run.stats.c_spectral;
  const double r_measured = spectral_norm_symmetric(run.exact.X_hat);
  const double obj_tol = eps * c_norm * r_measured;
  const double infeas_bound =
      4.0 * 16.0 * eps *
      (r_measured * run.stats.sum_schatten1 + run.stats.b_l1);

  const bool obj_close =
      std::abs(run.sketched.objective - run.exact.objective) <= obj_tol;
  const bool obj_lower =
      run.sketched.objective >= run.exact.objective - obj_tol;
  const bool infeas_ok = run.exact.infeas_l1 <= infeas_bound &&
                         run.sketched.infeas_l1 <= infeas_bound;

  std::ostringstream os;
  os << "obj exact " << run.exact.objective << " sketched "
     << run.sketched.objective << " (tol " << obj_tol << "); infeas "
     << run.exact.infeas_l1 << " / " << run.sketched.infeas_l1 << " (bound "
     << infeas_bound << ")";
  detail = os.str();
  return obj_close && obj_lower && infeas_ok;
}

// 8. Pass accounting: three passes per unit-step main iteration and the
// budgeted total.
bool pass_accounting(std::string& detail) {
  const double eps = 1e-3;
  const std::string path =
      write_temp(generate_random_feasible(16, 4, 2024).data, "acc_c8.sdps");
  OpenedInstance opened = open_stream(path);
  SolverConfig cfg;
  cfg.eps = eps;
  cfg.rng_seed = 7;
  Solution sol = solve(opened.stream, opened.instance, cfg);
  std::remove(path.c_str());

  bool unit_steps_ok = true;
  Index prev = -1;
  Index unit_steps = 0;
  for (const IterRecord& r : sol.trace) {
    if (r.phase == Phase::main && prev >= 0 && r.alpha == 1.0 &&
        r.trials == 1) {
      unit_steps_ok = unit_steps_ok && (r.passes - prev == 3);
      ++unit_steps;
    }
    prev = r.passes;
  }

  const Index stepped_extras = sol.centering_iterations +
                               sol.polish_iterations;
  const Index check_overheads =
      2 * 2;  // centering and polish each end with a gradient+sketch check
  const Index bound = 3 * sol.iteration_budget + 3 * stepped_extras +
                      check_overheads + sol.backtrack_extras +
                      sol.passes.setup + sol.passes.final_certificate;
  const bool total_ok = sol.passes_used <= bound &&
                        sol.passes_used == sol.passes.total();

  std::ostringstream os;
  os << unit_steps << " unit main steps all cost 3 passes; total "
     << sol.passes_used << " <= " << bound;
  detail = os.str();
  return unit_steps_ok && unit_steps > 0 && total_ok;
}

struct LedgerProbe {
  Index peak = 0;
  Index n_portion = 0;
  Index m_portion = 0;
  Index budget = 0;
};

LedgerProbe ledgered_solve(Index n, std::uint64_t gen_seed) {
  const Index m = 4;
  const Index s = 1024;
  const std::string path = write_temp(
      generate_random_feasible(n, m, gen_seed).data,
      "acc_c9_" + std::to_string(n) + ".sdps");
  SpaceLedger ledger;
  OpenedInstance opened = open_stream(path, &ledger);
  SolverConfig cfg;
  cfg.eps = 1e-3;
  cfg.rng_seed = 13;
  cfg.sketch_size = s;
  Solution sol = solve(opened.stream, opened.instance, cfg, &ledger);
  std::remove(path.c_str());

  LedgerProbe probe;
  probe.peak = sol.peak_space_words;
  probe.n_portion = sol.peak_n_quadratic_words;
  probe.m_portion = sol.peak_m_sketch_words;
  probe.budget = 8 * n * n + 4 * s * m + 8 * m * m;
  return probe;
}

// 9. Space ledger stays within the quadratic-plus-sketch budget and scales
// like n^2 in n with an m-portion independent of n.
bool space_ledger_shape(std::string& detail) {
  LedgerProbe at32 = ledgered_solve(32, 321);
  LedgerProbe at64 = ledgered_solve(64, 321);

  const double ratio = static_cast<double>(at64.n_portion) /
                       static_cast<double>(at32.n_portion);
  const bool budget_ok = at32.peak < at32.budget && at64.peak < at64.budget;
  const bool quadratic_ok = ratio >= 3.2 && ratio <= 4.8;
  const bool m_stable = at32.m_portion == at64.m_portion;

  std::ostringstream os;
  os << "peak " << at32.peak << "<" << at32.budget << " and " << at64.peak
     << "<" << at64.budget << "; n-portion ratio " << ratio << "; m-portion "
     << at32.m_portion << " == " << at64.m_portion;
  detail = os.str();
  return budget_ok && quadratic_ok && m_stable;
}

// 10. Byte-for-byte reproducibility of report and trace.
bool deterministic_reports(std::string& detail) {
  const std::string path =
      write_temp(generate_random_feasible(8, 2, 88).data, "acc_c10.sdps");

  auto run_once = [&](std::string& report_text, std::string& trace_text) {
    SpaceLedger ledger;
    OpenedInstance opened = open_stream(path, &ledger);
    InstanceStats stats = compute_stats(opened.instance, opened.stream);
    SolverConfig cfg;
    cfg.eps = 1e-3;
    cfg.rng_seed = 99;
    Solution sol = solve(opened.stream, opened.instance, cfg, &ledger);
    report_text = report_json(make_report(opened.instance, stats, cfg, sol))
                      .dump(2);
    std::ostringstream os;
    emit_trace(sol.trace, os);
    trace_text = os.str();
  };

  std::string rep1, tr1, rep2, tr2;
  run_once(rep1, tr1);
  run_once(rep2, tr2);
  std::remove(path.c_str());

  detail = "report " + std::to_string(rep1.size()) + " bytes, trace " +
           std::to_string(tr1.size()) + " bytes";
  return rep1 == rep2 && tr1 == tr2 && !rep1.empty() && !tr1.empty();
}

}  // namespace

int main() {
  Suite suite;
  suite.run("criterion 1: sketch fast path = dense path (rel 1e-9)", 10.0,
            sketch_fast_equals_dense);
  suite.run("criterion 2: norm unbiasedness over 2000 seeds (3 std errors)",
            30.0, sketch_unbiasedness);
  suite.run("criterion 3: subspace embedding, sigma(Pi U) in [0.5, 1.5]",
            120.0, subspace_embedding);
  suite.run("criterion 4: Hessian spectral ratio in [0.9, 1.1] + exhaustive",
            120.0, hessian_spectral_band);
  suite.run("criterion 5: exact Hessian = dense Kronecker (rel 1e-9)", 60.0,
            exact_hessian_oracle);
  suite.run("criterion 6: analytic solve objective in [2-2e-3, 2+1e-6]", 5.0,
            analytic_solve);
  suite.run("criterion 7: sketched vs oracle solve within eps ||C|| R", 120.0,
            sketched_vs_oracle);
  suite.run("criterion 8: three passes per unit-step iteration", 120.0,
            pass_accounting);
  suite.run("criterion 9: space ledger within budget, n^2 scaling", 120.0,
            space_ledger_shape);
  suite.run("criterion 10: byte-identical reports across runs", 60.0,
            deterministic_reports);

  if (suite.failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria FAILED\n", suite.failures);
  return 1;
}
