#include "sdps/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Eigenvalues>

#include "sdps/instance.hpp"
#include "sdps/ipm.hpp"
#include "sdps/report.hpp"
#include "sdps/sketch_audit.hpp"
#include "sdps/stream.hpp"

namespace sdps {

namespace {

int exit_code_for(const SdpsError& e) {
  switch (e.kind()) {
    case ErrorKind::invalid_input: return 2;
    case ErrorKind::numerical: return 3;
    case ErrorKind::io: return 4;
  }
  return 1;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw io_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw io_error("write failed for " + path);
}

struct GenOptions {
  Index n = 0;
  Index m = 0;
  std::string kind = "random";
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_gen(const GenOptions& opt) {
  InstanceKind kind;
  if (opt.kind == "random") {
    kind = InstanceKind::random;
  } else if (opt.kind == "maxcut") {
    kind = InstanceKind::maxcut;
  } else {
    throw invalid_input("unknown instance kind '" + opt.kind + "'");
  }
  const Index m = kind == InstanceKind::maxcut ? opt.n : opt.m;
  if (kind == InstanceKind::random && opt.m < 1)
    throw invalid_input("gen: --m is required for kind=random");

  InstanceData data = generate_feasible(opt.n, m, opt.seed, kind);
  write_instance(data, opt.out);

  OpenedInstance opened = open_stream(opt.out);
  InstanceStats stats = compute_stats(opened.instance, opened.stream);
  std::cout << "wrote " << opt.out << ": n=" << opened.instance.header.n
            << " m=" << opened.instance.header.m
            << " sum||A_i||_S1=" << stats.sum_schatten1
            << " ||b||_1=" << stats.b_l1 << " ||C||=" << stats.c_spectral
            << '\n';
  return 0;
}

struct SolveOptions {
  std::string path;
  SolverConfig config;
  std::string trace_path;
  std::string report_path;
};

int cmd_solve(const SolveOptions& opt) {
  SpaceLedger ledger;
  OpenedInstance opened = open_stream(opt.path, &ledger);
  InstanceStats stats =
      compute_stats(opened.instance, opened.stream, opt.config.R_hint);

  const auto start = std::chrono::steady_clock::now();
  Solution solution;
  try {
    solution = solve(opened.stream, opened.instance, opt.config, &ledger);
  } catch (const SolveAbort& abort) {
    // Aborts still emit whatever trace accumulated.
    if (!opt.trace_path.empty()) {
      std::ofstream out(opt.trace_path, std::ios::trunc);
      if (out) emit_trace(abort.trace(), out);
    }
    throw;
  }
  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;

  RunReport report = make_report(opened.instance, stats, opt.config, solution);
  report.wall_time_s = elapsed.count();
  print_report_summary(report, std::cout);

  if (!opt.report_path.empty())
    write_text_file(opt.report_path, report_json(report).dump(2) + "\n");
  if (!opt.trace_path.empty()) {
    std::ofstream out(opt.trace_path, std::ios::trunc);
    if (!out) throw io_error("cannot open " + opt.trace_path + " for writing");
    emit_trace(solution.trace, out);
    if (!out) throw io_error("write failed for " + opt.trace_path);
  }
  return 0;
}

struct CheckSketchOptions {
  std::string path;
  SketchAuditOptions audit;
  std::string report_path;
};

int cmd_check_sketch(const CheckSketchOptions& opt) {
  SpaceLedger ledger;
  OpenedInstance opened = open_stream(opt.path, &ledger);
  SketchAuditResult result =
      audit_sketch_quality(opened.stream, opened.instance, opt.audit, &ledger);

  nlohmann::ordered_json j;
  j["s"] = result.s;
  j["eps_h"] = result.eps_h;
  j["trials"] = static_cast<Index>(result.ratios.size());
  j["within_band"] = result.within_band;
  j["within_fraction"] =
      result.ratios.empty()
          ? 0.0
          : static_cast<double>(result.within_band) /
                static_cast<double>(result.ratios.size());
  auto ratios = nlohmann::ordered_json::array();
  for (const auto& r : result.ratios)
    ratios.push_back({{"lo", r.lo}, {"hi", r.hi}, {"regularized", r.regularized}});
  j["ratios"] = ratios;

  std::cout << j.dump(2) << '\n';
  if (!opt.report_path.empty())
    write_text_file(opt.report_path, j.dump(2) + "\n");
  return 0;
}

int cmd_info(const std::string& path) {
  OpenedInstance opened = open_stream(path);
  InstanceStats stats = compute_stats(opened.instance, opened.stream);
  std::cout << "n=" << opened.instance.header.n
            << " m=" << opened.instance.header.m << '\n'
            << "sum||A_i||_S1=" << stats.sum_schatten1
            << " ||b||_1=" << stats.b_l1 << " ||C||=" << stats.c_spectral
            << '\n';
  if (opened.instance.y0) {
    Matrix S0 =
        form_slack(opened.stream, opened.instance.C, *opened.instance.y0);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(S0, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success)
      throw numerical_error("eigendecomposition of S(y0) failed");
    const double min_eig = eig.eigenvalues().minCoeff();
    std::cout << "S(y0) PD: " << (min_eig > pd_tolerance(S0) ? "yes" : "no")
              << ", min_eig=" << min_eig << '\n';
  } else {
    std::cout << "initial dual point: none\n";
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"streaming semidefinite-program solver"};
  app.require_subcommand(1);

  GenOptions gen_opt;
  auto* gen = app.add_subcommand("gen", "generate a test instance file");
  gen->add_option("--n", gen_opt.n, "matrix side length")->required();
  gen->add_option("--m", gen_opt.m, "number of constraints (random kind)");
  gen->add_option("--kind", gen_opt.kind, "random | maxcut");
  gen->add_option("--seed", gen_opt.seed, "generator seed");
  gen->add_option("--out", gen_opt.out, "output path")->required();

  SolveOptions solve_opt;
  double solve_delta = -1.0;
  Index solve_sketch_size = -1;
  Index solve_max_iters = -1;
  double solve_r_hint = -1.0;
  auto* sv = app.add_subcommand("solve", "run the interior point solver");
  sv->add_option("path", solve_opt.path, "instance file")->required();
  sv->add_option("--eps", solve_opt.config.eps, "target accuracy in (0, 0.01]");
  sv->add_option("--eta0", solve_opt.config.eta0, "initial barrier parameter");
  sv->add_option("--sketch-size", solve_sketch_size, "sketch size override");
  sv->add_option("--sketch-eps", solve_opt.config.sketch_eps,
                 "Hessian sketch accuracy");
  sv->add_option("--sketch-delta", solve_delta,
                 "Hessian sketch failure probability");
  sv->add_flag("--exact-hessian", solve_opt.config.exact_hessian,
               "use the exact Hessian oracle");
  sv->add_flag("--resketch", solve_opt.config.resketch_each_iteration,
               "fresh sketch randomness every iteration");
  sv->add_option("--seed", solve_opt.config.rng_seed, "sketch seed");
  sv->add_option("--max-iters", solve_max_iters, "main iteration budget");
  sv->add_option("--r-hint", solve_r_hint, "bound on ||X*||");
  sv->add_option("--trace", solve_opt.trace_path, "trace output path");
  sv->add_option("--report", solve_opt.report_path, "report output path");

  CheckSketchOptions check_opt;
  Index check_sketch_size = -1;
  double check_delta = -1.0;
  auto* ck = app.add_subcommand("check-sketch",
                                "audit sketched-Hessian quality at a centered "
                                "state");
  ck->add_option("path", check_opt.path, "instance file")->required();
  ck->add_option("--sketch-eps", check_opt.audit.eps_h,
                 "quality band half-width");
  ck->add_option("--trials", check_opt.audit.trials, "number of sketch seeds");
  ck->add_option("--seed", check_opt.audit.rng_seed, "base seed");
  ck->add_option("--sketch-size", check_sketch_size, "sketch size override");
  ck->add_option("--sketch-delta", check_delta, "sketch failure probability");
  ck->add_flag("--exhaustive", check_opt.audit.exhaustive,
               "enumerate all coordinates (isometry mode)");
  ck->add_option("--report", check_opt.report_path, "report output path");

  std::string info_path;
  auto* info = app.add_subcommand("info", "print instance statistics");
  info->add_option("path", info_path, "instance file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) return cmd_gen(gen_opt);
    if (*sv) {
      if (solve_sketch_size >= 0) solve_opt.config.sketch_size = solve_sketch_size;
      if (solve_delta >= 0.0) solve_opt.config.sketch_delta = solve_delta;
      if (solve_max_iters >= 0) solve_opt.config.max_iters = solve_max_iters;
      if (solve_r_hint >= 0.0) solve_opt.config.R_hint = solve_r_hint;
      return cmd_solve(solve_opt);
    }
    if (*ck) {
      if (check_sketch_size >= 0) check_opt.audit.sketch_size = check_sketch_size;
      if (check_delta >= 0.0) check_opt.audit.sketch_delta = check_delta;
      return cmd_check_sketch(check_opt);
    }
    if (*info) return cmd_info(info_path);
  } catch (const SdpsError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("sdps");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace sdps
