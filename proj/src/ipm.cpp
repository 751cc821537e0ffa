#include "sdps/ipm.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <Eigen/Cholesky>

namespace sdps {

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::centering: return "centering";
    case Phase::main: return "main";
    case Phase::polish: return "polish";
  }
  return "?";
}

namespace {

void validate_config(const SolverConfig& cfg) {
  if (!(cfg.eps > 0.0 && cfg.eps <= 0.01))
    throw invalid_input("config: eps must lie in (0, 0.01]");
  if (!(cfg.eta0 > 0.0) || !std::isfinite(cfg.eta0))
    throw invalid_input("config: eta0 must be positive");
  if (!(cfg.c_T >= 1.0)) throw invalid_input("config: c_T must be >= 1");
  if (!(cfg.sketch_eps > 0.0 && cfg.sketch_eps < 0.1))
    throw invalid_input("config: sketch_eps must lie in (0, 1/10)");
  if (cfg.sketch_delta && !(*cfg.sketch_delta > 0.0 && *cfg.sketch_delta < 0.1))
    throw invalid_input("config: sketch_delta must lie in (0, 1/10)");
  if (cfg.max_backtracks < 0 || cfg.max_backtracks > 62)
    throw invalid_input("config: max_backtracks out of range");
  if (!(cfg.center_tol > 0.0)) throw invalid_input("config: center_tol must be positive");
}

double effective_sketch_delta(const SolverConfig& cfg, Index n) {
  if (cfg.sketch_delta) return *cfg.sketch_delta;
  const double nd = static_cast<double>(n);
  return std::min(1.0 / (nd * nd * nd), 1.0 / 16.0);
}

// Sketch randomness held for the whole run (one seed per solve unless
// re-randomization is requested).
struct HeldSeed {
  SketchSeed seed;
  Allocation diag_words;
  Allocation coord_words;
};

HeldSeed make_held_seed(const SolverConfig& cfg, Index n, Index m,
                        std::uint64_t rng_seed, SpaceLedger* ledger) {
  HeldSeed held;
  held.seed = new_seed(n, m, cfg.sketch_eps, effective_sketch_delta(cfg, n),
                       rng_seed, cfg.sketch_size);
  if (ledger != nullptr) {
    held.diag_words = ledger->track("sketch.seed.diagonals",
                                    2 * held.seed.n_pad,
                                    Category::streaming_core,
                                    SizeClass::n_quadratic);
    held.coord_words = ledger->track(
        "sketch.seed.coords", words_for_bytes(2 * held.seed.s * sizeof(int)),
        Category::streaming_core, SizeClass::m_sketch);
  }
  return held;
}

HessianMatrix compute_hessian(ConstraintStream& stream, const IpmState& state,
                              const SolverConfig& cfg, SpaceLedger* ledger,
                              std::optional<HeldSeed>& held, Index iter) {
  if (cfg.exact_hessian) return exact_hessian(stream, state.factors, ledger);
  if (!held || cfg.resketch_each_iteration) {
    std::uint64_t s = cfg.rng_seed;
    if (cfg.resketch_each_iteration)
      s ^= 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(iter);
    held = make_held_seed(cfg, stream.n(), stream.m(), s, ledger);
  }
  SketchWorkspace ws = make_workspace(held->seed, state.factors.S_inv_sqrt,
                                      ledger);
  SketchedBasis basis = sketch_all(stream, ws, held->seed, ledger);
  return sketched_hessian(basis);
}

// Runs one gradient/Hessian/step cycle. When `stop_tol` is set and the
// decrement estimate is already below it, no step is taken and true is
// returned (the iteration then costs two passes instead of three).
bool iterate_once(Phase phase, std::optional<double> stop_tol,
                  ConstraintStream& stream, const SdpInstance& instance,
                  const SolverConfig& cfg, SpaceLedger* ledger,
                  std::optional<HeldSeed>& held, IpmState& state) {
  ++state.iter;
  IterRecord rec;
  rec.phase = phase;
  rec.iter = state.iter;
  rec.eta = state.eta;

  Vector g = streamed_gradient(stream, state.factors, state.eta, instance.b);
  rec.grad_norm = g.norm();

  Vector delta;
  {
    HessianMatrix h = compute_hessian(stream, state, cfg, ledger, held,
                                      state.iter);
    Allocation h_words;
    if (ledger != nullptr)
      h_words = ledger->track("ipm.hessian", h.entries.size(),
                              Category::streaming_core, SizeClass::m_sketch);
    bool ridged = false;
    delta = newton_step(h, g, &ridged);
    rec.ridged = ridged;
  }

  const double g_dot_delta = g.dot(delta);
  rec.decrement = std::max(0.0, -g_dot_delta);

  const bool converged = stop_tol && rec.decrement <= *stop_tol;
  if (!converged) {
    try {
      apply_step(stream, instance.C, instance.b, state, delta, g_dot_delta,
                 cfg, ledger, rec);
    } catch (...) {
      // Keep the failed iteration visible in the abort trace.
      rec.passes = stream.pass_count();
      rec.peak_words = ledger ? ledger->peak_streaming_words() : 0;
      state.trace.push_back(rec);
      throw;
    }
  }

  rec.passes = stream.pass_count();
  rec.peak_words = ledger ? ledger->peak_streaming_words() : 0;
  state.trace.push_back(rec);
  return converged;
}

Index count_steps(const std::vector<IterRecord>& trace, Phase phase) {
  Index k = 0;
  for (const auto& r : trace)
    if (r.phase == phase && r.trials > 0) ++k;
  return k;
}

}  // namespace

Matrix form_slack(ConstraintStream& stream, const Matrix& C, const Vector& y) {
  Matrix S = -C;
  stream.rewind();
  while (auto c = stream.next()) S += y(c->index - 1) * c->matrix;
  return S;
}

Vector streamed_gradient(ConstraintStream& stream, const SlackFactors& factors,
                         double eta, const Vector& b) {
  Vector g(b.size());
  stream.rewind();
  while (auto c = stream.next())
    g(c->index - 1) = eta * b(c->index - 1) -
                      trace_product(factors.S_inv, c->matrix);
  if (stream.cursor() != b.size() + 1)
    throw invalid_input("gradient pass: constraint count does not match b");
  return g;
}

Vector newton_step(const HessianMatrix& hessian, const Vector& g,
                   bool* ridged) {
  const Index m = hessian.entries.rows();
  if (g.size() != m) throw invalid_input("newton_step: dimension mismatch");
  if (ridged != nullptr) *ridged = false;
  if (g.lpNorm<Eigen::Infinity>() == 0.0) return Vector::Zero(m);

  Matrix system = hessian.entries;
  Eigen::LLT<Matrix> llt(system);
  if (llt.info() != Eigen::Success) {
    const double ridge = 1e-12 * system.trace() / static_cast<double>(m);
    if (!(ridge > 0.0))
      throw numerical_error(
          "degenerate Hessian: constraints are linearly dependent or the "
          "sketch collapsed; rerun with --exact-hessian or a larger sketch");
    system += ridge * Matrix::Identity(m, m);
    llt.compute(system);
    if (llt.info() != Eigen::Success)
      throw numerical_error(
          "degenerate Hessian: constraints are linearly dependent or the "
          "sketch collapsed; rerun with --exact-hessian or a larger sketch");
    if (ridged != nullptr) *ridged = true;
  }

  Vector delta = llt.solve(-g);
  const double tol = 1e-8 * g.norm();
  Vector residual = system * delta + g;
  if (residual.norm() > tol) {
    delta += llt.solve(-residual);
    residual = system * delta + g;
    if (residual.norm() > tol)
      throw numerical_error("newton_step: solve residual exceeds tolerance");
  }
  return delta;
}

void apply_step(ConstraintStream& stream, const Matrix& C, const Vector& b,
                IpmState& state, const Vector& delta, double g_dot_delta,
                const SolverConfig& config, SpaceLedger* ledger,
                IterRecord& record) {
  const double f_current = state.eta * b.dot(state.y) - state.factors.log_det;
  // The old factorization is consumed at this point; free it so the trial
  // window holds one slack family at a time.
  state.factors = SlackFactors{};

  for (Index k = 0; k <= config.max_backtracks; ++k) {
    const double alpha = std::ldexp(1.0, -static_cast<int>(k));
    Vector y_trial = state.y + alpha * delta;

    Allocation trial_words;
    if (ledger != nullptr)
      trial_words = ledger->track("ipm.slack_trial", C.size(),
                                  Category::streaming_core,
                                  SizeClass::n_quadratic);
    Matrix S_trial = form_slack(stream, C, y_trial);
    ++record.trials;
    trial_words.release();
    auto factors = try_slack_factors(std::move(S_trial), ledger);
    if (!factors) continue;

    if (config.step_guard) {
      const double f_trial = state.eta * b.dot(y_trial) - factors->log_det;
      if (!(f_trial <=
            f_current + config.armijo_c * alpha * g_dot_delta))
        continue;
    }

    state.y = std::move(y_trial);
    state.factors = std::move(*factors);
    record.alpha = alpha;
    return;
  }
  throw numerical_error(
      "step rejected: outside cone after " +
      std::to_string(config.max_backtracks + 1) +
      " scales; the instance may be infeasible or the sketched Hessian too "
      "coarse (try --exact-hessian or a larger sketch)");
}

IpmState initial_center(ConstraintStream& stream, const SdpInstance& instance,
                        const SolverConfig& config, SpaceLedger* ledger) {
  validate_config(config);
  if (!instance.y0) throw invalid_input("no initial dual point");

  IpmState state;
  state.y = *instance.y0;
  state.eta = config.eta0;

  {
    Allocation trial_words;
    if (ledger != nullptr)
      trial_words = ledger->track("ipm.slack_trial", instance.C.size(),
                                  Category::streaming_core,
                                  SizeClass::n_quadratic);
    Matrix S0 = form_slack(stream, instance.C, state.y);
    trial_words.release();
    auto factors = try_slack_factors(std::move(S0), ledger);
    if (!factors)
      throw numerical_error(
          "initial dual point is infeasible: S(y0) is not positive definite");
    state.factors = std::move(*factors);
  }

  std::optional<HeldSeed> held;
  const Index cap = static_cast<Index>(
      std::ceil(config.center_iter_factor *
                std::sqrt(static_cast<double>(stream.n()))));
  try {
    for (Index k = 0; k <= cap; ++k) {
      if (iterate_once(Phase::centering, config.center_tol, stream, instance,
                       config, ledger, held, state))
        return state;
    }
    throw numerical_error("centering did not converge within " +
                          std::to_string(cap) + " iterations");
  } catch (const SolveAbort&) {
    throw;
  } catch (const SdpsError& e) {
    throw SolveAbort(e, std::move(state.trace));
  }
}

namespace {

Solution run_main_and_recover(ConstraintStream& stream,
                              const SdpInstance& instance,
                              const SolverConfig& config, SpaceLedger* ledger,
                              IpmState& state, Solution sol,
                              Index passes_at_entry,
                              Index passes_after_center) {
  const double nd = static_cast<double>(stream.n());
  std::optional<HeldSeed> held;
  const Index T =
      config.max_iters
          ? *config.max_iters
          : static_cast<Index>(std::ceil(config.c_T * std::sqrt(nd) *
                                         std::log(nd / config.eps)));
  sol.iteration_budget = T;
  const double eta_target = 2.0 * nd / config.eps;
  const double growth = 1.0 + 1.0 / std::sqrt(nd);

  Index main_iters = 0;
  while (state.eta < eta_target && main_iters < T) {
    state.eta *= growth;
    iterate_once(Phase::main, std::nullopt, stream, instance, config, ledger,
                 held, state);
    ++main_iters;
  }
  sol.stop_reason = state.eta >= eta_target ? "gap_target" : "iteration_budget";
  const Index passes_after_main = stream.pass_count();
  sol.passes.main = passes_after_main - passes_after_center;

  // Final polish at the terminal eta: the primal certificate X = S^{-1}/eta
  // is only as good as the centering of the last iterate.
  const double polish_tol =
      std::max(std::min(1e-4, std::pow(config.eps / 10.0, 2)), 1e-12);
  const Index polish_cap = static_cast<Index>(
      std::ceil(config.center_iter_factor * std::sqrt(nd)));
  bool polished = false;
  for (Index k = 0; k <= polish_cap; ++k) {
    if (iterate_once(Phase::polish, polish_tol, stream, instance, config,
                     ledger, held, state)) {
      polished = true;
      break;
    }
  }
  if (!polished) sol.stop_reason += "+polish_budget";
  sol.passes.polish = stream.pass_count() - passes_after_main;

  // Primal recovery from the central-path relation.
  Allocation x_words;
  if (ledger != nullptr)
    x_words = ledger->track("ipm.X_hat", instance.C.size(),
                            Category::streaming_core, SizeClass::n_quadratic);
  sol.X_hat = state.factors.S_inv / state.eta;
  sol.X_hat = 0.5 * (sol.X_hat + sol.X_hat.transpose()).eval();
  sol.objective = sol.X_hat.cwiseProduct(instance.C).sum();

  // Independent feasibility certificate, one more pass.
  sol.infeas_l1 = 0.0;
  stream.rewind();
  while (auto c = stream.next())
    sol.infeas_l1 += std::abs(c->matrix.cwiseProduct(sol.X_hat).sum() -
                              instance.b(c->index - 1));
  sol.passes.final_certificate = 1;

  sol.y_final = std::move(state.y);
  sol.eta_final = state.eta;
  sol.gap_estimate = nd / state.eta;
  sol.centering_iterations = count_steps(state.trace, Phase::centering);
  sol.main_iterations = main_iters;
  sol.polish_iterations = count_steps(state.trace, Phase::polish);
  sol.passes_used = stream.pass_count() - passes_at_entry;
  for (const auto& r : state.trace)
    if (r.trials > 1) sol.backtrack_extras += r.trials - 1;
  if (ledger != nullptr) {
    sol.peak_space_words = ledger->peak_streaming_words();
    sol.peak_n_quadratic_words = ledger->peak_n_quadratic_words();
    sol.peak_m_sketch_words = ledger->peak_m_sketch_words();
    sol.peak_oracle_words = ledger->peak_oracle_words();
  }
  sol.trace = std::move(state.trace);
  return sol;
}

}  // namespace

Solution solve(ConstraintStream& stream, const SdpInstance& instance,
               const SolverConfig& config, SpaceLedger* ledger) {
  validate_config(config);
  const Index m = stream.m();

  Allocation c_words, vec_words;
  if (ledger != nullptr) {
    c_words = ledger->track("instance.C", instance.C.size(),
                            Category::streaming_core, SizeClass::n_quadratic);
    vec_words = ledger->track("instance.vectors", m + (instance.y0 ? m : 0),
                              Category::streaming_core, SizeClass::m_sketch);
  }

  Solution sol;
  const Index passes_at_entry = stream.pass_count();

  IpmState state = initial_center(stream, instance, config, ledger);
  const Index passes_after_center = stream.pass_count();
  sol.passes.setup = 1;  // initial slack formation
  sol.passes.centering = passes_after_center - passes_at_entry - 1;

  try {
    return run_main_and_recover(stream, instance, config, ledger, state,
                                std::move(sol), passes_at_entry,
                                passes_after_center);
  } catch (const SolveAbort&) {
    throw;
  } catch (const SdpsError& e) {
    throw SolveAbort(e, std::move(state.trace));
  }
}

void emit_trace(const std::vector<IterRecord>& trace, std::ostream& out) {
  char line[512];
  for (const auto& r : trace) {
    std::snprintf(line, sizeof(line),
                  "{\"phase\":\"%s\",\"iter\":%lld,\"eta\":%.17g,"
                  "\"grad_norm\":%.17g,\"decrement\":%.17g,\"alpha\":%.17g,"
                  "\"trials\":%lld,\"ridged\":%s,\"passes\":%lld,"
                  "\"peak_words\":%lld}",
                  phase_name(r.phase), static_cast<long long>(r.iter), r.eta,
                  r.grad_norm, r.decrement, r.alpha,
                  static_cast<long long>(r.trials), r.ridged ? "true" : "false",
                  static_cast<long long>(r.passes),
                  static_cast<long long>(r.peak_words));
    out << line << '\n';
  }
}

}  // namespace sdps
