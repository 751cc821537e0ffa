#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sdps/hessian.hpp"
#include "sdps/instance.hpp"
#include "sdps/linalg.hpp"
#include "sdps/sketch.hpp"
#include "sdps/space_ledger.hpp"
#include "sdps/stream.hpp"

namespace sdps {

struct SolverConfig {
  double eps = 1e-3;    // target accuracy, in (0, 0.01]
  double eta0 = 1.0;    // initial barrier parameter
  double c_T = 40.0;    // iteration budget T = ceil(c_T sqrt(n) ln(n/eps))
  std::optional<Index> max_iters;  // overrides the budget if set

  double sketch_eps = 0.01;             // Hessian approximation accuracy
  std::optional<double> sketch_delta;   // default min(1/n^3, 1/16)
  std::optional<Index> sketch_size;     // overrides the sketch-size formula
  bool exact_hessian = false;           // oracle mode
  bool resketch_each_iteration = false; // fresh sketch randomness per step

  std::uint64_t rng_seed = 0;
  std::optional<double> R_hint;  // user bound on ||X*||

  double center_tol = 0.01;  // centering stops at g^T H~^{-1} g <= this
  bool step_guard = true;    // sufficient-decrease guard on the barrier
  double armijo_c = 1e-4;
  Index max_backtracks = 20;     // step scales 1, 1/2, ..., 2^-max_backtracks
  double center_iter_factor = 50.0;  // cap = ceil(factor * sqrt(n))
};

enum class Phase { centering, main, polish };

const char* phase_name(Phase p);

struct IterRecord {
  Phase phase = Phase::main;
  Index iter = 0;           // global iteration number, 1-based
  double eta = 0.0;
  double grad_norm = 0.0;   // ||g||_2
  double decrement = 0.0;   // g^T H~^{-1} g estimate
  double alpha = 0.0;       // accepted step scale; 0 for convergence checks
  Index trials = 0;         // slack passes spent in backtracking
  bool ridged = false;      // Newton solve needed a ridge
  Index passes = 0;         // stream pass count after the iteration
  Index peak_words = 0;     // streaming-core ledger peak so far
};

struct IpmState {
  Vector y;
  double eta = 0.0;
  SlackFactors factors;  // valid at every accepted state: min_eig > 0
  Index iter = 0;
  std::vector<IterRecord> trace;
};

struct PassBreakdown {
  Index setup = 0;      // initial slack formation
  Index centering = 0;
  Index main = 0;
  Index polish = 0;
  Index final_certificate = 0;
  Index total() const {
    return setup + centering + main + polish + final_certificate;
  }
};

struct Solution {
  Vector y_final;
  Matrix X_hat;
  double objective = 0.0;
  double infeas_l1 = 0.0;
  double eta_final = 0.0;
  double gap_estimate = 0.0;  // n / eta
  Index centering_iterations = 0;
  Index main_iterations = 0;
  Index polish_iterations = 0;
  Index iteration_budget = 0;  // T
  Index passes_used = 0;
  PassBreakdown passes;
  Index backtrack_extras = 0;  // trial passes beyond the first, summed
  Index peak_space_words = 0;  // streaming-core peak (0 without a ledger)
  Index peak_n_quadratic_words = 0;
  Index peak_m_sketch_words = 0;
  Index peak_oracle_words = 0;
  std::string stop_reason;
  std::vector<IterRecord> trace;
};

// Raised when the solver aborts after iterations have run; carries the
// partial trace so diagnostics survive the failure.
class SolveAbort : public SdpsError {
 public:
  SolveAbort(const SdpsError& cause, std::vector<IterRecord> trace)
      : SdpsError(cause.kind(), cause.what()), trace_(std::move(trace)) {}
  const std::vector<IterRecord>& trace() const { return trace_; }

 private:
  std::vector<IterRecord> trace_;
};

// One pass: S(y) = sum_i y_i A_i - C.
Matrix form_slack(ConstraintStream& stream, const Matrix& C, const Vector& y);

// One pass: g_j = eta * b_j - tr[S^{-1} A_j].
Vector streamed_gradient(ConstraintStream& stream, const SlackFactors& factors,
                         double eta, const Vector& b);

// Solves (H~ + ridge) delta = -g via Cholesky; the ridge
// 1e-12 tr(H~)/m is added only when the plain factorization fails, and the
// event is reported through `ridged`. Residual is verified to 1e-8 ||g||.
Vector newton_step(const HessianMatrix& hessian, const Vector& g,
                   bool* ridged = nullptr);

// Backtracking step: tries alpha in {1, 1/2, ...}; each trial costs one pass
// to form S(y + alpha delta) and is accepted when the slack is positive
// definite and (optionally) the barrier objective eta b^T y - log det S
// decreases sufficiently. Throws when every scale fails. `g_dot_delta` is
// g^T delta for the sufficient-decrease test.
void apply_step(ConstraintStream& stream, const Matrix& C, const Vector& b,
                IpmState& state, const Vector& delta, double g_dot_delta,
                const SolverConfig& config, SpaceLedger* ledger,
                IterRecord& record);

// Damped Newton at fixed eta = eta0 from the instance's y0 until the
// decrement estimate drops below config.center_tol.
IpmState initial_center(ConstraintStream& stream, const SdpInstance& instance,
                        const SolverConfig& config,
                        SpaceLedger* ledger = nullptr);

// Full solve: centering, the eta-growth main loop with its 3-pass iteration
// structure, a final polish at the terminal eta, and primal recovery
// X_hat = S^{-1} / eta with a one-pass feasibility certificate.
Solution solve(ConstraintStream& stream, const SdpInstance& instance,
               const SolverConfig& config, SpaceLedger* ledger = nullptr);

// Line-delimited JSON trace records.
void emit_trace(const std::vector<IterRecord>& trace, std::ostream& out);

}  // namespace sdps
