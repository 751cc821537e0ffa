#include "sdps/sketch.hpp"

#include <cmath>

#include "sdps/stream.hpp"

namespace sdps {

namespace {

void fill_diagonals(SketchSeed& seed, SplitMix64& rng) {
  seed.d1.resize(seed.n_pad);
  seed.d2.resize(seed.n_pad);
  for (Index i = 0; i < seed.n_pad; ++i) seed.d1(i) = rng.rademacher();
  for (Index i = 0; i < seed.n_pad; ++i) seed.d2(i) = rng.rademacher();
}

}  // namespace

Index pad_side(Index n) {
  Index p = 1;
  while (p < n) p <<= 1;
  return p;
}

Index planned_sketch_size(Index n, Index m, double eps, double delta,
                          std::optional<Index> s_override) {
  if (n < 1 || m < 1) throw invalid_input("sketch size: n, m must be >= 1");
  if (!(eps > 0.0 && eps < 0.1))
    throw invalid_input("sketch size: eps must lie in (0, 1/10)");
  if (!(delta > 0.0 && delta < 0.1))
    throw invalid_input("sketch size: delta must lie in (0, 1/10)");
  if (s_override) {
    if (*s_override < 1)
      throw invalid_input("sketch size: override must be >= 1");
    return *s_override;
  }
  const Index n_pad = pad_side(n);
  const Index cap = n_pad * n_pad;
  const double logterm = std::log(static_cast<double>(n) * m / (eps * delta));
  const double formula =
      std::ceil(m / (eps * eps) * logterm * logterm * logterm);
  return (formula >= static_cast<double>(cap))
             ? cap
             : std::max<Index>(1, static_cast<Index>(formula));
}

SketchSeed new_seed(Index n, Index m, double eps, double delta,
                    std::uint64_t rng_seed, std::optional<Index> s_override) {
  SketchSeed seed;
  seed.n = n;
  seed.n_pad = pad_side(n);
  seed.rng_seed = rng_seed;
  seed.s = planned_sketch_size(n, m, eps, delta, s_override);

  SplitMix64 rng(rng_seed);
  fill_diagonals(seed, rng);
  seed.rows_i.resize(seed.s);
  seed.rows_j.resize(seed.s);
  for (Index k = 0; k < seed.s; ++k) {
    seed.rows_i(k) = static_cast<int>(
        rng.next_index(static_cast<std::uint64_t>(seed.n_pad)));
    seed.rows_j(k) = static_cast<int>(
        rng.next_index(static_cast<std::uint64_t>(seed.n_pad)));
  }
  return seed;
}

SketchSeed exhaustive_seed(Index n, std::uint64_t rng_seed) {
  if (n < 1) throw invalid_input("exhaustive_seed: n must be >= 1");
  SketchSeed seed;
  seed.n = n;
  seed.n_pad = pad_side(n);
  seed.s = seed.n_pad * seed.n_pad;
  seed.rng_seed = rng_seed;
  seed.exhaustive = true;
  SplitMix64 rng(rng_seed);
  fill_diagonals(seed, rng);
  seed.rows_i.resize(seed.s);
  seed.rows_j.resize(seed.s);
  for (Index k = 0; k < seed.s; ++k) {
    seed.rows_i(k) = static_cast<int>(k % seed.n_pad);
    seed.rows_j(k) = static_cast<int>(k / seed.n_pad);
  }
  return seed;
}

SketchWorkspace make_workspace(const SketchSeed& seed, const Matrix& S_inv_sqrt,
                               SpaceLedger* ledger) {
  const Index n = seed.n;
  if (S_inv_sqrt.rows() != n || S_inv_sqrt.cols() != n)
    throw invalid_input("make_workspace: slack factor does not match seed");

  SketchWorkspace ws;
  ws.W1.setZero(seed.n_pad, n);
  ws.W2.setZero(seed.n_pad, n);
  ws.W1.topRows(n) = seed.d1.head(n).asDiagonal() * S_inv_sqrt;
  ws.W2.topRows(n) = seed.d2.head(n).asDiagonal() * S_inv_sqrt;
  fwht_in_place(ws.W1);
  fwht_in_place(ws.W2);
  if (ledger != nullptr) {
    ws.w1_words = ledger->track("sketch.W1", ws.W1.size(),
                                Category::streaming_core,
                                SizeClass::n_quadratic);
    ws.w2_words = ledger->track("sketch.W2", ws.W2.size(),
                                Category::streaming_core,
                                SizeClass::n_quadratic);
  }
  return ws;
}

void sketch_constraint(const SketchWorkspace& ws, const SketchSeed& seed,
                       const Matrix& a, Matrix& scratch, Vector& q_out) {
  const Index n = seed.n;
  if (a.rows() != n || a.cols() != n)
    throw invalid_input("sketch_constraint: constraint does not match seed");

  scratch.resize(seed.n_pad, n);
  scratch.noalias() = ws.W2 * a;
  q_out.resize(seed.s);
  const double scale = 1.0 / std::sqrt(static_cast<double>(seed.s));
  for (Index k = 0; k < seed.s; ++k)
    q_out(k) = scale * scratch.row(seed.rows_i(k)).dot(ws.W1.row(seed.rows_j(k)));
}

Vector sketch_constraint(const SketchWorkspace& ws, const SketchSeed& seed,
                         const Matrix& a) {
  Matrix scratch;
  Vector q;
  sketch_constraint(ws, seed, a, scratch, q);
  return q;
}

SketchedBasis sketch_all(ConstraintStream& stream, const SketchWorkspace& ws,
                         const SketchSeed& seed, SpaceLedger* ledger) {
  SketchedBasis basis;
  basis.Q.resize(stream.m(), seed.s);
  if (ledger != nullptr)
    basis.q_words = ledger->track("sketch.Q", basis.Q.size(),
                                  Category::streaming_core,
                                  SizeClass::m_sketch);

  Matrix scratch;
  Allocation scratch_words;
  if (ledger != nullptr)
    scratch_words = ledger->track("sketch.scratch", seed.n_pad * seed.n,
                                  Category::streaming_core,
                                  SizeClass::n_quadratic);
  Vector q;
  stream.rewind();
  while (auto c = stream.next()) {
    sketch_constraint(ws, seed, c->matrix, scratch, q);
    basis.Q.row(c->index - 1) = q.transpose();
  }
  if (!basis.Q.allFinite())
    throw numerical_error("sketched basis contains non-finite entries");
  return basis;
}

Vector sketch_padded_vector(const SketchSeed& seed, const Vector& x) {
  const Index np = seed.n_pad;
  if (x.size() != np * np)
    throw invalid_input("sketch_padded_vector: vector length must be n_pad^2");

  // vec is column-major, so x reshapes to the padded square M with
  // (H D1 (x) H D2) x = vec(H D2 M D1 H^T).
  Eigen::Map<const Matrix> m(x.data(), np, np);
  Matrix t1 = seed.d2.asDiagonal() * m;
  fwht_in_place(t1);  // H D2 M
  Matrix t2 = seed.d1.asDiagonal() * t1.transpose();
  fwht_in_place(t2);  // H D1 (H D2 M)^T = (H D2 M D1 H^T)^T

  Vector q(seed.s);
  const double scale = 1.0 / std::sqrt(static_cast<double>(seed.s));
  for (Index k = 0; k < seed.s; ++k)
    q(k) = scale * t2(seed.rows_j(k), seed.rows_i(k));
  return q;
}

}  // namespace sdps
