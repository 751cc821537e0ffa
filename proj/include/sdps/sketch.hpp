#pragma once

#include <optional>

#include "sdps/common.hpp"
#include "sdps/linalg.hpp"
#include "sdps/space_ledger.hpp"

namespace sdps {

class ConstraintStream;

// Randomness defining the sketch Pi = (1/sqrt(s)) P (H D1 (x) H D2): two
// Rademacher diagonals of size n_pad and s sampled coordinate pairs, all
// reproducible bit-for-bit from rng_seed. n_pad is the smallest power of two
// >= n; inputs are zero-padded to it before the Hadamard transform.
struct SketchSeed {
  Index n = 0;
  Index n_pad = 0;
  Index s = 0;
  Vector d1;
  Vector d2;
  Eigen::ArrayXi rows_i;  // 0-based row index into H D2 side, length s
  Eigen::ArrayXi rows_j;  // 0-based row index into H D1 side, length s
  std::uint64_t rng_seed = 0;
  bool exhaustive = false;
};

Index pad_side(Index n);  // smallest power of two >= n

// Sketch size from the subspace-embedding budget
//   s = min(n_pad^2, ceil(eps^-2 * m * ln^3(n m / (eps * delta)))),
// unless s_override is given, which bypasses both formula and cap.
Index planned_sketch_size(Index n, Index m, double eps, double delta,
                          std::optional<Index> s_override = std::nullopt);

// Coordinates are sampled i.i.d. uniform with replacement.
SketchSeed new_seed(Index n, Index m, double eps, double delta,
                    std::uint64_t rng_seed,
                    std::optional<Index> s_override = std::nullopt);

// Test-mode seed whose sampler enumerates every coordinate pair exactly once
// (s = n_pad^2). With the 1/sqrt(s) scaling this makes Pi an exact isometry,
// so the sketched Hessian reproduces the exact one to roundoff.
SketchSeed exhaustive_seed(Index n, std::uint64_t rng_seed);

// Per-slack state: W1 = H D1 pad(S^{-1/2}) and W2 = H D2 pad(S^{-1/2}),
// both n_pad x n. Rebuilt whenever S changes.
struct SketchWorkspace {
  Matrix W1;
  Matrix W2;
  Allocation w1_words;
  Allocation w2_words;
};

SketchWorkspace make_workspace(const SketchSeed& seed, const Matrix& S_inv_sqrt,
                               SpaceLedger* ledger = nullptr);

// q_k = (1/sqrt(s)) * (W2 A W1^T)(i_k, j_k), i.e. the sampled entries of the
// transformed conjugated constraint. Computed through one n_pad x n product
// row block (scratch) and per-sample row dots; neither the s x s product nor
// any s x n intermediate is formed.
void sketch_constraint(const SketchWorkspace& ws, const SketchSeed& seed,
                       const Matrix& a, Matrix& scratch, Vector& q_out);

Vector sketch_constraint(const SketchWorkspace& ws, const SketchSeed& seed,
                         const Matrix& a);

// m x s matrix whose row i is Pi (S^{-1/2} (x) S^{-1/2}) vec(A_i).
struct SketchedBasis {
  Matrix Q;
  Allocation q_words;
};

// One pass over the stream; row order is by constraint index.
SketchedBasis sketch_all(ConstraintStream& stream, const SketchWorkspace& ws,
                         const SketchSeed& seed, SpaceLedger* ledger = nullptr);

// Applies Pi to an arbitrary vector of length n_pad^2 (column-major layout
// over the padded square). Used by the embedding and unbiasedness checks.
Vector sketch_padded_vector(const SketchSeed& seed, const Vector& x);

}  // namespace sdps
