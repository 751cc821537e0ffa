#pragma once

#include "sdps/linalg.hpp"
#include "sdps/sketch.hpp"
#include "sdps/space_ledger.hpp"

namespace sdps {

enum class HessianKind { exact, sketched };

struct HessianMatrix {
  Matrix entries;  // m x m, symmetric, positive semidefinite
  HessianKind kind = HessianKind::exact;
};

// Exact Newton-system matrix H_ij = tr[S^{-1/2} A_i S^{-1/2} S^{-1/2} A_j
// S^{-1/2}], computed in one pass by holding all m conjugated constraints.
// That is O(m n^2) words and exempt from the streaming space ledger: this is
// the verification oracle, tracked under the oracle-only category.
HessianMatrix exact_hessian(ConstraintStream& stream,
                            const SlackFactors& factors,
                            SpaceLedger* ledger = nullptr);

// Gram matrix of the sketched basis, symmetrized to scrub roundoff.
HessianMatrix sketched_hessian(const SketchedBasis& basis);

struct SpectralRatio {
  double lo = 0.0;
  double hi = 0.0;
  bool regularized = false;  // exact side needed a ridge to factor
};

// Extreme generalized eigenvalues of H_sketched v = lambda H_exact v, i.e.
// the spectrum of H_exact^{-1/2} H_sketched H_exact^{-1/2}. Equal matrices
// give (1, 1); H_sketched = c H gives (c, c).
SpectralRatio spectral_ratio(const HessianMatrix& exact,
                             const HessianMatrix& sketched);

}  // namespace sdps
