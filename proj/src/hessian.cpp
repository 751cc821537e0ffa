#include "sdps/hessian.hpp"

#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "sdps/stream.hpp"

namespace sdps {

HessianMatrix exact_hessian(ConstraintStream& stream,
                            const SlackFactors& factors,
                            SpaceLedger* ledger) {
  const Index n = stream.n();
  const Index m = stream.m();

  std::vector<Matrix> conjugated;
  conjugated.reserve(static_cast<std::size_t>(m));
  Allocation conj_words;
  if (ledger != nullptr)
    conj_words = ledger->track("hessian.oracle.conjugated", m * n * n,
                               Category::oracle_only, SizeClass::n_quadratic);

  Matrix half(n, n);
  stream.rewind();
  while (auto c = stream.next()) {
    half.noalias() = factors.S_inv_sqrt * c->matrix;
    conjugated.emplace_back(half * factors.S_inv_sqrt);
  }

  HessianMatrix h;
  h.kind = HessianKind::exact;
  h.entries.resize(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = i; j < m; ++j) {
      const double v =
          trace_product(conjugated[static_cast<std::size_t>(i)],
                        conjugated[static_cast<std::size_t>(j)]);
      h.entries(i, j) = v;
      h.entries(j, i) = v;
    }
  if (!h.entries.allFinite())
    throw numerical_error("exact Hessian contains non-finite entries");
  return h;
}

HessianMatrix sketched_hessian(const SketchedBasis& basis) {
  HessianMatrix h;
  h.kind = HessianKind::sketched;
  h.entries.noalias() = basis.Q * basis.Q.transpose();
  h.entries = 0.5 * (h.entries + h.entries.transpose()).eval();
  if (!h.entries.allFinite())
    throw numerical_error("sketched Hessian contains non-finite entries");
  return h;
}

SpectralRatio spectral_ratio(const HessianMatrix& exact,
                             const HessianMatrix& sketched) {
  const Index m = exact.entries.rows();
  if (sketched.entries.rows() != m || sketched.entries.cols() != m)
    throw invalid_input("spectral_ratio: dimension mismatch");

  SpectralRatio out;
  Matrix base = exact.entries;
  Eigen::LLT<Matrix> llt(base);
  if (llt.info() != Eigen::Success) {
    base += (1e-12 * base.trace() / static_cast<double>(m)) *
            Matrix::Identity(m, m);
    out.regularized = true;
    llt.compute(base);
    if (llt.info() != Eigen::Success)
      throw numerical_error("spectral_ratio: exact Hessian is singular");
  }

  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> eig(sketched.entries, base,
                                                       Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success)
    throw numerical_error("spectral_ratio: generalized eigensolve failed");
  out.lo = eig.eigenvalues().minCoeff();
  out.hi = eig.eigenvalues().maxCoeff();
  return out;
}

}  // namespace sdps
