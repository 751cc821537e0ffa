#include "sdps/linalg.hpp"

#include <Eigen/Eigenvalues>

namespace sdps {

std::optional<SlackFactors> try_slack_factors(Matrix S, SpaceLedger* ledger) {
  if (S.rows() != S.cols()) throw invalid_input("slack_factors: not square");
  if (!is_symmetric(S))
    throw invalid_input("slack_factors: matrix is not symmetric");
  const Index n = S.rows();

  Allocation result_words;
  Allocation scratch_words;
  if (ledger != nullptr) {
    result_words = ledger->track("linalg.factors", 3 * n * n,
                                 Category::streaming_core,
                                 SizeClass::n_quadratic);
    scratch_words = ledger->track("linalg.eig.scratch", 2 * n * n + 2 * n,
                                  Category::streaming_core,
                                  SizeClass::n_quadratic);
  }

  Eigen::SelfAdjointEigenSolver<Matrix> eig(S);
  if (eig.info() != Eigen::Success)
    throw numerical_error("slack_factors: eigendecomposition failed");

  const Vector& lambda = eig.eigenvalues();
  const double min_eig = lambda.minCoeff();
  if (min_eig <= pd_tolerance(S)) return std::nullopt;

  SlackFactors f;
  f.min_eig = min_eig;
  f.log_det = lambda.array().log().sum();

  const Matrix& Q = eig.eigenvectors();
  Matrix scaled = Q * lambda.cwiseInverse().asDiagonal();
  f.S_inv.noalias() = scaled * Q.transpose();
  scaled = Q * lambda.cwiseSqrt().cwiseInverse().asDiagonal();
  f.S_inv_sqrt.noalias() = scaled * Q.transpose();
  f.S = std::move(S);
  f.words = std::move(result_words);
  return f;
}

SlackFactors slack_factors(Matrix S, SpaceLedger* ledger) {
  auto f = try_slack_factors(std::move(S), ledger);
  if (!f) throw numerical_error("slack matrix is not positive definite");
  return std::move(*f);
}

double schatten1_symmetric(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success)
    throw numerical_error("schatten1: eigendecomposition failed");
  const double value = eig.eigenvalues().cwiseAbs().sum();
  if (!std::isfinite(value)) throw numerical_error("schatten1: non-finite eigenvalue");
  return value;
}

double spectral_norm_symmetric(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success)
    throw numerical_error("spectral norm: eigendecomposition failed");
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

// Explicit Kronecker product P (x) Q from the definition: block (i,j) equals
// P(i,j) * Q.
Matrix kron_dense(const Matrix& p, const Matrix& q) {
  Matrix out(p.rows() * q.rows(), p.cols() * q.cols());
  for (Index i = 0; i < p.rows(); ++i)
    for (Index j = 0; j < p.cols(); ++j)
      out.block(i * q.rows(), j * q.cols(), q.rows(), q.cols()) = p(i, j) * q;
  return out;
}

}  // namespace

Vector vec_kron_apply_checked(const Matrix& m1, const Matrix& m2,
                              const Matrix& a, double tol) {
  if (m1.cols() != a.cols() || m2.cols() != a.rows())
    throw invalid_input("vec_kron_apply_checked: dimension mismatch");
  if (a.rows() > 64 || a.cols() > 64)
    throw invalid_input("vec_kron_apply_checked: reference path is test-scale only");

  const Vector via_kron = kron_dense(m1, m2) * vec_column_major(a);
  Matrix product = m2 * a * m1.transpose();
  const Vector via_vec = vec_column_major(product);

  const double scale = 1.0 + via_vec.cwiseAbs().maxCoeff();
  if ((via_kron - via_vec).cwiseAbs().maxCoeff() > tol * scale)
    throw numerical_error(
        "vec_kron_apply_checked: Kronecker and vec(M2*A*M1^T) paths disagree");
  return via_vec;
}

}  // namespace sdps
