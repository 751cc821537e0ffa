#pragma once

#include <optional>

#include "sdps/common.hpp"
#include "sdps/space_ledger.hpp"

namespace sdps {

// Symmetry tolerance used throughout: ||M - M^T||_max <= 1e-9 * (1 + ||M||_max).
inline constexpr double kSymmetryTol = 1e-9;

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m,
                  double tol = kSymmetryTol) {
  if (m.rows() != m.cols()) return false;
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = j + 1; i < m.rows(); ++i)
      if (std::abs(m(i, j) - m(j, i)) > tol * scale) return false;
  return true;
}

// tr[A * B] = sum_{p,q} A(p,q) * B(q,p), evaluated without forming A * B.
template <typename DerivedA, typename DerivedB>
double trace_product(const Eigen::MatrixBase<DerivedA>& a,
                     const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.cols() || a.cols() != b.rows())
    throw invalid_input("trace_product: dimension mismatch");
  return a.cwiseProduct(b.transpose()).sum();
}

inline bool is_power_of_two(Index n) { return n >= 1 && (n & (n - 1)) == 0; }

// In-place fast Walsh-Hadamard transform down each column: M <- H * M, with
// H the unnormalized +-1 Sylvester-Hadamard matrix of order rows(M). Note
// H * H = rows(M) * I, so the transform is an involution up to that factor.
template <typename Derived>
void fwht_in_place(Eigen::MatrixBase<Derived>& m) {
  const Index n = m.rows();
  if (!is_power_of_two(n))
    throw invalid_input("fwht: row count " + std::to_string(n) +
                        " is not a power of two");
  for (Index len = 1; len < n; len <<= 1) {
    for (Index block = 0; block < n; block += 2 * len) {
      for (Index i = block; i < block + len; ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
          const double u = m(i, j);
          const double v = m(i + len, j);
          m(i, j) = u + v;
          m(i + len, j) = u - v;
        }
      }
    }
  }
}

inline Matrix fwht_applied(Matrix m) {
  fwht_in_place(m);
  return m;
}

// Slack matrix together with the pieces of its eigendecomposition the solver
// needs: S^{-1}, the symmetric S^{-1/2}, the smallest eigenvalue (doubles as
// the positive-definiteness certificate) and log det S.
struct SlackFactors {
  Matrix S;
  Matrix S_inv;
  Matrix S_inv_sqrt;
  double min_eig = 0.0;
  double log_det = 0.0;
  Allocation words;  // ledger charge for the three matrices, when tracked
};

// Positive-definiteness threshold, scale-free in the matrix trace.
inline double pd_tolerance(const Matrix& S) {
  return 1e-12 * S.trace() / static_cast<double>(S.rows());
}

// Factorizes via a full symmetric eigendecomposition. Returns nullopt when
// the smallest eigenvalue is at or below pd_tolerance(S); the IPM treats that
// as a rejected step rather than a failure.
std::optional<SlackFactors> try_slack_factors(Matrix S,
                                              SpaceLedger* ledger = nullptr);

// Throwing variant for callers that require a positive definite slack.
SlackFactors slack_factors(Matrix S, SpaceLedger* ledger = nullptr);

// Schatten 1-norm of a symmetric matrix: sum of |eigenvalues|.
double schatten1_symmetric(const Matrix& a);

// Spectral norm of a symmetric matrix: max |eigenvalue|.
double spectral_norm_symmetric(const Matrix& a);

// Reference utility for the column-major vectorization convention
//   (B (x) A) vec(X) = vec(A X B^T),
// where vec stacks columns. Computes (M1 (x) M2) vec(A) twice, once through
// an explicitly materialized Kronecker product and once as vec(M2 A M1^T),
// and checks the two agree; any disagreement signals a vec-convention bug.
// Intended for oracle use at small sizes.
Vector vec_kron_apply_checked(const Matrix& m1, const Matrix& m2,
                              const Matrix& a, double tol = 1e-10);

// Column-major vectorization.
inline Vector vec_column_major(const Matrix& a) {
  return Eigen::Map<const Vector>(a.data(), a.size());
}

}  // namespace sdps
