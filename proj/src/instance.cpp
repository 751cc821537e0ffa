#include "sdps/instance.hpp"

#include <cstring>
#include <fstream>

#include "sdps/linalg.hpp"
#include "sdps/stream.hpp"

namespace sdps {

namespace {

void put_bytes(std::ofstream& out, const void* p, std::size_t bytes) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(bytes));
  if (!out) throw io_error("write failed");
}

void put_u32(std::ofstream& out, std::uint32_t v) { put_bytes(out, &v, 4); }
void put_u64(std::ofstream& out, std::uint64_t v) { put_bytes(out, &v, 8); }

void put_matrix_row_major(std::ofstream& out, const Matrix& m,
                          std::vector<double>& row) {
  row.resize(static_cast<std::size_t>(m.cols()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j)
      row[static_cast<std::size_t>(j)] = m(i, j);
    put_bytes(out, row.data(), row.size() * sizeof(double));
  }
}

}  // namespace

std::uint64_t expected_file_bytes(const SdpHeader& header) {
  if (header.n < 1 || header.m < 1)
    throw invalid_input("instance header requires n >= 1 and m >= 1");
  if (header.n > (Index{1} << 20) || header.m > (Index{1} << 32))
    throw invalid_input("implausible header dimensions");
  const auto n = static_cast<unsigned __int128>(header.n);
  const auto m = static_cast<unsigned __int128>(header.m);
  const unsigned __int128 doubles =
      n * n * (m + 1) + m + (header.has_initial_dual ? m : 0);
  const unsigned __int128 total = kHeaderBytes + 8 * doubles;
  if (total > (static_cast<unsigned __int128>(1) << 50))
    throw invalid_input("implausible header dimensions");
  return static_cast<std::uint64_t>(total);
}

void write_instance(const InstanceData& data, const std::string& path) {
  const Index n = data.C.rows();
  const Index m = static_cast<Index>(data.constraints.size());
  if (data.C.cols() != n) throw invalid_input("objective matrix is not square");
  if (n < 1 || m < 1) throw invalid_input("instance requires n >= 1 and m >= 1");
  if (data.b.size() != m) throw invalid_input("b length does not match m");
  if (data.y0 && data.y0->size() != m)
    throw invalid_input("y0 length does not match m");
  if (!is_symmetric(data.C)) throw invalid_input("objective matrix is asymmetric");
  for (Index i = 0; i < m; ++i) {
    const Matrix& a = data.constraints[static_cast<std::size_t>(i)];
    if (a.rows() != n || a.cols() != n)
      throw invalid_input("constraint " + std::to_string(i + 1) +
                          " has wrong dimensions");
    if (!is_symmetric(a))
      throw invalid_input("constraint " + std::to_string(i + 1) +
                          " is asymmetric");
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open " + path + " for writing");

  std::vector<double> row;
  put_bytes(out, kMagic, 4);
  put_u32(out, kFormatVersion);
  put_u64(out, static_cast<std::uint64_t>(n));
  put_u64(out, static_cast<std::uint64_t>(m));
  const std::uint8_t has_y0 = data.y0 ? 1 : 0;
  put_bytes(out, &has_y0, 1);
  put_matrix_row_major(out, data.C, row);
  put_bytes(out, data.b.data(), static_cast<std::size_t>(m) * sizeof(double));
  if (data.y0)
    put_bytes(out, data.y0->data(), static_cast<std::size_t>(m) * sizeof(double));
  for (const Matrix& a : data.constraints) put_matrix_row_major(out, a, row);
  out.flush();
  if (!out) throw io_error("write failed for " + path);
}

InstanceStats compute_stats(const SdpInstance& instance,
                            ConstraintStream& stream,
                            std::optional<double> R_hint) {
  InstanceStats stats;
  stats.b_l1 = instance.b.template lpNorm<1>();
  stats.c_spectral = spectral_norm_symmetric(instance.C);
  stats.R_hint = R_hint;
  stream.rewind();
  while (auto c = stream.next())
    stats.sum_schatten1 += schatten1_symmetric(c->matrix);
  if (!std::isfinite(stats.sum_schatten1) || !std::isfinite(stats.b_l1) ||
      !std::isfinite(stats.c_spectral))
    throw numerical_error("instance stats are not finite");
  return stats;
}

namespace {

Matrix random_symmetric(Index n, SplitMix64& rng) {
  Matrix a(n, n);
  for (Index i = 0; i < n; ++i) {
    a(i, i) = rng.next_gaussian();
    for (Index j = i + 1; j < n; ++j) {
      const double v = rng.next_gaussian();
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  return a;
}

}  // namespace

GeneratedInstance generate_random_feasible(Index n, Index m,
                                           std::uint64_t seed) {
  if (n < 1 || m < 1) throw invalid_input("generator requires n >= 1, m >= 1");
  SplitMix64 rng(seed);

  GeneratedInstance out;
  out.data.constraints.reserve(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i)
    out.data.constraints.push_back(random_symmetric(n, rng));

  Vector y0(m);
  for (Index i = 0; i < m; ++i) y0(i) = rng.next_gaussian();

  // C = sum_i y0_i A_i - I plants S(y0) = I, a strictly feasible dual start.
  Matrix C = Matrix::Zero(n, n);
  for (Index i = 0; i < m; ++i)
    C += y0(i) * out.data.constraints[static_cast<std::size_t>(i)];
  C -= Matrix::Identity(n, n);

  // X0 = G G^T + I is strictly primal feasible for b_i = <A_i, X0>.
  Matrix g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) g(i, j) = rng.next_gaussian();
  out.X0.noalias() = g * g.transpose();
  out.X0 += Matrix::Identity(n, n);

  Vector b(m);
  for (Index i = 0; i < m; ++i)
    b(i) = out.data.constraints[static_cast<std::size_t>(i)]
               .cwiseProduct(out.X0)
               .sum();

  out.data.C = std::move(C);
  out.data.b = std::move(b);
  out.data.y0 = std::move(y0);
  return out;
}

InstanceData maxcut_from_adjacency(const Matrix& weights) {
  const Index n = weights.rows();
  if (n < 1 || weights.cols() != n)
    throw invalid_input("adjacency matrix must be square");
  if (!is_symmetric(weights))
    throw invalid_input("adjacency matrix must be symmetric");

  InstanceData data;
  data.C = weights / 4.0;
  data.b = Vector::Ones(n);
  data.constraints.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    Matrix a = Matrix::Zero(n, n);
    a(i, i) = 1.0;
    data.constraints.push_back(std::move(a));
  }
  // Diagonal start dominating the spectrum: S(y0) = (||C||_S1 + 1) I - C > 0.
  data.y0 = Vector::Constant(n, schatten1_symmetric(data.C) + 1.0);
  return data;
}

InstanceData generate_maxcut(Index n, std::uint64_t seed) {
  if (n < 1) throw invalid_input("generator requires n >= 1");
  SplitMix64 rng(seed);
  Matrix w = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      if (rng.next_double() < 0.5) {
        const double weight = rng.next_double();
        w(i, j) = weight;
        w(j, i) = weight;
      }
    }
  return maxcut_from_adjacency(w);
}

InstanceData generate_feasible(Index n, Index m, std::uint64_t seed,
                               InstanceKind kind) {
  switch (kind) {
    case InstanceKind::random:
      return std::move(generate_random_feasible(n, m, seed).data);
    case InstanceKind::maxcut:
      return generate_maxcut(n, seed);
  }
  throw invalid_input("unknown instance kind");
}

}  // namespace sdps
