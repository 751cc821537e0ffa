#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdps/common.hpp"
#include "sdps/space_ledger.hpp"

namespace sdps {

// On-disk layout (little-endian, no padding):
//   magic "SDPS" | u32 version=1 | u64 n | u64 m | u8 has_initial_dual |
//   C (n*n float64, row-major) | b (m float64) | [y0 (m float64)] |
//   A_1 .. A_m (n*n float64 each, row-major)
inline constexpr char kMagic[4] = {'S', 'D', 'P', 'S'};
inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr std::size_t kHeaderBytes = 4 + 4 + 8 + 8 + 1;

struct SdpHeader {
  Index n = 0;
  Index m = 0;
  bool has_initial_dual = false;
};

// Expected total file size for a header; throws if implausibly large.
std::uint64_t expected_file_bytes(const SdpHeader& header);

// Loaded instance metadata: everything except the constraint block, which is
// only ever visited through a ConstraintStream.
struct SdpInstance {
  SdpHeader header;
  Matrix C;
  Vector b;
  std::optional<Vector> y0;
};

// Fully in-memory instance, used by generators and the writer. Solver-side
// code never holds one of these.
struct InstanceData {
  Matrix C;
  Vector b;
  std::optional<Vector> y0;
  std::vector<Matrix> constraints;

  SdpHeader header() const {
    return SdpHeader{C.rows(), static_cast<Index>(constraints.size()),
                     y0.has_value()};
  }
};

// Writes the binary instance file. Re-reading reproduces every float
// bit-exactly. Rejects asymmetric matrices, reporting the offending index.
void write_instance(const InstanceData& data, const std::string& path);

struct InstanceStats {
  double sum_schatten1 = 0.0;  // sum_i ||A_i||_1 (Schatten)
  double b_l1 = 0.0;
  double c_spectral = 0.0;
  std::optional<double> R_hint;
};

class ConstraintStream;

// One full pass over the constraints; Schatten 1-norms via symmetric
// eigendecomposition per constraint.
InstanceStats compute_stats(const SdpInstance& instance,
                            ConstraintStream& stream,
                            std::optional<double> R_hint = std::nullopt);

enum class InstanceKind { random, maxcut };

struct GeneratedInstance {
  InstanceData data;
  // Planted strictly feasible primal point (random kind only); kept so tests
  // can re-verify <A_i, X0> = b_i.
  Matrix X0;
};

// Strictly feasible random instance: symmetric Gaussian A_i, Gaussian y0,
// C = sum_i y0_i A_i - I (so S(y0) = I), X0 = G G^T + I, b_i = <A_i, X0>.
GeneratedInstance generate_random_feasible(Index n, Index m,
                                           std::uint64_t seed);

// Max-cut relaxation of a weighted graph: C = W/4, A_i = e_i e_i^T, b_i = 1,
// m = n, diagonal start y0 = (||C||_S1 + 1) * ones.
InstanceData maxcut_from_adjacency(const Matrix& weights);

// Max-cut instance on a seeded Erdos-Renyi graph (p = 1/2, uniform weights).
InstanceData generate_maxcut(Index n, std::uint64_t seed);

InstanceData generate_feasible(Index n, Index m, std::uint64_t seed,
                               InstanceKind kind);

}  // namespace sdps
