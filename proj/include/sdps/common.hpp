#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

// The on-disk format and the deterministic RNG both assume IEEE-754 doubles
// in little-endian byte order.
static_assert(std::endian::native == std::endian::little,
              "sdps assumes a little-endian host");
static_assert(sizeof(double) == 8);

namespace sdps {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Error taxonomy maps onto process exit codes in the CLI:
//   invalid_input -> 2, numerical -> 3, io -> 4.
enum class ErrorKind { invalid_input, numerical, io };

class SdpsError : public std::runtime_error {
 public:
  SdpsError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline SdpsError invalid_input(const std::string& what) {
  return SdpsError(ErrorKind::invalid_input, what);
}
inline SdpsError numerical_error(const std::string& what) {
  return SdpsError(ErrorKind::numerical, what);
}
inline SdpsError io_error(const std::string& what) {
  return SdpsError(ErrorKind::io, what);
}

// Counter-style deterministic generator (splitmix64). All randomness in the
// project flows through this so that a 64-bit seed reproduces every draw
// bit-for-bit, independent of the standard library.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 bits of mantissa.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double rademacher() { return (next_u64() & 1u) ? 1.0 : -1.0; }

  // Uniform in [0, bound). Modulo bias is negligible for bound << 2^64.
  std::uint64_t next_index(std::uint64_t bound) { return next_u64() % bound; }

  // Standard normal via Box-Muller; one spare value is cached.
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - next_double();  // (0, 1]
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline Index words_for_bytes(std::size_t bytes) {
  return static_cast<Index>((bytes + 7) / 8);
}

inline Index words_for_matrix(Index rows, Index cols) { return rows * cols; }

}  // namespace sdps
