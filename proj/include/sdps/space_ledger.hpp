#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>

#include "sdps/common.hpp"

namespace sdps {

// Buffers are accounted in 64-bit words at their allocation sites, rather
// than through process RSS. Two orthogonal tags per buffer:
//   Category: streaming_core counts toward the solver's space claim;
//             oracle_only marks verification-path buffers kept out of it.
//   SizeClass: how the buffer scales, so reports can split the peak into an
//              n-driven portion (slack family, transforms) and an m/s-driven
//              portion (sketched basis, Hessian, dual vectors).
enum class Category { streaming_core, oracle_only };
enum class SizeClass { n_quadratic, m_sketch };

class SpaceLedger;

// RAII registration: words are charged on construction and released on
// destruction. Movable, not copyable.
class Allocation {
 public:
  Allocation() = default;
  Allocation(SpaceLedger* ledger, std::uint64_t id, Index words);
  Allocation(Allocation&& other) noexcept;
  Allocation& operator=(Allocation&& other) noexcept;
  Allocation(const Allocation&) = delete;
  Allocation& operator=(const Allocation&) = delete;
  ~Allocation();

  void release();

 private:
  SpaceLedger* ledger_ = nullptr;
  std::uint64_t id_ = 0;
  Index words_ = 0;
};

class SpaceLedger {
 public:
  // `name` is for diagnostics; peak tracking is per (category, size class).
  Allocation track(const std::string& name, Index words, Category cat,
                   SizeClass size_class);

  Index current_streaming_words() const { return current_streaming_; }
  Index peak_streaming_words() const { return peak_streaming_; }
  Index peak_oracle_words() const { return peak_oracle_; }
  // Peaks of the two size classes within the streaming-core category.
  Index peak_n_quadratic_words() const { return peak_n_quadratic_; }
  Index peak_m_sketch_words() const { return peak_m_sketch_; }

 private:
  friend class Allocation;
  void release(std::uint64_t id, Index words);

  struct Entry {
    Category cat;
    SizeClass size_class;
  };

  std::uint64_t next_id_ = 1;
  std::unordered_map<std::uint64_t, Entry> live_;
  Index current_streaming_ = 0;
  Index current_oracle_ = 0;
  Index current_n_quadratic_ = 0;
  Index current_m_sketch_ = 0;
  Index peak_streaming_ = 0;
  Index peak_oracle_ = 0;
  Index peak_n_quadratic_ = 0;
  Index peak_m_sketch_ = 0;
};

}  // namespace sdps
