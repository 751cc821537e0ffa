#include "sdps/space_ledger.hpp"

#include <algorithm>
#include <utility>

namespace sdps {

Allocation::Allocation(SpaceLedger* ledger, std::uint64_t id, Index words)
    : ledger_(ledger), id_(id), words_(words) {}

Allocation::Allocation(Allocation&& other) noexcept
    : ledger_(other.ledger_), id_(other.id_), words_(other.words_) {
  other.ledger_ = nullptr;
}

Allocation& Allocation::operator=(Allocation&& other) noexcept {
  if (this != &other) {
    release();
    ledger_ = other.ledger_;
    id_ = other.id_;
    words_ = other.words_;
    other.ledger_ = nullptr;
  }
  return *this;
}

Allocation::~Allocation() { release(); }

void Allocation::release() {
  if (ledger_ != nullptr) {
    ledger_->release(id_, words_);
    ledger_ = nullptr;
  }
}

Allocation SpaceLedger::track(const std::string& /*name*/, Index words,
                              Category cat, SizeClass size_class) {
  std::uint64_t id = next_id_++;
  live_.emplace(id, Entry{cat, size_class});
  if (cat == Category::streaming_core) {
    current_streaming_ += words;
    peak_streaming_ = std::max(peak_streaming_, current_streaming_);
    if (size_class == SizeClass::n_quadratic) {
      current_n_quadratic_ += words;
      peak_n_quadratic_ = std::max(peak_n_quadratic_, current_n_quadratic_);
    } else {
      current_m_sketch_ += words;
      peak_m_sketch_ = std::max(peak_m_sketch_, current_m_sketch_);
    }
  } else {
    current_oracle_ += words;
    peak_oracle_ = std::max(peak_oracle_, current_oracle_);
  }
  return Allocation(this, id, words);
}

void SpaceLedger::release(std::uint64_t id, Index words) {
  auto it = live_.find(id);
  if (it == live_.end()) return;
  if (it->second.cat == Category::streaming_core) {
    current_streaming_ -= words;
    if (it->second.size_class == SizeClass::n_quadratic) {
      current_n_quadratic_ -= words;
    } else {
      current_m_sketch_ -= words;
    }
  } else {
    current_oracle_ -= words;
  }
  live_.erase(it);
}

}  // namespace sdps
