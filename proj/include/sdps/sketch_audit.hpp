#pragma once

#include <vector>

#include "sdps/hessian.hpp"
#include "sdps/ipm.hpp"

namespace sdps {

struct SketchAuditOptions {
  double eps_h = 0.5;  // quality band [1 - eps_h, 1 + eps_h]
  Index trials = 100;
  std::uint64_t rng_seed = 0;
  std::optional<Index> sketch_size;
  std::optional<double> sketch_delta;
  bool exhaustive = false;  // one trial with the enumerating sampler
};

struct SketchAuditResult {
  Index s = 0;
  double eps_h = 0.0;
  std::vector<SpectralRatio> ratios;
  Index within_band = 0;
};

// Centers the instance once (exact-Hessian mode, deterministic anchor), then
// measures the spectral ratio of sketched versus exact Hessian across sketch
// seeds at that fixed state.
SketchAuditResult audit_sketch_quality(ConstraintStream& stream,
                                       const SdpInstance& instance,
                                       const SketchAuditOptions& options,
                                       SpaceLedger* ledger = nullptr);

}  // namespace sdps
