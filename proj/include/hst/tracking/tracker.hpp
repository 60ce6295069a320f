// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>

#include "hst/tracking/ekf.hpp"

namespace hst::tracking {

struct TrackerConfig {
  ProcessModel process;
  InitConfig init;
  double gate_probability = 0.997;
  int reinit_after = 5;  // consecutive gated or failed updates
  // Multiplies the batch covariance; the noise-free debug mode uses a tiny value.
  double measurement_noise_scale = 1.0;
};

enum class TrackOutcome { kInitialized, kUpdated, kGated, kFailed, kReinitialized };

// Per-train filter state machine: initialize from the first usable batch,
// then predict/update each epoch and re-initialize after a run of failures.
class Tracker {
 public:
  explicit Tracker(TrackerConfig config = {}) : config_(config) {}

  TrackOutcome process(const measurements::TdoaBatch& batch, std::span<const Vec2> anchors);

  bool initialized() const { return estimate_.has_value(); }
  const EkfEstimate& estimate() const { return *estimate_; }
  // Position predicted to time t from the latest estimate.
  Vec2 predict(double t) const;
  int consecutive_failures() const { return failures_; }
  int reinitializations() const { return reinits_; }
  int total_failures() const { return total_failures_; }

 private:
  bool try_init(const measurements::TdoaBatch& batch, std::span<const Vec2> anchors, const Vec2& velocity);

  TrackerConfig config_;
  std::optional<EkfEstimate> estimate_;
  int failures_ = 0;
  int reinits_ = 0;
  int total_failures_ = 0;
};

}  // namespace hst::tracking
