// SPDX-License-Identifier: Apache-2.0
#include "hst/tracking/tracker.hpp"

#include "hst/common/errors.hpp"

namespace hst::tracking {

bool Tracker::try_init(const measurements::TdoaBatch& batch, std::span<const Vec2> anchors, const Vec2& velocity) {
  try {
    estimate_ = ekf_init(batch, anchors, config_.init, velocity);
    failures_ = 0;
    return true;
  } catch (const InitializationFailed&) {
    return false;
  }
}

TrackOutcome Tracker::process(const measurements::TdoaBatch& batch, std::span<const Vec2> anchors) {
  if (!estimate_) return try_init(batch, anchors, {}) ? TrackOutcome::kInitialized : TrackOutcome::kFailed;

  const EkfEstimate predicted = ekf_predict(*estimate_, batch.epoch_time - estimate_->epoch_time, config_.process);
  bool ok = false;
  try {
    const UpdateResult r = ekf_update(predicted, batch, anchors, config_.gate_probability,
                                      config_.measurement_noise_scale);
    estimate_ = r.estimate;
    ok = !r.gated;
  } catch (const NumericalFailure&) {
    estimate_ = predicted;
  }
  if (ok) {
    failures_ = 0;
    return TrackOutcome::kUpdated;
  }
  ++failures_;
  ++total_failures_;
  if (failures_ < config_.reinit_after) return TrackOutcome::kGated;

  // Keep the velocity: the train does not stop because the filter diverged.
  const Vec2 velocity = estimate_->velocity();
  if (try_init(batch, anchors, velocity)) {
    ++reinits_;
    return TrackOutcome::kReinitialized;
  }
  return TrackOutcome::kFailed;
}

Vec2 Tracker::predict(double t) const { return predict_position(*estimate_, t - estimate_->epoch_time); }

}  // namespace hst::tracking
