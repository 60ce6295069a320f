// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>

#include "hst/common/geometry.hpp"
#include "hst/scenario/antenna.hpp"
#include "hst/scenario/deployment.hpp"

namespace hst::beam {

inline constexpr double kPanelFieldOfView = kPi / 3.0;  // +-60 degrees

struct BeamAssignment {
  int rrh_id = 0;
  int panel_index = 0;
  double steer_azimuth = 0.0;  // rad, world frame
  int train_beam_index = -1;
  double epoch_time = 0.0;
  bool clamped = false;  // target was outside the panel field of view
};

// Steers the RRH toward the predicted train position with the panel whose
// boresight is closest to the bearing (ties go to panel 0).
BeamAssignment point_beam(const scenario::Rrh& rrh, const Vec2& predicted_position, double epoch_time = 0.0);

// Angle between the steered azimuth and the true bearing, in degrees.
double beam_direction_error_deg(const BeamAssignment& assignment, const scenario::Rrh& rrh,
                                const Vec2& true_position);

// Worst-case pointing error for a position error e at true range r. Lateral
// errors attain it only in the limit; the exact bound for |e| < r is asin(e/r).
double pointing_error_bound_rad(double position_error, double range);

// Gain of the RRH's steered panel toward the train.
double rrh_gain_db(const scenario::Rrh& rrh, const BeamAssignment& assignment, const Vec2& train_position);

enum class TrainBeamMode { kSweep, kFixed };

struct SweepCandidate {
  int beam_index = 0;
  double received_power_dbm = 0.0;
};

// Sweep: index of the strongest candidate, or `previous` when the sweep is
// empty. Fixed: nose beam (0) when the serving RRH is within +-90 degrees of
// the heading, tail beam (1) otherwise.
int select_train_beam(std::span<const SweepCandidate> sweep, int previous);
int select_fixed_beam(double heading, const Vec2& train_position, const Vec2& serving_rrh);

}  // namespace hst::beam
