// SPDX-License-Identifier: Apache-2.0
#include "hst/beam/beam.hpp"

#include <algorithm>
#include <cmath>

namespace hst::beam {

BeamAssignment point_beam(const scenario::Rrh& rrh, const Vec2& predicted_position, double epoch_time) {
  BeamAssignment a;
  a.rrh_id = rrh.id;
  a.epoch_time = epoch_time;
  const double bearing = (predicted_position - rrh.position).bearing();
  const double off0 = angle_between(bearing, rrh.boresight[0]);
  const double off1 = angle_between(bearing, rrh.boresight[1]);
  a.panel_index = off1 < off0 - 1e-12 ? 1 : 0;
  const double boresight = rrh.boresight[static_cast<std::size_t>(a.panel_index)];
  const double rel = wrap_angle(bearing - boresight);
  if (std::abs(rel) > kPanelFieldOfView) {
    a.clamped = true;
    a.steer_azimuth = wrap_angle(boresight + std::copysign(kPanelFieldOfView, rel));
  } else {
    a.steer_azimuth = bearing;
  }
  return a;
}

double beam_direction_error_deg(const BeamAssignment& assignment, const scenario::Rrh& rrh,
                                const Vec2& true_position) {
  const double truth = (true_position - rrh.position).bearing();
  return rad2deg(angle_between(assignment.steer_azimuth, truth));
}

double pointing_error_bound_rad(double position_error, double range) {
  if (position_error >= range) return kPi;
  return std::asin(position_error / range);
}

double rrh_gain_db(const scenario::Rrh& rrh, const BeamAssignment& assignment, const Vec2& train_position) {
  const double boresight = rrh.boresight[static_cast<std::size_t>(assignment.panel_index)];
  return scenario::panel_gain_db(rrh.array, boresight, assignment.steer_azimuth,
                                 (train_position - rrh.position).bearing());
}

int select_train_beam(std::span<const SweepCandidate> sweep, int previous) {
  if (sweep.empty()) return previous;
  const auto best = std::max_element(sweep.begin(), sweep.end(), [](const auto& a, const auto& b) {
    return a.received_power_dbm < b.received_power_dbm;
  });
  return best->beam_index;
}

int select_fixed_beam(double heading, const Vec2& train_position, const Vec2& serving_rrh) {
  const double bearing = (serving_rrh - train_position).bearing();
  return angle_between(bearing, heading) <= kPi / 2.0 ? 0 : 1;
}

}  // namespace hst::beam
