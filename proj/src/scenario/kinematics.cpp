// SPDX-License-Identifier: Apache-2.0
#include "hst/scenario/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hst::scenario {

SpeedProfile::SpeedProfile(std::vector<SpeedPhase> phases) : phases_(std::move(phases)) {
  if (phases_.empty()) throw std::invalid_argument("speed profile needs at least one phase");
  double t = 0.0, s = 0.0, v = 0.0;
  for (const auto& phase : phases_) {
    if (phase.target_speed < 0.0 || phase.target_speed > kMaxTrainSpeed + 1e-9) {
      throw std::invalid_argument("phase target speed outside [0, 500 km/h]");
    }
    if (phase.hold_s < 0.0) throw std::invalid_argument("negative hold time");
    const double dv = phase.target_speed - v;
    if (dv != 0.0) {
      if (!(phase.acceleration > 0.0)) throw std::invalid_argument("speed change needs positive acceleration");
      const double a = std::copysign(phase.acceleration, dv);
      const double dt = dv / a;
      const double ds = v * dt + 0.5 * a * dt * dt;
      pieces_.push_back({t, t + dt, s, s + ds, v, a});
      t += dt;
      s += ds;
      v = phase.target_speed;
    }
    if (phase.hold_s > 0.0) {
      pieces_.push_back({t, t + phase.hold_s, s, s + v * phase.hold_s, v, 0.0});
      t += phase.hold_s;
      s += v * phase.hold_s;
    }
  }
  if (v != 0.0) throw std::invalid_argument("speed profile must end at rest");
  if (pieces_.empty()) throw std::invalid_argument("speed profile never moves");
}

SpeedProfile SpeedProfile::journey(double length_m, const JourneyShape& shape) {
  if (!(length_m > 0.0)) throw std::invalid_argument("journey length must be positive");
  if (!(shape.slow_speed > 0.0 && shape.slow_speed < shape.max_speed)) {
    throw std::invalid_argument("slow speed must lie between 0 and max speed");
  }
  const double scale = length_m / shape.reference_length_m;
  const double a = shape.acceleration / scale;
  const double cruise = shape.cruise_s * scale;
  const double vmax = shape.max_speed;
  const double vslow = shape.slow_speed;
  const double ramp_full = vmax * vmax / (2.0 * a);
  const double ramp_slow = (vmax * vmax - vslow * vslow) / (2.0 * a);
  const double committed = 2.0 * ramp_full + 2.0 * ramp_slow + vmax * cruise;
  const double remaining = length_m - committed;
  if (remaining < 0.0) throw std::invalid_argument("journey shape does not fit the track length");
  return SpeedProfile({
      {vmax, a, cruise},
      {vslow, a, 0.0},
      {vmax, a, remaining / vmax},
      {0.0, a, 0.0},
  });
}

const SpeedProfile::Piece& SpeedProfile::piece_at(double t) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                             [](double value, const Piece& p) { return value < p.t1; });
  if (it == pieces_.end()) return pieces_.back();
  return *it;
}

double SpeedProfile::speed_at(double t) const {
  const Piece& p = piece_at(t);
  return std::max(0.0, p.v0 + p.a * (std::min(t, p.t1) - p.t0));
}

double SpeedProfile::acceleration_at(double t) const { return piece_at(t).a; }

double SpeedProfile::arc_at(double t) const {
  const Piece& p = piece_at(t);
  const double dt = std::min(t, p.t1) - p.t0;
  return p.s0 + p.v0 * dt + 0.5 * p.a * dt * dt;
}

TrainState train_state_at(const Track& track, const SpeedProfile& profile, double t, double start_arc) {
  if (!(t >= 0.0) || t > profile.duration()) throw std::out_of_range("time outside the journey");
  const double arc = start_arc + profile.arc_at(t);
  if (arc > track.length() + 1e-6) throw std::out_of_range("journey runs past the end of the track");
  TrainState state;
  state.time = t;
  state.arc = arc;
  state.speed = profile.speed_at(t);
  state.heading = track.heading_at(arc);
  state.position = track.position_at(arc);
  state.velocity = Vec2::from_polar(state.speed, state.heading);
  return state;
}

}  // namespace hst::scenario
