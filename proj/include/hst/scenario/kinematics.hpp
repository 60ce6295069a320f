// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "hst/common/geometry.hpp"
#include "hst/scenario/track.hpp"

namespace hst::scenario {

inline constexpr double kMaxTrainSpeed = 500.0 / 3.6;  // m/s

// Ramp from the current speed to target_speed at |acceleration|, then hold the
// target speed for hold_s seconds.
struct SpeedPhase {
  double target_speed = 0.0;   // m/s
  double acceleration = 0.5;   // m/s^2, magnitude
  double hold_s = 0.0;
};

// Shape of the reference journey: full-power start, cruise at top speed, a
// slowdown, re-acceleration and a stop at the end of the track.
struct JourneyShape {
  double max_speed = kMaxTrainSpeed;
  double slow_speed = 290.0 / 3.6;
  double acceleration = 0.5;
  double cruise_s = 240.0;
  // Track length the acceleration and cruise time refer to. Shorter tracks
  // replay the same speed-versus-distance curve on a compressed time axis.
  double reference_length_m = 100000.0;
};

class SpeedProfile {
 public:
  // Starts at rest; the last phase must bring the train back to rest.
  explicit SpeedProfile(std::vector<SpeedPhase> phases);

  // Speed profile covering exactly length_m with the given shape.
  static SpeedProfile journey(double length_m, const JourneyShape& shape = {});

  double duration() const { return pieces_.empty() ? 0.0 : pieces_.back().t1; }
  double distance() const { return pieces_.empty() ? 0.0 : pieces_.back().s1; }
  double speed_at(double t) const;
  double acceleration_at(double t) const;
  double arc_at(double t) const;
  std::span<const SpeedPhase> phases() const { return phases_; }

 private:
  struct Piece {
    double t0, t1;
    double s0, s1;
    double v0;
    double a;
  };
  const Piece& piece_at(double t) const;

  std::vector<SpeedPhase> phases_;
  std::vector<Piece> pieces_;
};

struct TrainState {
  double time = 0.0;       // s
  double arc = 0.0;        // m along the track
  Vec2 position;           // m
  Vec2 velocity;           // m/s
  double heading = 0.0;    // rad
  double speed = 0.0;      // m/s
};

// The journey starts at along-track coordinate start_arc. Throws
// std::out_of_range outside [0, duration] or beyond the end of the track.
TrainState train_state_at(const Track& track, const SpeedProfile& profile, double t, double start_arc = 0.0);

}  // namespace hst::scenario
