// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "hst/common/geometry.hpp"
#include "hst/link/compensation.hpp"
#include "hst/link/phase_noise.hpp"
#include "hst/scenario/antenna.hpp"
#include "hst/scenario/kinematics.hpp"

namespace hst::link {

// Signed errors of the network's train-state estimate.
struct StateError {
  Vec2 position;
  Vec2 velocity;
};

// Source of estimate errors for the precompensation and beam steering.
struct ErrorStatistics {
  enum class Kind { kIdeal, kGaussian, kEmpirical };
  Kind kind = Kind::kGaussian;
  double position_sigma_m = 0.1;     // per axis
  double velocity_sigma_mps = 0.3;   // per axis
  std::vector<StateError> samples;   // kEmpirical

  static ErrorStatistics ideal() { return {Kind::kIdeal, 0.0, 0.0, {}}; }
  StateError draw(std::uint64_t seed) const;
};

struct LinkConfig {
  int mcs = 24;
  int prbs = 264;
  std::vector<double> snr_db{0, 4, 8, 12, 16, 20, 24, 28, 32, 36, 40};
  std::vector<double> distances_m{10.0, 290.0};
  std::vector<CompensationMode> modes{CompensationMode::kIdeal, CompensationMode::kNone, CompensationMode::kCpe,
                                      CompensationMode::kIci};
  int realizations = 200;
  int ici_half_width = 1;
  bool phase_noise_enabled = true;
  PhaseNoiseMask phase_noise;
  double carrier_hz = 30e9;
  double speed_mps = scenario::kMaxTrainSpeed;
  double inter_site_distance = 580.0;
  double lateral_offset = 5.0;
  double k_factor_db = 13.3;
  double delay_spread_s = 100e-9;
  scenario::ArrayGeometry rrh_array{8, 4, 0.5};
  scenario::ArrayGeometry train_array{4, 4, 0.5};
  double train_sweep_span_rad = kPi / 3.0;
};

struct LinkRealization {
  // throughput_bps[snr][mode], indices as in the config.
  std::vector<std::vector<double>> throughput_bps;
  std::vector<double> residual_doppler_hz;  // per serving RRH
  std::vector<double> residual_delay_s;
  int ici_fallbacks = 0;
  bool skew_exceeds_cp = false;
};

// One SFN slot with the train `distance_m` past the first of two serving RRHs,
// moving toward the second one. Pure function of its arguments.
LinkRealization simulate_link_realization(const LinkConfig& config, double distance_m, const StateError& error,
                                          std::uint64_t seed);

}  // namespace hst::link
