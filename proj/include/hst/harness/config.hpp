// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hst/link/link_sim.hpp"
#include "hst/measurements/srs.hpp"
#include "hst/scenario/antenna.hpp"
#include "hst/scenario/kinematics.hpp"
#include "hst/scenario/track.hpp"
#include "hst/tracking/tracker.hpp"

namespace hst::harness {

struct ScenarioConfig {
  double track_length_m = 20000.0;
  std::uint64_t track_seed = 7;
  std::string curvature = "random";  // straight | constant | random
  double max_curvature = 5e-5;       // 1/m
  double curvature_correlation_m = 5000.0;
  double inter_site_distance_m = 580.0;
  double lateral_offset_m = 5.0;
  scenario::ArrayGeometry rrh_array{8, 4, 0.5};
  scenario::ArrayGeometry train_array{4, 4, 0.5};
  double max_speed_kmh = 500.0;
  double slow_speed_kmh = 290.0;
  double acceleration_mps2 = 0.5;
  double cruise_s = 240.0;
  double reference_length_m = 100000.0;
};

struct ChannelConfig {
  double carrier_hz = 30e9;
  double tx_power_dbm = 30.0;
  double rrh_noise_figure_db = 7.0;
  double shadowing_sigma_db = 4.0;
  double shadowing_decorrelation_m = 10.0;
  bool shadowing_enabled = true;
  double k_factor_db = 13.3;
  double delay_spread_s = 100e-9;
};

struct MeasurementConfig {
  double bandwidth_hz = 400e6;
  double srs_interval_s = 0.01;
  int rrh_count = 5;
  double snr_floor_db = -5.0;
  double snr_estimate_error_db = 1.0;
  bool noise_enabled = true;
  double clock_walk_s_per_sqrt_s = 1e-9;  // train clock offset random walk
};

struct TrackingConfig {
  double q = 1.0;
  double gate_probability = 0.997;
  int reinit_after = 5;
};

struct BeamConfig {
  std::string train_mode = "sweep";  // sweep | fixed
  double sweep_span_deg = 60.0;
};

struct LinkErrorConfig {
  std::string source = "campaign";  // ideal | gaussian | campaign
  double position_sigma_m = 0.1;
  double velocity_sigma_mps = 0.3;
};

struct LinkSection {
  int mcs = 24;
  int prbs = 264;
  std::vector<double> snr_db{0, 4, 8, 12, 16, 20, 24, 28, 32, 36, 40};
  std::vector<double> distances_m{10.0, 290.0};
  std::vector<std::string> modes{"ideal", "none", "cpe", "ici"};
  int realizations = 200;
  int ici_half_width = 1;
  double speed_kmh = 500.0;
  bool phase_noise_enabled = true;
  link::PhaseNoiseMask phase_noise;
  LinkErrorConfig errors;
};

struct CampaignConfig {
  ScenarioConfig scenario;
  ChannelConfig channel;
  MeasurementConfig measurement;
  TrackingConfig tracking;
  BeamConfig beam;
  LinkSection link;
  int replications = 10;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
};

// The configuration file is a JSON tree. Missing keys take their defaults;
// unknown keys and type mismatches raise ConfigError.
CampaignConfig parse_config(std::string_view text, std::span<const std::string> overrides = {});
CampaignConfig load_config(const std::filesystem::path& path, std::span<const std::string> overrides = {});
// Applies "a.b.c=value" overrides; value is read as JSON when it parses,
// otherwise as a string.
CampaignConfig with_overrides(const CampaignConfig& config, std::span<const std::string> overrides);
std::string to_json_text(const CampaignConfig& config);

// Range checks beyond the type checks done while parsing.
void validate(const CampaignConfig& config);

// Views used by the campaigns.
scenario::CurvatureSpec curvature_spec(const ScenarioConfig& s);
scenario::JourneyShape journey_shape(const ScenarioConfig& s);
measurements::SrsConfig srs_config(const CampaignConfig& c);
tracking::TrackerConfig tracker_config(const CampaignConfig& c);
scenario::TrainCodebook train_codebook(const CampaignConfig& c);
link::LinkConfig link_config(const CampaignConfig& c);

}  // namespace hst::harness
