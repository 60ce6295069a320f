// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hst/beam/beam.hpp"
#include "hst/channel/shadowing.hpp"
#include "hst/common/time.hpp"
#include "hst/scenario/antenna.hpp"
#include "hst/scenario/deployment.hpp"
#include "hst/scenario/kinematics.hpp"

namespace hst::measurements {

// Delay CRLB for a flat spectrum of width B: 1 / (8 pi^2 (B^2/12) SNR).
// Throws std::domain_error for non-positive inputs.
double toa_variance(double snr_linear, double bandwidth_hz);

struct ToaObservation {
  int rrh_id = 0;
  Femtoseconds toa{0};     // includes the train clock offset
  double snr_db = 0.0;     // true post-beamforming SNR
  double snr_estimate_db = 0.0;
  int train_beam_index = 0;
  double variance = 0.0;   // s^2, from the estimated SNR

  double toa_seconds() const { return to_seconds(toa); }
};

struct SrsConfig {
  double carrier_hz = 30e9;
  double bandwidth_hz = 400e6;
  double tx_power_dbm = 30.0;
  double rrh_noise_figure_db = 7.0;
  double snr_floor_db = -5.0;
  double snr_estimate_error_db = 1.0;
  bool noise_enabled = true;
  channel::ShadowingParams shadowing;
};

struct SweepResult {
  std::vector<ToaObservation> observations;
  // Per-RRH received power of every codebook beam, for beam selection.
  std::vector<std::vector<beam::SweepCandidate>> candidates;
};

// One SRS sweep epoch. `assignments` are the RRH receive beams (one per
// participating RRH). Shadowing is keyed by link_seed so it stays spatially
// consistent along the journey; epoch_seed drives the timing noise.
SweepResult sweep_srs(const scenario::TrainState& state, const scenario::Deployment& deployment,
                      std::span<const beam::BeamAssignment> assignments,
                      const scenario::TrainCodebook& codebook, Femtoseconds clock_offset,
                      const SrsConfig& config, std::uint64_t link_seed, std::uint64_t epoch_seed);

struct TdoaPair {
  int rrh_id = 0;
  Femtoseconds tdoa{0};  // toa_i - toa_ref
  double variance = 0.0;

  double tdoa_seconds() const { return to_seconds(tdoa); }
};

struct TdoaBatch {
  double epoch_time = 0.0;
  int reference_rrh_id = 0;
  double reference_variance = 0.0;
  std::vector<TdoaPair> pairs;
  Eigen::MatrixXd covariance;  // s^2
};

// Reference is the highest-SNR observation. Throws InsufficientAnchors for
// fewer than three observations.
TdoaBatch form_tdoa(std::span<const ToaObservation> observations, double epoch_time = 0.0);

}  // namespace hst::measurements
