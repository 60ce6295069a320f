// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <span>
#include <vector>

#include "hst/common/geometry.hpp"

namespace hst::link {

// Network-side view of one downlink: Doppler at the train and propagation
// delay, computed from the estimated train state.
struct LinkEstimate {
  double doppler_hz = 0.0;
  double delay_s = 0.0;
};

LinkEstimate estimate_link(const Vec2& train_position, const Vec2& train_velocity, const Vec2& rrh_position,
                           double carrier_hz);

// Transmit offsets that align all serving RRHs with the latest-arriving one:
// offset_a = max(delay) - delay_a, so every path arrives at max(delay).
std::vector<double> timing_offsets(std::span<const LinkEstimate> links);

// Shifts the waveform by -doppler and advances it by advance_s (fractional
// delay applied as a frequency-domain phase ramp, so the buffer is treated
// as periodic).
std::vector<std::complex<double>> precompensate(std::span<const std::complex<double>> waveform, double sample_rate,
                                                double doppler_hz, double advance_s);

// What is left after precompensation with `estimate` on a link whose true
// parameters are `truth`.
struct LinkResidual {
  double doppler_hz = 0.0;
  double delay_s = 0.0;
};
inline LinkResidual residual(const LinkEstimate& truth, const LinkEstimate& estimate) {
  return {truth.doppler_hz - estimate.doppler_hz, truth.delay_s - estimate.delay_s};
}

}  // namespace hst::link
