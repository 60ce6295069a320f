// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace hst::link {

// Multi-pole/zero phase-noise mask
//   L(f) = L0 * prod(1 + (f/fz)^2) / prod(1 + (f/fp)^2)   [dBc/Hz for L0]
// Defaults follow the 3GPP 30 GHz oscillator model.
struct PhaseNoiseMask {
  double level_dbc_hz = -79.4;
  std::vector<double> zeros_hz{1.8e6, 2.2e6, 40e6};
  std::vector<double> poles_hz{0.1e6, 0.2e6, 8e6};

  bool enabled() const;
  double psd(double f_hz) const;     // linear, rad^2/Hz, two-sided
  double psd_db(double f_hz) const;  // dBc/Hz
};

// Phase samples (rad) at the given rate. Gaussian process synthesized in the
// frequency domain over twice the requested length to avoid wrap-around
// correlation. A -inf level gives an all-zero trace.
std::vector<double> phase_noise_trace(const PhaseNoiseMask& mask, std::size_t n_samples, double sample_rate,
                                      std::uint64_t seed);

}  // namespace hst::link
