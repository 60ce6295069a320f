// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace hst::channel {

struct Tap {
  double delay = 0.0;  // s
  std::complex<double> gain;
};

struct ChannelResponse {
  std::vector<Tap> taps;  // taps[0] is the LOS component
  double k_factor_db = 13.3;
  // RMS delay spread of the mean power-delay profile.
  double rms_delay_spread_s = 100e-9;

  double total_power() const;
  // H(f) = sum g exp(-j 2 pi f (tau - reference_delay)).
  std::complex<double> frequency_response(double f_hz, double reference_delay = 0.0) const;
  void frequency_response(std::span<const double> f_hz, double reference_delay,
                          std::span<std::complex<double>> out) const;
};

// K above this is treated as a pure LOS channel.
inline constexpr double kPureLosKDb = 60.0;
inline constexpr int kDiffuseTaps = 24;

// Mean power-delay profile (delay offsets after the LOS tap and powers summing
// to one) for the given K factor and RMS delay spread.
struct PowerDelayProfile {
  std::vector<double> delay;
  std::vector<double> power;
};
PowerDelayProfile ricean_profile(double k_factor_db, double delay_spread_s);

double rms_delay_spread(std::span<const double> delay, std::span<const double> power);

// LOS tap at los_delay_s with random phase plus Rayleigh diffuse taps drawn
// from ricean_profile, scaled so LOS/diffuse = K exactly and the total is one.
ChannelResponse ricean_channel(double los_delay_s, double k_factor_db, double delay_spread_s,
                               std::uint64_t seed);
// Same, with a given LOS phase (e.g. -2 pi d / lambda from the geometry).
ChannelResponse ricean_channel(double los_delay_s, double los_phase_rad, double k_factor_db, double delay_spread_s,
                               std::uint64_t seed);

}  // namespace hst::channel
