// SPDX-License-Identifier: Apache-2.0
#include "hst/link/precompensation.hpp"

#include <algorithm>
#include <cmath>

#include "hst/channel/propagation.hpp"
#include "hst/dsp/fft.hpp"

namespace hst::link {

LinkEstimate estimate_link(const Vec2& train_position, const Vec2& train_velocity, const Vec2& rrh_position,
                           double carrier_hz) {
  const Vec2 to_rrh = rrh_position - train_position;
  return {channel::doppler_shift_hz(train_velocity, to_rrh.normalized(), carrier_hz), to_rrh.norm() / kSpeedOfLight};
}

std::vector<double> timing_offsets(std::span<const LinkEstimate> links) {
  double latest = 0.0;
  for (const auto& l : links) latest = std::max(latest, l.delay_s);
  std::vector<double> out;
  for (const auto& l : links) out.push_back(latest - l.delay_s);
  return out;
}

std::vector<std::complex<double>> precompensate(std::span<const std::complex<double>> waveform, double sample_rate,
                                                double doppler_hz, double advance_s) {
  const std::size_t n = waveform.size();
  std::vector<std::complex<double>> spec(n), out(n);
  const dsp::Fft fft(n);
  fft.forward(waveform, spec);
  for (std::size_t k = 0; k < n; ++k) {
    const double f = static_cast<double>(dsp::signed_bin(k, n)) * sample_rate / static_cast<double>(n);
    spec[k] *= std::polar(1.0, 2.0 * kPi * f * advance_s);
  }
  fft.inverse(spec, out);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] *= std::polar(1.0, -2.0 * kPi * doppler_hz * static_cast<double>(i) / sample_rate);
  }
  return out;
}

}  // namespace hst::link
