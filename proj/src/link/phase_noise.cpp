// SPDX-License-Identifier: Apache-2.0
#include "hst/link/phase_noise.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "hst/common/random.hpp"
#include "hst/dsp/fft.hpp"

namespace hst::link {

bool PhaseNoiseMask::enabled() const { return std::isfinite(level_dbc_hz); }

double PhaseNoiseMask::psd(double f_hz) const {
  if (!enabled()) return 0.0;
  double v = std::pow(10.0, level_dbc_hz / 10.0);
  for (double z : zeros_hz) v *= 1.0 + (f_hz / z) * (f_hz / z);
  for (double p : poles_hz) v /= 1.0 + (f_hz / p) * (f_hz / p);
  return v;
}

double PhaseNoiseMask::psd_db(double f_hz) const { return 10.0 * std::log10(psd(f_hz)); }

std::vector<double> phase_noise_trace(const PhaseNoiseMask& mask, std::size_t n_samples, double sample_rate,
                                      std::uint64_t seed) {
  if (n_samples == 0) throw std::invalid_argument("phase noise trace needs samples");
  if (!(sample_rate > 0.0)) throw std::invalid_argument("sample rate must be positive");
  std::vector<double> out(n_samples, 0.0);
  if (!mask.enabled()) return out;

  const std::size_t n = std::bit_ceil(2 * n_samples);
  const double df = sample_rate / static_cast<double>(n);
  Rng rng(derive_seed(seed, 0x706eULL));
  std::vector<std::complex<double>> spec(n), time(n);
  // Bin 0 stays empty: the process is zero-mean.
  for (std::size_t k = 1; k < n; ++k) {
    const double f = static_cast<double>(dsp::signed_bin(k, n)) * df;
    spec[k] = std::sqrt(mask.psd(f) * df) * complex_normal(rng);
  }
  dsp::Fft(n).inverse(spec, time);
  // inverse() divides by n; the synthesis sum has no such factor. The real
  // part of a circular process carries half its power.
  const double scale = static_cast<double>(n) * std::sqrt(2.0);
  for (std::size_t i = 0; i < n_samples; ++i) out[i] = scale * time[i].real();
  return out;
}

}  // namespace hst::link
