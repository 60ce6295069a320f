// SPDX-License-Identifier: Apache-2.0
#include "hst/measurements/toa_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hst/common/geometry.hpp"
#include "hst/common/random.hpp"
#include "hst/dsp/fft.hpp"
#include "hst/kernels/kernels.hpp"
#include "hst/measurements/srs.hpp"

namespace hst::measurements {
namespace {

constexpr std::size_t kUpsample = 8;

// R(tau) = sum_k C_k exp(j 2 pi f_k tau) and its first two derivatives.
struct CorrelationAt {
  std::complex<double> r, d1, d2;
};

CorrelationAt correlation_at(std::span<const std::complex<double>> c, std::span<const double> f, double tau) {
  CorrelationAt out{};
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == std::complex<double>{}) continue;
    const double w = 2.0 * kPi * f[k];
    const auto term = c[k] * std::polar(1.0, w * tau);
    out.r += term;
    out.d1 += term * std::complex<double>(0.0, w);
    out.d2 += term * (-w * w);
  }
  return out;
}

}  // namespace

double ReferenceSignal::energy() const {
  // Parseval for the unnormalized DFT.
  return kernels::energy(spectrum) / static_cast<double>(spectrum.size());
}

ReferenceSignal make_reference_signal(double bandwidth_hz, std::size_t n_samples, int oversampling,
                                      std::uint64_t seed) {
  if (!(bandwidth_hz > 0.0) || n_samples == 0 || oversampling < 1) {
    throw std::invalid_argument("invalid reference signal parameters");
  }
  ReferenceSignal s;
  s.bandwidth_hz = bandwidth_hz;
  s.sample_rate_hz = bandwidth_hz * oversampling;
  s.spectrum.assign(n_samples, {0.0, 0.0});
  s.frequency.assign(n_samples, 0.0);
  s.in_band.assign(n_samples, false);
  Rng rng(derive_seed(seed, 0x737273ULL));
  std::uniform_int_distribution<int> qpsk(0, 3);
  const double df = s.sample_rate_hz / static_cast<double>(n_samples);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double f = static_cast<double>(dsp::signed_bin(k, n_samples)) * df;
    if (std::abs(f) >= bandwidth_hz / 2.0) continue;
    s.in_band[k] = true;
    s.frequency[k] = f;
    s.spectrum[k] = std::polar(1.0, kPi / 4.0 + kPi / 2.0 * qpsk(rng));
  }
  return s;
}

double estimate_delay(const ReferenceSignal& ref, std::span<const std::complex<double>> received_spectrum,
                      double prior_delay_s, double window_s) {
  const std::size_t n = ref.size();
  if (received_spectrum.size() != n) throw std::invalid_argument("spectrum size mismatch");

  // Matched filter in the frequency domain; out-of-band bins are zero in ref.
  std::vector<std::complex<double>> c(n);
  kernels::multiply_conj(ref.spectrum, received_spectrum, c);

  // Upsampled correlation by zero-padding the spectrum.
  const std::size_t m = n * kUpsample;
  std::vector<std::complex<double>> padded(m), corr(m);
  for (std::size_t k = 0; k < n; ++k) padded[dsp::bin_of(dsp::signed_bin(k, n), m)] = c[k];
  dsp::Fft(m).inverse(padded, corr);

  const double dt = 1.0 / (ref.sample_rate_hz * kUpsample);
  const auto lo = static_cast<long>(std::floor((prior_delay_s - window_s) / dt));
  const auto hi = static_cast<long>(std::ceil((prior_delay_s + window_s) / dt));
  long best = lo;
  double best_mag = -1.0;
  for (long i = lo; i <= hi; ++i) {
    const double mag = std::norm(corr[dsp::bin_of(i, m)]);
    if (mag > best_mag) {
      best_mag = mag;
      best = i;
    }
  }

  // Newton on g(tau) = |R|^2: g' = 2 Re(conj R R'), g'' = 2 (|R'|^2 + Re(conj R R'')).
  double tau = static_cast<double>(best) * dt;
  for (int it = 0; it < 8; ++it) {
    const CorrelationAt a = correlation_at(c, ref.frequency, tau);
    const double g1 = 2.0 * std::real(std::conj(a.r) * a.d1);
    const double g2 = 2.0 * (std::norm(a.d1) + std::real(std::conj(a.r) * a.d2));
    if (!(g2 < 0.0)) break;
    const double step = std::clamp(-g1 / g2, -dt, dt);
    tau += step;
    if (std::abs(step) < 1e-18) break;
  }
  return tau;
}

CrlbTrial validate_crlb(double bandwidth_hz, double snr_db, int trials, std::uint64_t seed, std::size_t n_samples) {
  if (trials < 2) throw std::invalid_argument("need at least two trials");
  const ReferenceSignal ref = make_reference_signal(bandwidth_hz, n_samples, 2, seed);
  const double energy = ref.energy();
  const double snr = std::pow(10.0, snr_db / 10.0);
  // Per-sample time-domain noise variance; the unnormalized DFT scales it by N.
  const double noise_var = energy / snr;
  const double bin_var = noise_var * static_cast<double>(n_samples);

  CrlbTrial result;
  result.snr_db = snr_db;
  result.trials = trials;
  result.crlb_std_s = std::sqrt(toa_variance(snr, bandwidth_hz));

  Rng rng(derive_seed(seed, 0x6e6f6973ULL));
  std::uniform_real_distribution<double> delay_draw(-0.5, 0.5);
  std::uniform_real_distribution<double> phase_draw(-kPi, kPi);
  const double ts = 1.0 / ref.sample_rate_hz;
  std::vector<std::complex<double>> rx(n_samples);
  double sum = 0.0, sum2 = 0.0;
  for (int t = 0; t < trials; ++t) {
    // Sub-sample true delay and unknown carrier phase.
    const double tau = (20.0 + delay_draw(rng)) * ts;
    const auto phase = std::polar(1.0, phase_draw(rng));
    for (std::size_t k = 0; k < n_samples; ++k) {
      rx[k] = ref.spectrum[k] * phase * std::polar(1.0, -2.0 * kPi * ref.frequency[k] * tau) +
              complex_normal(rng, bin_var);
    }
    const double err = estimate_delay(ref, rx, 20.0 * ts, 2.0 * ts) - tau;
    sum += err;
    sum2 += err * err;
  }
  result.bias_s = sum / trials;
  result.empirical_std_s = std::sqrt(std::max(0.0, sum2 / trials - result.bias_s * result.bias_s));
  return result;
}

}  // namespace hst::measurements
