// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hst::measurements {

// Flat-spectrum reference signal occupying |f| < B/2, sampled at
// oversampling * B. Stored in the frequency domain, DFT bin order.
struct ReferenceSignal {
  double bandwidth_hz = 400e6;
  double sample_rate_hz = 800e6;
  std::vector<std::complex<double>> spectrum;
  std::vector<double> frequency;  // Hz per bin, zero outside the band
  std::vector<bool> in_band;

  std::size_t size() const { return spectrum.size(); }
  double energy() const;  // sum |s[n]|^2 over time samples
};

ReferenceSignal make_reference_signal(double bandwidth_hz, std::size_t n_samples, int oversampling,
                                      std::uint64_t seed);

// Cross-correlation delay estimator: coarse peak of the upsampled correlation
// within +-window_s of the prior, then Newton steps on |R(tau)|^2 evaluated
// exactly from the spectrum.
double estimate_delay(const ReferenceSignal& ref, std::span<const std::complex<double>> received_spectrum,
                      double prior_delay_s, double window_s);

struct CrlbTrial {
  double snr_db = 0.0;
  double crlb_std_s = 0.0;
  double empirical_std_s = 0.0;
  double bias_s = 0.0;
  int trials = 0;
};

// Monte-Carlo check of the estimator against the CRLB. SNR is the total
// signal energy over the per-sample noise variance.
CrlbTrial validate_crlb(double bandwidth_hz, double snr_db, int trials, std::uint64_t seed,
                        std::size_t n_samples = 1024);

}  // namespace hst::measurements
