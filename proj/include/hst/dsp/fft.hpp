// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace hst::dsp {

using cplx = std::complex<double>;

// Thin wrapper over FFTW plans. Plans are cached per size and shared between
// threads; execution is reentrant.
class Fft {
 public:
  explicit Fft(std::size_t n);

  std::size_t size() const { return n_; }
  // Unnormalized forward transform, X[k] = sum x[n] exp(-j 2 pi k n / N).
  void forward(std::span<const cplx> in, std::span<cplx> out) const;
  // Inverse scaled by 1/N, so inverse(forward(x)) == x.
  void inverse(std::span<const cplx> in, std::span<cplx> out) const;

 private:
  std::size_t n_;
  void* forward_plan_;
  void* inverse_plan_;
};

// Bin index k in [0, N) to signed frequency index in [-N/2, N/2).
inline long signed_bin(std::size_t k, std::size_t n) {
  const auto ki = static_cast<long>(k);
  const auto ni = static_cast<long>(n);
  return ki < ni / 2 ? ki : ki - ni;
}

inline std::size_t bin_of(long signed_index, std::size_t n) {
  const auto ni = static_cast<long>(n);
  return static_cast<std::size_t>(((signed_index % ni) + ni) % ni);
}

}  // namespace hst::dsp
