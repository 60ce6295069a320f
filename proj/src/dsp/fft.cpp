// SPDX-License-Identifier: Apache-2.0
#include "hst/dsp/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hst::dsp {
namespace {

struct Plans {
  fftw_plan forward;
  fftw_plan inverse;
};

// The planner is not thread safe; only execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

Plans plans_for(std::size_t n) {
  static std::map<std::size_t, Plans> cache;
  std::lock_guard lock(planner_mutex());
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  std::vector<fftw_complex> a(n), b(n);
  const int size = static_cast<int>(n);
  Plans p{fftw_plan_dft_1d(size, a.data(), b.data(), FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED),
          fftw_plan_dft_1d(size, a.data(), b.data(), FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED)};
  if (p.forward == nullptr || p.inverse == nullptr) throw std::runtime_error("FFTW planning failed");
  cache.emplace(n, p);
  return p;
}

fftw_complex* as_fftw(const cplx* p) {
  // std::complex<double> is layout-compatible with fftw_complex.
  return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p));
}

void check_sizes(std::size_t n, std::size_t in, std::size_t out) {
  if (in != n || out != n) throw std::invalid_argument("FFT buffer size mismatch");
}

}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("FFT size must be positive");
  const Plans p = plans_for(n);
  forward_plan_ = p.forward;
  inverse_plan_ = p.inverse;
}

void Fft::forward(std::span<const cplx> in, std::span<cplx> out) const {
  check_sizes(n_, in.size(), out.size());
  if (in.data() == out.data()) {
    // Plans are out-of-place.
    const std::vector<cplx> copy(in.begin(), in.end());
    fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(copy.data()), as_fftw(out.data()));
    return;
  }
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(in.data()), as_fftw(out.data()));
}

void Fft::inverse(std::span<const cplx> in, std::span<cplx> out) const {
  check_sizes(n_, in.size(), out.size());
  if (in.data() == out.data()) {
    const std::vector<cplx> copy(in.begin(), in.end());
    fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_), as_fftw(copy.data()), as_fftw(out.data()));
  } else {
    fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_), as_fftw(in.data()), as_fftw(out.data()));
  }
  const double s = 1.0 / static_cast<double>(n_);
  for (auto& x : out) x *= s;
}

}  // namespace hst::dsp
