// SPDX-License-Identifier: Apache-2.0
#include "hst/kernels/kernels.hpp"

namespace hst::kernels::scalar {

// Written out component-wise so that the reference does not depend on the
// library's complex operator semantics (inf/nan recovery in operator/).

void multiply(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = {ar * br - ai * bi, ar * bi + ai * br};
  }
}

void multiply_accumulate(const cplx* a, const cplx* b, cplx* acc, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    acc[i] = {acc[i].real() + (ar * br - ai * bi), acc[i].imag() + (ar * bi + ai * br)};
  }
}

void multiply_conj(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = {ar * br + ai * bi, ar * bi - ai * br};
  }
}

void divide(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    const double inv = 1.0 / (br * br + bi * bi);
    out[i] = {(ar * br + ai * bi) * inv, (ai * br - ar * bi) * inv};
  }
}

void scale(const cplx* a, double s, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = {a[i].real() * s, a[i].imag() * s};
}

cplx dot_conj(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

double squared_distance(const cplx* a, const cplx* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dr = a[i].real() - b[i].real();
    const double di = a[i].imag() - b[i].imag();
    sum += dr * dr + di * di;
  }
  return sum;
}

double energy(const cplx* a, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  return sum;
}

}  // namespace hst::kernels::scalar
