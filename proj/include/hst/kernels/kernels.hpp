// SPDX-License-Identifier: Apache-2.0
#pragma once

// Complex-vector inner loops used by the OFDM link and the correlation-based
// TOA estimator. Every kernel has a scalar reference implementation; an
// AVX2/FMA variant is selected at runtime when the CPU supports it.
//
// Set HST_KERNELS=scalar in the environment to force the reference path.

#include <complex>
#include <span>
#include <string_view>

namespace hst::kernels {

using cplx = std::complex<double>;

enum class Isa { kScalar, kAvx2 };

Isa active_isa();
bool isa_available(Isa isa);
// Overrides the runtime selection. Throws std::invalid_argument when the ISA
// is not available on this machine.
void force_isa(Isa isa);
std::string_view isa_name(Isa isa);

// out[i] = a[i] * b[i]
void multiply(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out);
// acc[i] += a[i] * b[i]
void multiply_accumulate(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> acc);
// out[i] = conj(a[i]) * b[i]
void multiply_conj(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out);
// out[i] = a[i] / b[i]
void divide(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out);
// out[i] = a[i] * s
void scale(std::span<const cplx> a, double s, std::span<cplx> out);
// sum conj(a[i]) * b[i]
cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b);
// sum |a[i] - b[i]|^2
double squared_distance(std::span<const cplx> a, std::span<const cplx> b);
// sum |a[i]|^2
double energy(std::span<const cplx> a);

// Direct entry points, used by the equivalence tests.
namespace scalar {
void multiply(const cplx* a, const cplx* b, cplx* out, std::size_t n);
void multiply_accumulate(const cplx* a, const cplx* b, cplx* acc, std::size_t n);
void multiply_conj(const cplx* a, const cplx* b, cplx* out, std::size_t n);
void divide(const cplx* a, const cplx* b, cplx* out, std::size_t n);
void scale(const cplx* a, double s, cplx* out, std::size_t n);
cplx dot_conj(const cplx* a, const cplx* b, std::size_t n);
double squared_distance(const cplx* a, const cplx* b, std::size_t n);
double energy(const cplx* a, std::size_t n);
}  // namespace scalar

namespace avx2 {
void multiply(const cplx* a, const cplx* b, cplx* out, std::size_t n);
void multiply_accumulate(const cplx* a, const cplx* b, cplx* acc, std::size_t n);
void multiply_conj(const cplx* a, const cplx* b, cplx* out, std::size_t n);
void divide(const cplx* a, const cplx* b, cplx* out, std::size_t n);
void scale(const cplx* a, double s, cplx* out, std::size_t n);
cplx dot_conj(const cplx* a, const cplx* b, std::size_t n);
double squared_distance(const cplx* a, const cplx* b, std::size_t n);
double energy(const cplx* a, std::size_t n);
}  // namespace avx2

}  // namespace hst::kernels
