// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <cassert>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "hst/kernels/kernels.hpp"

namespace hst::kernels {
namespace {

struct Table {
  void (*multiply)(const cplx*, const cplx*, cplx*, std::size_t);
  void (*multiply_accumulate)(const cplx*, const cplx*, cplx*, std::size_t);
  void (*multiply_conj)(const cplx*, const cplx*, cplx*, std::size_t);
  void (*divide)(const cplx*, const cplx*, cplx*, std::size_t);
  void (*scale)(const cplx*, double, cplx*, std::size_t);
  cplx (*dot_conj)(const cplx*, const cplx*, std::size_t);
  double (*squared_distance)(const cplx*, const cplx*, std::size_t);
  double (*energy)(const cplx*, std::size_t);
};

constexpr Table kScalarTable{scalar::multiply, scalar::multiply_accumulate, scalar::multiply_conj,
                             scalar::divide,   scalar::scale,               scalar::dot_conj,
                             scalar::squared_distance, scalar::energy};

#if defined(HST_HAVE_AVX2_KERNELS)
constexpr Table kAvx2Table{avx2::multiply, avx2::multiply_accumulate, avx2::multiply_conj,
                           avx2::divide,   avx2::scale,               avx2::dot_conj,
                           avx2::squared_distance, avx2::energy};
#endif

bool cpu_has_avx2() {
#if defined(HST_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() {
  if (const char* env = std::getenv("HST_KERNELS"); env != nullptr && std::string(env) == "scalar") {
    return Isa::kScalar;
  }
  return cpu_has_avx2() ? Isa::kAvx2 : Isa::kScalar;
}

std::atomic<Isa>& selected() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

const Table& table() {
#if defined(HST_HAVE_AVX2_KERNELS)
  if (selected().load(std::memory_order_relaxed) == Isa::kAvx2) return kAvx2Table;
#endif
  return kScalarTable;
}

void check_sizes(std::size_t a, std::size_t b, std::size_t out) {
  if (a != b || a != out) throw std::invalid_argument("kernel operands differ in length");
}

}  // namespace

Isa active_isa() { return selected().load(); }

bool isa_available(Isa isa) { return isa == Isa::kScalar || cpu_has_avx2(); }

void force_isa(Isa isa) {
  if (!isa_available(isa)) throw std::invalid_argument("requested kernel ISA is not available");
  selected().store(isa);
}

std::string_view isa_name(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

void multiply(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out) {
  check_sizes(a.size(), b.size(), out.size());
  table().multiply(a.data(), b.data(), out.data(), a.size());
}

void multiply_accumulate(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> acc) {
  check_sizes(a.size(), b.size(), acc.size());
  table().multiply_accumulate(a.data(), b.data(), acc.data(), a.size());
}

void multiply_conj(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out) {
  check_sizes(a.size(), b.size(), out.size());
  table().multiply_conj(a.data(), b.data(), out.data(), a.size());
}

void divide(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out) {
  check_sizes(a.size(), b.size(), out.size());
  table().divide(a.data(), b.data(), out.data(), a.size());
}

void scale(std::span<const cplx> a, double s, std::span<cplx> out) {
  check_sizes(a.size(), a.size(), out.size());
  table().scale(a.data(), s, out.data(), a.size());
}

cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b) {
  check_sizes(a.size(), b.size(), b.size());
  return table().dot_conj(a.data(), b.data(), a.size());
}

double squared_distance(std::span<const cplx> a, std::span<const cplx> b) {
  check_sizes(a.size(), b.size(), b.size());
  return table().squared_distance(a.data(), b.data(), a.size());
}

double energy(std::span<const cplx> a) { return table().energy(a.data(), a.size()); }

}  // namespace hst::kernels
