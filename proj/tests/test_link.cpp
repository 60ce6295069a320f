// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <vector>

#include "hst/common/errors.hpp"
#include "hst/common/geometry.hpp"
#include "hst/common/random.hpp"
#include "hst/dsp/fft.hpp"
#include "hst/link/compensation.hpp"
#include "hst/link/link_sim.hpp"
#include "hst/link/numerology.hpp"
#include "hst/link/phase_noise.hpp"
#include "hst/link/precompensation.hpp"
#include "hst/link/ptrs.hpp"
#include "hst/link/slot.hpp"
#include "hst/link/throughput.hpp"
#include "hst/scenario/kinematics.hpp"

using namespace hst;
using namespace hst::link;
using Catch::Approx;

namespace {

SfnPath flat_path(double delay, cplx gain, double amplitude = 1.0) {
  SfnPath p;
  for (auto& ch : p.channel) {
    ch.taps = {{delay, gain}};
    ch.k_factor_db = 100.0;
  }
  p.reference_delay = delay;
  p.amplitude = amplitude;
  return p;
}

double grid_energy(const Grid& g) {
  double e = 0.0;
  for (const auto& v : g.re) e += std::norm(v);
  return e;
}

// Phase of sum conj(X) Y over one symbol of layer 0.
double symbol_phase(const TransmitSlot& tx, const ReceivedSlot& rx, int l) {
  cplx acc{};
  const cplx* x = tx.grid[0].symbol(l);
  const cplx* y = rx.grid[0].symbol(l);
  for (int k = 0; k < tx.grid[0].subcarriers; ++k) acc += std::conj(x[k]) * y[k];
  return std::arg(acc);
}

double mean_mse(const SlotSinr& s) {
  double m = 0.0;
  for (double v : s.sinr) m += 1.0 / v;
  return m / static_cast<double>(s.sinr.size());
}

}  // namespace

TEST_CASE("numerology at 120 kHz") {
  const auto n = make_numerology(264);
  CHECK(n.fft_size == 4096);
  CHECK(n.subcarriers() == 3168);
  CHECK(static_cast<std::size_t>(n.subcarriers()) <= n.fft_size);
  CHECK(n.cp_seconds() == Approx(0.586e-6).margin(0.001e-6));
  std::size_t half = 0;
  for (int s = 0; s < kSlotsPerHalfSubframe; ++s) half += n.slot_samples(s);
  CHECK(static_cast<double>(half) / n.sample_rate() == Approx(0.5e-3).epsilon(1e-12));
  CHECK(n.nominal_slot_seconds() == Approx(0.125e-3));

  const auto small = make_numerology(132);
  CHECK(small.fft_size == 2048);
  CHECK(small.cp_seconds() == Approx(n.cp_seconds()));
  CHECK_THROWS_AS(make_numerology(100), ConfigError);
}

TEST_CASE("active subcarriers map to distinct bins around DC") {
  const auto n = make_numerology(132);
  std::set<std::size_t> bins;
  for (int m = 0; m < n.subcarriers(); ++m) bins.insert(n.bin(m));
  CHECK(bins.size() == static_cast<std::size_t>(n.subcarriers()));
  CHECK(n.frequency(n.subcarriers() / 2) == 0.0);
  CHECK(n.frequency(0) == Approx(-n.subcarriers() / 2 * n.scs_hz));
}

TEST_CASE("PTRS layouts carry the same number of pilots") {
  for (int prbs : {132, 264}) {
    const auto n = make_numerology(prbs);
    const auto d = distributed_ptrs(n);
    const auto b = block_ptrs(n);
    CHECK(d.kind == PtrsKind::kDistributed);
    CHECK(b.kind == PtrsKind::kBlock);
    CHECK(d.subcarriers.size() == 48);
    CHECK(b.subcarriers.size() == 48);
    for (std::size_t i = 1; i < b.subcarriers.size(); ++i) CHECK(b.subcarriers[i] == b.subcarriers[i - 1] + 1);
    CHECK(std::is_sorted(d.subcarriers.begin(), d.subcarriers.end()));
    CHECK(std::adjacent_find(d.subcarriers.begin(), d.subcarriers.end()) == d.subcarriers.end());
    CHECK(d.subcarriers.front() >= 0);
    CHECK(d.subcarriers.back() < n.subcarriers());
    CHECK(b.subcarriers.front() >= 0);
    CHECK(b.subcarriers.back() < n.subcarriers());
  }
}

TEST_CASE("disabled phase noise is identically zero") {
  PhaseNoiseMask mask;
  mask.level_dbc_hz = -std::numeric_limits<double>::infinity();
  CHECK_FALSE(mask.enabled());
  const auto t = phase_noise_trace(mask, 1000, 491.52e6, 3);
  REQUIRE(t.size() == 1000);
  CHECK(std::all_of(t.begin(), t.end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("phase noise periodogram follows the mask at 1 MHz") {
  const PhaseNoiseMask mask;
  const double fs = 491.52e6;
  const std::size_t seg = 4096;
  const std::size_t n = 1 << 20;
  const auto trace = phase_noise_trace(mask, n, fs, 17);

  // Welch estimate, Hann window, two-sided density.
  std::vector<double> w(seg);
  double w2 = 0.0;
  for (std::size_t i = 0; i < seg; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(seg));
    w2 += w[i] * w[i];
  }
  const dsp::Fft fft(seg);
  std::vector<cplx> in(seg), out(seg);
  std::vector<double> psd(seg, 0.0);
  std::size_t count = 0;
  for (std::size_t s = 0; s + seg <= n; s += seg / 2, ++count) {
    for (std::size_t i = 0; i < seg; ++i) in[i] = w[i] * trace[s + i];
    fft.forward(in, out);
    for (std::size_t k = 0; k < seg; ++k) psd[k] += std::norm(out[k]) / (fs * w2);
  }
  const auto k = static_cast<std::size_t>(std::lround(1e6 / (fs / seg)));
  const double estimate = psd[k] / static_cast<double>(count);
  const double f = static_cast<double>(k) * fs / seg;
  CHECK(std::abs(10.0 * std::log10(estimate) - mask.psd_db(f)) < 3.0);
}

TEST_CASE("phase noise traces from different seeds are uncorrelated") {
  const PhaseNoiseMask mask;
  const std::size_t n = 1 << 22;
  const auto a = phase_noise_trace(mask, n, 10e6, 1);
  const auto b = phase_noise_trace(mask, n, 10e6, 2);
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  CHECK(std::abs(sab / std::sqrt(saa * sbb)) < 0.01);
  // Zero mean relative to the spread.
  CHECK(std::abs(ma) < 0.05 * std::sqrt(saa / n));
}

TEST_CASE("QAM constellations have unit power and Gray labels") {
  for (int bits : {2, 4, 6, 8}) {
    const unsigned count = 1U << bits;
    double power = 0.0, dmin = 1e9;
    for (unsigned i = 0; i < count; ++i) {
      power += std::norm(qam_point(bits, i));
      for (unsigned j = 0; j < i; ++j) dmin = std::min(dmin, std::abs(qam_point(bits, i) - qam_point(bits, j)));
    }
    CHECK(power / count == Approx(1.0).epsilon(1e-12));
    // Nearest neighbours differ in exactly one bit.
    for (unsigned i = 0; i < count; ++i) {
      for (unsigned j = 0; j < count; ++j) {
        if (std::abs(std::abs(qam_point(bits, i) - qam_point(bits, j)) - dmin) < 1e-9) {
          CHECK(std::popcount(i ^ j) == 1);
        }
      }
    }
  }
}

TEST_CASE("identity channel returns the transmitted grid") {
  const auto n = make_numerology(132);
  const auto tx = make_transmit_slot(n, 8, 1);
  const auto rx = sfn_ofdm_slot(n, 1, tx, {flat_path(1e-6, {1.0, 0.0})}, {});
  for (int layer = 0; layer < kLayers; ++layer) {
    double err = 0.0;
    for (std::size_t i = 0; i < tx.grid[layer].re.size(); ++i) {
      err = std::max(err, std::abs(rx.grid[layer].re[i] - tx.grid[layer].re[i]));
    }
    CHECK(err < 1e-12);
    for (const auto& h : rx.channel_estimate[layer]) CHECK(std::abs(h - cplx(1.0, 0.0)) < 1e-12);
  }
  CHECK(rx.signal_power == Approx(1.0));
  CHECK_FALSE(rx.skew_exceeds_cp);
}

TEST_CASE("slot passes without noise or phase noise conserve energy") {
  const auto n = make_numerology(264);
  const auto tx = make_transmit_slot(n, 6, 2);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const double phase = 2.0 * kPi * counter_uniform(seed);
    // Pure delay offset relative to the reference: unit-modulus response.
    SfnPath p = flat_path(2e-6, std::polar(1.0, phase));
    p.reference_delay = 2e-6 - 3e-9;
    const auto rx = sfn_ofdm_slot(n, static_cast<int>(seed % 4), tx, {p}, {});
    for (int layer = 0; layer < kLayers; ++layer) {
      CHECK(grid_energy(rx.grid[layer]) == Approx(grid_energy(tx.grid[layer])).epsilon(1e-9));
    }
  }
}

TEST_CASE("residual CFO rotates consecutive symbols by the accumulated phase") {
  const auto n = make_numerology(264);
  const auto tx = make_transmit_slot(n, 4, 3);
  SfnPath p = flat_path(0.0, {1.0, 0.0});
  p.residual_doppler_hz = 0.1 * n.scs_hz;
  const int slot = 1;  // no long CP inside
  const auto rx = sfn_ofdm_slot(n, slot, tx, {p}, {});
  const double expected = std::remainder(
      2.0 * kPi * 0.1 * static_cast<double>(n.fft_size + n.cp_samples) / static_cast<double>(n.fft_size), 2.0 * kPi);
  for (int l = 3; l + 1 < kSymbolsPerSlot; ++l) {
    const double step = std::remainder(symbol_phase(tx, rx, l + 1) - symbol_phase(tx, rx, l), 2.0 * kPi);
    CHECK(step == Approx(expected).margin(0.01));
  }
}

TEST_CASE("coherent SFN sum of two equal paths") {
  const auto n = make_numerology(132);
  const auto tx = make_transmit_slot(n, 8, 4);
  const auto ratio = [&](double phase) {
    const auto rx = sfn_ofdm_slot(n, 1, tx, {flat_path(1e-6, {1.0, 0.0}), flat_path(1.3e-6, std::polar(1.0, phase))},
                                  {});
    return grid_energy(rx.grid[0]) / grid_energy(tx.grid[0]);
  };
  CHECK(ratio(0.0) == Approx(4.0).epsilon(1e-9));
  CHECK(ratio(kPi / 2.0) == Approx(2.0).epsilon(1e-9));
  // Averaged over the relative carrier phase: 2x (3 dB).
  double mean = 0.0;
  const int draws = 64;
  for (int i = 0; i < draws; ++i) mean += ratio(2.0 * kPi * (i + 0.5) / draws) / draws;
  CHECK(mean == Approx(2.0).epsilon(1e-9));
}

TEST_CASE("arrival skew beyond the CP is flagged") {
  const auto n = make_numerology(132);
  const auto tx = make_transmit_slot(n, 4, 5);
  SfnPath late = flat_path(1e-6, {1.0, 0.0});
  late.reference_delay = 1e-6 - 2.0 * n.cp_seconds();
  const auto rx = sfn_ofdm_slot(n, 1, tx, {flat_path(1e-6, {1.0, 0.0}), late}, {});
  CHECK(rx.skew_exceeds_cp);
  CHECK(rx.isi_penalty > 0.0);
  const auto ok = sfn_ofdm_slot(n, 1, tx, {flat_path(1e-6, {1.0, 0.0}), flat_path(2e-6, {0.0, 1.0})}, {});
  CHECK_FALSE(ok.skew_exceeds_cp);
  CHECK(ok.isi_penalty == 0.0);
}

TEST_CASE("CPE estimate recovers an injected constant phase") {
  const auto n = make_numerology(264);
  const auto tx = make_transmit_slot(n, 8, 6);
  const auto clean = sfn_ofdm_slot(n, 1, tx, {flat_path(0.0, {1.0, 0.0})}, {});
  const double snr = 100.0;  // 20 dB
  const auto layout = distributed_ptrs(n);
  // Per-estimate spread for the pilot count of both layers.
  const double sigma_theory = std::sqrt(1.0 / (2.0 * snr * kLayers * static_cast<double>(layout.subcarriers.size())));
  for (double injected : {0.1, 0.0}) {
    std::vector<double> est;
    for (std::uint64_t draw = 0; draw < 200; ++draw) {
      const auto noise = unit_noise(n, derive_seed(7, draw));
      SlotGrids rx = clean.grid;
      for (int layer = 0; layer < kLayers; ++layer) {
        cplx* y = rx[layer].symbol(5);
        const cplx* w = noise[layer].symbol(5);
        for (int k = 0; k < n.subcarriers(); ++k) y[k] = y[k] * std::polar(1.0, injected) + w[k] / std::sqrt(snr);
      }
      est.push_back(estimate_cpe(rx, tx, clean, layout, 5));
    }
    const double mean = std::accumulate(est.begin(), est.end(), 0.0) / est.size();
    double var = 0.0;
    for (double e : est) var += (e - mean) * (e - mean);
    const double sd = std::sqrt(var / (est.size() - 1));
    CHECK(mean == Approx(injected).margin(0.005));
    CHECK(sd == Approx(sigma_theory).epsilon(0.2));
  }
}

TEST_CASE("CPE estimate ignores zero-mean-phase ICI") {
  const auto n = make_numerology(264);
  const auto tx = make_transmit_slot(n, 8, 8);
  auto rx = sfn_ofdm_slot(n, 1, tx, {flat_path(0.0, {1.0, 0.0})}, {});
  // Real centre tap with symmetric leakage: exp(j a sin) has a real DC term.
  const double a = 0.2;
  const std::array<cplx, 3> j{cplx(-a / 2.0, 0.0), cplx(std::cyl_bessel_j(0.0, a), 0.0), cplx(a / 2.0, 0.0)};
  const SlotGrids clean = rx.grid;
  double mean = 0.0;
  int count = 0;
  for (int l = 0; l < kSymbolsPerSlot; ++l) {
    if (l == kDmrsSymbol) continue;
    for (int layer = 0; layer < kLayers; ++layer) {
      const cplx* x = clean[layer].symbol(l);
      cplx* y = rx.grid[layer].symbol(l);
      for (int k = 0; k < n.subcarriers(); ++k) {
        y[k] = j[1] * x[k];
        if (k > 0) y[k] += j[2] * x[k - 1];
        if (k + 1 < n.subcarriers()) y[k] += j[0] * x[k + 1];
      }
    }
    const double e = estimate_cpe(rx.grid, tx, rx, distributed_ptrs(n), l);
    CHECK(std::abs(e) < 0.06);  // about 4 sigma of the leakage term
    mean += e;
    ++count;
  }
  CHECK(mean / count == Approx(0.0).margin(0.015));
}

TEST_CASE("ICI estimate is the identity filter without phase noise") {
  const auto n = make_numerology(264);
  const auto tx = make_transmit_slot(n, 8, 9);
  const auto rx = sfn_ofdm_slot(n, 1, tx, {flat_path(0.0, std::polar(0.7, 0.4))}, {});
  const auto est = estimate_ici(rx.grid, tx, rx, block_ptrs(n), 6);
  REQUIRE(est.taps.size() == 3);
  CHECK(std::abs(est.taps[0]) < 1e-9);
  CHECK(std::abs(est.taps[1] - cplx(1.0, 0.0)) < 1e-9);
  CHECK(std::abs(est.taps[2]) < 1e-9);
  CHECK_FALSE(est.fallback);
}

TEST_CASE("ICI estimate recovers constructed spectral leakage") {
  const auto n = make_numerology(264);
  const auto tx = make_transmit_slot(n, 8, 10);
  auto rx = sfn_ofdm_slot(n, 1, tx, {flat_path(0.0, {1.0, 0.0})}, {});
  const std::vector<cplx> taps{{0.03, -0.02}, {0.98, 0.05}, {-0.01, 0.04}};
  for (int layer = 0; layer < kLayers; ++layer) {
    const cplx* x = tx.grid[layer].symbol(7);
    cplx* y = rx.grid[layer].symbol(7);
    for (int k = 0; k < n.subcarriers(); ++k) {
      cplx v{};
      for (int l = -1; l <= 1; ++l) {
        if (k - l >= 0 && k - l < n.subcarriers()) v += taps[l + 1] * x[k - l];
      }
      y[k] = v;
    }
  }
  const auto est = estimate_ici(rx.grid, tx, rx, block_ptrs(n), 7);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(est.taps[i] - taps[i]) < 1e-6);
  CHECK(est.condition < kIciConditionLimit);
}

TEST_CASE("ICI estimation rejects an ill-conditioned system") {
  const auto n = make_numerology(264);
  const auto tx = make_transmit_slot(n, 8, 11);
  auto rx = sfn_ofdm_slot(n, 1, tx, {flat_path(0.0, {1.0, 0.0})}, {});
  // A constant pilot block makes the three regressors identical.
  TransmitSlot flat = tx;
  for (int layer = 0; layer < kLayers; ++layer) {
    for (int k : block_ptrs(n).subcarriers) flat.grid[layer].symbol(3)[k] = {1.0, 0.0};
  }
  const auto est = estimate_ici(rx.grid, flat, rx, block_ptrs(n), 3);
  CHECK(est.fallback);
  CHECK(std::abs(est.taps[0]) == 0.0);
  CHECK(std::abs(est.taps[2]) == 0.0);
  CHECK(std::abs(est.taps[1]) == Approx(1.0));
}

TEST_CASE("ICI removal inverts a known phase process") {
  const auto n = make_numerology(132);
  const auto tx = make_transmit_slot(n, 8, 12);
  const std::vector<cplx> taps{{0.02, 0.01}, {0.99, -0.03}, {-0.015, 0.02}};
  std::vector<cplx> sym(tx.grid[0].symbol(8), tx.grid[0].symbol(8) + n.subcarriers());
  // Empty edge subcarriers keep the leakage inside the active band.
  sym.front() = sym.back() = {};
  std::vector<cplx> rx(n.subcarriers());
  for (int k = 0; k < n.subcarriers(); ++k) {
    for (int l = -1; l <= 1; ++l) {
      if (k - l >= 0 && k - l < n.subcarriers()) rx[k] += taps[l + 1] * sym[k - l];
    }
  }
  remove_ici(n, rx, taps);
  double err = 0.0;
  for (int k = 0; k < n.subcarriers(); ++k) err = std::max(err, std::abs(rx[k] - sym[k]));
  CHECK(err < 1e-9);
}

TEST_CASE("ICI compensation beats CPE-only under oscillator phase noise") {
  const auto n = make_numerology(264);
  const PhaseNoiseMask mask;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto tx = make_transmit_slot(n, 8, seed);
    SfnPath p = flat_path(0.0, {1.0, 0.0});
    p.tx_phase_noise = phase_noise_trace(mask, n.slot_samples(1), n.sample_rate(), derive_seed(seed, 1));
    const auto rx_pn = phase_noise_trace(mask, n.slot_samples(1), n.sample_rate(), derive_seed(seed, 2));
    const auto rx = sfn_ofdm_slot(n, 1, tx, {p}, rx_pn);
    const auto noise = unit_noise(n, seed);
    SlotGrids y = rx.grid;
    for (int layer = 0; layer < kLayers; ++layer) {
      for (std::size_t i = 0; i < y[layer].re.size(); ++i) y[layer].re[i] += 0.1 * noise[layer].re[i];
    }
    const double cpe = mean_mse(equalized_sinr(n, y, tx, rx, CompensationMode::kCpe));
    const double ici = mean_mse(equalized_sinr(n, y, tx, rx, CompensationMode::kIci));
    const double none = mean_mse(equalized_sinr(n, y, tx, rx, CompensationMode::kNone));
    CHECK(ici < cpe);
    CHECK(cpe < none);
  }
}

TEST_CASE("mode names round trip") {
  for (auto m : {CompensationMode::kIdeal, CompensationMode::kNone, CompensationMode::kCpe, CompensationMode::kIci}) {
    CHECK(parse_mode(mode_name(m)) == m);
  }
  CHECK_THROWS_AS(parse_mode("dmrs"), ConfigError);
}

TEST_CASE("throughput plateau at MCS 24") {
  const auto& mcs = mcs_entry(24);
  const double raw = 264.0 * 12 * 14 * 2 * 8 * (841.0 / 1024.0) / 0.125e-3;
  CHECK(raw == Approx(4.663e9).margin(0.001e9));
  CHECK(transport_block_bits(264, 2, mcs, 1.0) / 0.125e-3 == Approx(raw));
  const std::vector<double> high(1000, 1e9);
  CHECK(slot_throughput_bps(high, mcs, 264, 2) == Approx(0.75 * raw).epsilon(1e-9));
  CHECK(slot_throughput_bps(high, mcs, 264, 2) == Approx(3.5e9).margin(0.01e9));
  const std::vector<double> zero(1000, 0.0);
  CHECK(slot_throughput_bps(zero, mcs, 264, 2) == 0.0);
}

TEST_CASE("BLER is one half at the MCS threshold") {
  const auto& mcs = mcs_entry(18);
  CHECK(block_error_rate(mcs.threshold_db, mcs) == Approx(0.5).epsilon(1e-12));
  const std::vector<double> at(50, std::pow(10.0, mcs.threshold_db / 10.0));
  CHECK(slot_throughput_bps(at, mcs, 264, 2) == Approx(0.5 * transport_block_bits(264, 2, mcs) / 0.125e-3));
  CHECK(block_error_rate(mcs.threshold_db + 3.0, mcs) < 1e-3);
  CHECK(block_error_rate(mcs.threshold_db - 3.0, mcs) > 1.0 - 1e-3);
  CHECK_THROWS_AS(mcs_entry(20), ConfigError);
}

TEST_CASE("EESM lies between the minimum and the mean") {
  Rng rng(21);
  std::uniform_real_distribution<double> u(0.0, 40.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> s(37);
    for (auto& v : s) v = std::pow(10.0, u(rng) / 10.0);
    const double lo = 10.0 * std::log10(*std::min_element(s.begin(), s.end()));
    const double mean = 10.0 * std::log10(std::accumulate(s.begin(), s.end(), 0.0) / s.size());
    for (double beta : {1.0, 28.0, 80.0}) {
      const double e = eesm_db(s, beta);
      CHECK(e >= lo - 1e-9);
      CHECK(e <= mean + 1e-9);
    }
  }
  const std::vector<double> flat(10, 123.0);
  CHECK(eesm_db(flat, 80.0) == Approx(10.0 * std::log10(123.0)).epsilon(1e-12));
}

TEST_CASE("throughput never exceeds the raw data rate") {
  Rng rng(22);
  std::uniform_real_distribution<double> u(-10.0, 60.0);
  for (int mcs_index : {18, 24}) {
    const auto& mcs = mcs_entry(mcs_index);
    const double cap = 2.0 * mcs.bits_per_symbol * mcs.code_rate * 264 * 12 * 14 / 0.125e-3;
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> s(20);
      for (auto& v : s) v = std::pow(10.0, u(rng) / 10.0);
      const double t = slot_throughput_bps(s, mcs, 264, 2);
      CHECK(t >= 0.0);
      CHECK(t <= cap);
    }
  }
}

TEST_CASE("stored MCS thresholds match the BICM capacity fit") {
  CHECK(mcs_entry(18).threshold_db == Approx(bicm_threshold_db(6, 822.0 / 1024.0)).margin(0.01));
  CHECK(mcs_entry(24).threshold_db == Approx(bicm_threshold_db(8, 841.0 / 1024.0)).margin(0.01));
}

TEST_CASE("BICM capacity is bounded by Shannon and the constellation size") {
  for (int bits : {2, 4, 6, 8}) {
    double prev = 0.0;
    for (double snr = -10.0; snr <= 40.0; snr += 2.5) {
      const double c = bicm_capacity(bits, snr);
      CHECK(c <= std::log2(1.0 + std::pow(10.0, snr / 10.0)) + 1e-9);
      CHECK(c <= bits + 1e-9);
      CHECK(c >= prev - 1e-9);
      prev = c;
    }
    CHECK(bicm_capacity(bits, 45.0) == Approx(bits).margin(1e-3));
  }
}

TEST_CASE("precompensation with perfect estimates leaves no residual") {
  const Vec2 p{10.0, 0.0}, v{scenario::kMaxTrainSpeed, 0.0};
  const Vec2 rrh{0.0, 5.0};
  const auto truth = estimate_link(p, v, rrh, 30e9);
  const auto r = residual(truth, estimate_link(p, v, rrh, 30e9));
  CHECK(r.doppler_hz == 0.0);
  CHECK(r.delay_s == 0.0);
}

TEST_CASE("velocity error along the link maps to residual Doppler") {
  const Vec2 p{290.0, 0.0}, rrh{1000.0, 0.0};
  const Vec2 v{scenario::kMaxTrainSpeed, 0.0};
  const auto truth = estimate_link(p, v, rrh, 30e9);
  const auto est = estimate_link(p, v + Vec2{0.5, 0.0}, rrh, 30e9);
  CHECK(residual(truth, est).doppler_hz == Approx(-0.5 * 30e9 / kSpeedOfLight).epsilon(1e-9));
  CHECK(std::abs(residual(truth, est).doppler_hz) == Approx(50.0).margin(0.05));
}

TEST_CASE("uncompensated mid-point Doppler spread") {
  const Vec2 v{scenario::kMaxTrainSpeed, 0.0};
  const auto ahead = estimate_link({0.0, 0.0}, v, {1e6, 0.0}, 30e9);
  const auto behind = estimate_link({0.0, 0.0}, v, {-1e6, 0.0}, 30e9);
  const double spread = ahead.doppler_hz - behind.doppler_hz;
  CHECK(spread == Approx(27.8e3).margin(5.0));
  CHECK(spread / 120e3 == Approx(0.23).margin(0.005));
}

TEST_CASE("timing offsets align arrivals at the latest path") {
  const std::vector<LinkEstimate> links{{0.0, 1e-6}, {0.0, 2.5e-6}, {0.0, 0.3e-6}};
  const auto off = timing_offsets(links);
  for (std::size_t i = 0; i < links.size(); ++i) CHECK(off[i] + links[i].delay_s == Approx(2.5e-6).epsilon(1e-15));
  CHECK(*std::min_element(off.begin(), off.end()) == 0.0);
}

TEST_CASE("precompensated waveform cancels the channel delay and Doppler") {
  const double fs = 61.44e6;
  const std::size_t n = 2048;
  Rng rng(30);
  // Band-limited test signal: random spectrum on the central half.
  std::vector<cplx> spec(n), x(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(dsp::signed_bin(k, n)) < static_cast<long>(n / 4)) spec[k] = complex_normal(rng);
  }
  const dsp::Fft fft(n);
  fft.inverse(spec, x);
  // A whole number of bins keeps the shifted buffer periodic.
  const double delay = 123.4e-9, doppler = 3.0 * fs / static_cast<double>(n);
  const auto pre = precompensate(x, fs, doppler, delay);
  // Channel: delay by `delay`, then Doppler.
  auto chan = precompensate(pre, fs, 0.0, -delay);
  for (std::size_t i = 0; i < n; ++i) chan[i] *= std::polar(1.0, 2.0 * kPi * doppler * static_cast<double>(i) / fs);
  // Only a constant carrier phase remains.
  const cplx c = chan[0] / x[0];
  double err = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    err += std::norm(chan[i] - c * x[i]);
    ref += std::norm(x[i]);
  }
  CHECK(err / ref < 1e-6);
  CHECK(std::abs(c) == Approx(1.0).margin(1e-3));
}

TEST_CASE("link realization is deterministic and ideal mode reaches the plateau") {
  LinkConfig cfg;
  cfg.snr_db = {10.0, 45.0};
  const ErrorStatistics errors;
  const auto a = simulate_link_realization(cfg, 10.0, errors.draw(5), 99);
  const auto b = simulate_link_realization(cfg, 10.0, errors.draw(5), 99);
  REQUIRE(a.throughput_bps.size() == 2);
  CHECK(a.throughput_bps == b.throughput_bps);
  CHECK(a.residual_doppler_hz == b.residual_doppler_hz);
  const double plateau = transport_block_bits(264, 2, mcs_entry(24)) / 0.125e-3;
  CHECK(a.throughput_bps[1][0] == Approx(plateau).epsilon(1e-6));
  for (double t : a.throughput_bps[0]) CHECK(t < 0.05 * plateau);
  CHECK_FALSE(a.skew_exceeds_cp);
}

TEST_CASE("residual Doppler stays small under typical estimate errors") {
  ErrorStatistics errors;
  const double fc = 30e9;
  const Vec2 v{scenario::kMaxTrainSpeed, 0.0};
  for (double d : {10.0, 290.0}) {
    std::vector<double> res;
    for (std::uint64_t i = 0; i < 2000; ++i) {
      const auto e = errors.draw(derive_seed(77, i));
      for (const Vec2 rrh : {Vec2{0.0, 5.0}, Vec2{580.0, -5.0}}) {
        const auto truth = estimate_link({d, 0.0}, v, rrh, fc);
        const auto est = estimate_link(Vec2{d, 0.0} + e.position, v + e.velocity, rrh, fc);
        res.push_back(std::abs(residual(truth, est).doppler_hz));
      }
    }
    std::sort(res.begin(), res.end());
    CHECK(res[static_cast<std::size_t>(0.99 * res.size())] <= 200.0);
  }
}
