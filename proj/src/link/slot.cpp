// SPDX-License-Identifier: Apache-2.0
#include "hst/link/slot.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hst/common/geometry.hpp"
#include "hst/common/random.hpp"
#include "hst/dsp/fft.hpp"
#include "hst/kernels/kernels.hpp"

namespace hst::link {
namespace {

cplx qpsk(unsigned label) {
  const double a = 1.0 / std::sqrt(2.0);
  return {(label & 1U) != 0 ? -a : a, (label & 2U) != 0 ? -a : a};
}

}  // namespace

cplx qam_point(int bits_per_symbol, unsigned label) {
  const int half = bits_per_symbol / 2;
  const int levels = 1 << half;
  const auto pam = [&](unsigned gray) {
    // Gray label back to the amplitude index.
    unsigned idx = gray;
    for (unsigned s = gray >> 1; s != 0; s >>= 1) idx ^= s;
    return 2.0 * idx - (levels - 1);
  };
  const double norm = std::sqrt(2.0 * (levels * levels - 1) / 3.0);
  const unsigned mask = (1U << half) - 1U;
  return {pam(label & mask) / norm, pam((label >> half) & mask) / norm};
}

TransmitSlot make_transmit_slot(const OfdmNumerology& num, int bits_per_symbol, std::uint64_t seed) {
  const int m = num.subcarriers();
  TransmitSlot tx;
  tx.bits_per_symbol = bits_per_symbol;
  tx.pilot.assign(static_cast<std::size_t>(m), false);
  for (int k : distributed_ptrs(num).subcarriers) tx.pilot[static_cast<std::size_t>(k)] = true;
  for (int k : block_ptrs(num).subcarriers) tx.pilot[static_cast<std::size_t>(k)] = true;

  Rng rng(derive_seed(seed, 0x74786772ULL));
  std::uniform_int_distribution<unsigned> data_label(0, (1U << bits_per_symbol) - 1U);
  std::uniform_int_distribution<unsigned> pilot_label(0, 3);
  // Pilot sequences are shared by both layers' receivers but drawn per layer.
  for (int layer = 0; layer < kLayers; ++layer) {
    Grid g(m);
    for (int l = 0; l < kSymbolsPerSlot; ++l) {
      cplx* s = g.symbol(l);
      for (int k = 0; k < m; ++k) {
        const bool reference = l == kDmrsSymbol || tx.pilot[static_cast<std::size_t>(k)];
        s[k] = reference ? qpsk(pilot_label(rng)) : qam_point(bits_per_symbol, data_label(rng));
      }
    }
    tx.grid[static_cast<std::size_t>(layer)] = std::move(g);
  }
  return tx;
}

ReceivedSlot sfn_ofdm_slot(const OfdmNumerology& num, int slot_in_half_subframe, const TransmitSlot& tx,
                           const std::vector<SfnPath>& paths, const std::vector<double>& rx_phase_noise) {
  if (paths.empty()) throw std::invalid_argument("SFN slot needs at least one path");
  const std::size_t n = num.fft_size;
  const int m = num.subcarriers();
  const double fs = num.sample_rate();
  const std::size_t slot_len = num.slot_samples(slot_in_half_subframe);
  const bool rx_pn = !rx_phase_noise.empty();
  if (rx_pn && rx_phase_noise.size() < slot_len) throw std::invalid_argument("receiver phase noise trace too short");
  bool impaired = rx_pn;
  for (const auto& p : paths) {
    if (!p.tx_phase_noise.empty() && p.tx_phase_noise.size() < slot_len) {
      throw std::invalid_argument("transmitter phase noise trace too short");
    }
    impaired = impaired || !p.tx_phase_noise.empty() || p.residual_doppler_hz != 0.0;
  }

  // Per-path, per-layer frequency responses on every FFT bin, residual delay
  // included as the ramp relative to the compensated delay.
  std::vector<double> freq(n);
  for (std::size_t k = 0; k < n; ++k) freq[k] = static_cast<double>(dsp::signed_bin(k, n)) * num.scs_hz;
  std::vector<std::array<std::vector<cplx>, kLayers>> h(paths.size());
  for (std::size_t a = 0; a < paths.size(); ++a) {
    for (int layer = 0; layer < kLayers; ++layer) {
      auto& v = h[a][static_cast<std::size_t>(layer)];
      v.resize(n);
      paths[a].channel[static_cast<std::size_t>(layer)].frequency_response(freq, paths[a].reference_delay, v);
      kernels::scale(v, paths[a].amplitude, v);
    }
  }

  ReceivedSlot out;
  // Residual skew beyond the CP leaks energy from the neighbouring symbol.
  double total = 0.0, leak = 0.0;
  for (const auto& p : paths) {
    const double skew = std::abs(p.channel[0].taps.empty() ? 0.0 : p.channel[0].taps[0].delay - p.reference_delay);
    const double excess = skew - num.cp_seconds();
    const double power = p.amplitude * p.amplitude;
    total += power;
    if (excess > 0.0) {
      out.skew_exceeds_cp = true;
      leak += power * std::min(1.0, excess / num.useful_seconds());
    }
  }

  // Mean phase factor of each path over the DMRS symbol.
  std::vector<cplx> j0(paths.size(), {1.0, 0.0});
  const std::size_t dmrs_start = num.useful_start(kDmrsSymbol, slot_in_half_subframe);
  for (std::size_t a = 0; a < paths.size() && impaired; ++a) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t t = dmrs_start + i;
      double phi = 2.0 * kPi * paths[a].residual_doppler_hz * static_cast<double>(t) / fs;
      if (!paths[a].tx_phase_noise.empty()) phi += paths[a].tx_phase_noise[t];
      if (rx_pn) phi += rx_phase_noise[t];
      acc += std::polar(1.0, phi);
    }
    j0[a] = acc / static_cast<double>(n);
  }

  const dsp::Fft fft(n);
  std::vector<cplx> xf(n), xt(n), zt(n), zf(n), yf(n), yt(n), phasor(n), composite(n);
  double power = 0.0;
  for (int layer = 0; layer < kLayers; ++layer) {
    const auto li = static_cast<std::size_t>(layer);
    Grid& rx = out.grid[li];
    rx = Grid(m);

    std::fill(composite.begin(), composite.end(), cplx{});
    auto& est = out.channel_estimate[li];
    est.assign(static_cast<std::size_t>(m), {0.0, 0.0});
    for (std::size_t a = 0; a < paths.size(); ++a) {
      for (int k = 0; k < m; ++k) est[static_cast<std::size_t>(k)] += h[a][li][num.bin(k)] * j0[a];
      for (std::size_t k = 0; k < n; ++k) composite[k] += h[a][li][k];
    }
    for (int k = 0; k < m; ++k) power += std::norm(composite[num.bin(k)]);

    for (int l = 0; l < kSymbolsPerSlot; ++l) {
      std::fill(xf.begin(), xf.end(), cplx{});
      const cplx* sym = tx.grid[li].symbol(l);
      for (int k = 0; k < m; ++k) xf[num.bin(k)] = sym[k];

      if (!impaired) {
        kernels::multiply(composite, xf, yf);
      } else {
        const std::size_t start = num.useful_start(l, slot_in_half_subframe);
        fft.inverse(xf, xt);
        std::fill(yf.begin(), yf.end(), cplx{});
        for (std::size_t a = 0; a < paths.size(); ++a) {
          const SfnPath& p = paths[a];
          const double w = 2.0 * kPi * p.residual_doppler_hz / fs;
          for (std::size_t i = 0; i < n; ++i) {
            const std::size_t t = start + i;
            double phi = w * static_cast<double>(t);
            if (!p.tx_phase_noise.empty()) phi += p.tx_phase_noise[t];
            phasor[i] = std::polar(1.0, phi);
          }
          kernels::multiply(xt, phasor, zt);
          fft.forward(zt, zf);
          kernels::multiply_accumulate(h[a][li], zf, yf);
        }
        if (rx_pn) {
          fft.inverse(yf, yt);
          for (std::size_t i = 0; i < n; ++i) phasor[i] = std::polar(1.0, rx_phase_noise[start + i]);
          kernels::multiply(yt, phasor, zt);
          fft.forward(zt, yf);
        }
      }
      cplx* r = rx.symbol(l);
      for (int k = 0; k < m; ++k) r[k] = yf[num.bin(k)];
    }
  }
  out.signal_power = power / (kLayers * m);
  out.isi_penalty = total > 0.0 ? leak / total : 0.0;
  return out;
}

std::array<Grid, kLayers> unit_noise(const OfdmNumerology& num, std::uint64_t seed) {
  std::array<Grid, kLayers> g;
  Rng rng(derive_seed(seed, 0x6e6f697365ULL));
  for (auto& layer : g) {
    layer = Grid(num.subcarriers());
    for (auto& x : layer.re) x = complex_normal(rng);
  }
  return g;
}

}  // namespace hst::link
