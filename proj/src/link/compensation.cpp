// SPDX-License-Identifier: Apache-2.0
#include "hst/link/compensation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hst/common/errors.hpp"
#include "hst/common/geometry.hpp"
#include "hst/dsp/fft.hpp"
#include "hst/kernels/kernels.hpp"

namespace hst::link {
namespace {

constexpr int kGroupPrbs = 4;

cplx reference(const TransmitSlot& tx, const ReceivedSlot& meta, int layer, int symbol, int k) {
  const auto li = static_cast<std::size_t>(layer);
  return meta.channel_estimate[li][static_cast<std::size_t>(k)] * tx.grid[li].symbol(symbol)[k];
}

}  // namespace

std::string_view mode_name(CompensationMode mode) {
  switch (mode) {
    case CompensationMode::kIdeal: return "ideal";
    case CompensationMode::kNone: return "none";
    case CompensationMode::kCpe: return "cpe";
    case CompensationMode::kIci: return "ici";
  }
  return "?";
}

CompensationMode parse_mode(std::string_view name) {
  for (auto m : {CompensationMode::kIdeal, CompensationMode::kNone, CompensationMode::kCpe, CompensationMode::kIci}) {
    if (mode_name(m) == name) return m;
  }
  throw ConfigError("unknown compensation mode: " + std::string(name));
}

PtrsLayout layout_for(const OfdmNumerology& num, CompensationMode mode) {
  switch (mode) {
    case CompensationMode::kCpe: return distributed_ptrs(num);
    case CompensationMode::kIci: return block_ptrs(num);
    default: return {};
  }
}

double estimate_cpe(const SlotGrids& rx, const TransmitSlot& tx, const ReceivedSlot& meta, const PtrsLayout& layout,
                    int symbol) {
  cplx acc{0.0, 0.0};
  for (int layer = 0; layer < kLayers; ++layer) {
    const cplx* y = rx[static_cast<std::size_t>(layer)].symbol(symbol);
    for (int k : layout.subcarriers) acc += std::conj(reference(tx, meta, layer, symbol, k)) * y[k];
  }
  return std::arg(acc);
}

IciEstimate estimate_ici(const SlotGrids& rx, const TransmitSlot& tx, const ReceivedSlot& meta,
                         const PtrsLayout& layout, int symbol, int half_width) {
  const auto& sc = layout.subcarriers;
  const int u = half_width;
  const int per_layer = static_cast<int>(sc.size()) - 2 * u;
  if (per_layer < 2 * u + 1) throw std::invalid_argument("pilot block too short for the ICI taps");
  for (std::size_t i = 1; i < sc.size(); ++i) {
    if (sc[i] != sc[i - 1] + 1) throw std::invalid_argument("ICI estimation needs a contiguous pilot block");
  }

  Eigen::MatrixXcd a(kLayers * per_layer, 2 * u + 1);
  Eigen::VectorXcd y(kLayers * per_layer);
  for (int layer = 0; layer < kLayers; ++layer) {
    const cplx* ry = rx[static_cast<std::size_t>(layer)].symbol(symbol);
    for (int r = 0; r < per_layer; ++r) {
      const int k = sc[static_cast<std::size_t>(r + u)];
      const int row = layer * per_layer + r;
      y(row) = ry[k];
      for (int l = -u; l <= u; ++l) a(row, l + u) = reference(tx, meta, layer, symbol, k - l);
    }
  }

  IciEstimate est;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  est.condition = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
  est.taps.assign(static_cast<std::size_t>(2 * u + 1), {0.0, 0.0});
  if (!(est.condition <= kIciConditionLimit)) {
    est.fallback = true;
    est.taps[static_cast<std::size_t>(u)] = std::polar(1.0, estimate_cpe(rx, tx, meta, layout, symbol));
    return est;
  }
  const Eigen::VectorXcd j = svd.solve(y);
  for (int i = 0; i <= 2 * u; ++i) est.taps[static_cast<std::size_t>(i)] = j(i);
  return est;
}

void remove_ici(const OfdmNumerology& num, std::span<cplx> symbol, std::span<const cplx> taps) {
  const std::size_t n = num.fft_size;
  const int m = num.subcarriers();
  const int u = static_cast<int>(taps.size() / 2);
  std::vector<cplx> f(n), t(n), process(n);
  for (int k = 0; k < m; ++k) f[num.bin(k)] = symbol[static_cast<std::size_t>(k)];
  const dsp::Fft fft(n);
  fft.inverse(f, t);
  thread_local std::vector<cplx> twiddle;
  if (twiddle.size() != n) {
    twiddle.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      twiddle[i] = std::polar(1.0, 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    cplx v = taps[static_cast<std::size_t>(u)];
    cplx up{1.0, 0.0};
    for (int l = 1; l <= u; ++l) {
      up *= twiddle[i];
      v += taps[static_cast<std::size_t>(u + l)] * up + taps[static_cast<std::size_t>(u - l)] * std::conj(up);
    }
    process[i] = v;
  }
  kernels::divide(t, process, t);
  fft.forward(t, f);
  for (int k = 0; k < m; ++k) symbol[static_cast<std::size_t>(k)] = f[num.bin(k)];
}

SlotSinr equalized_sinr(const OfdmNumerology& num, const SlotGrids& rx, const TransmitSlot& tx,
                        const ReceivedSlot& meta, CompensationMode mode, int half_width) {
  const int m = num.subcarriers();
  const int group = kGroupPrbs * kSubcarriersPerPrb;
  const PtrsLayout layout = layout_for(num, mode);
  SlotSinr out;
  std::array<std::vector<cplx>, kLayers> sym;
  std::vector<cplx> eq(static_cast<std::size_t>(m));

  for (int l = 0; l < kSymbolsPerSlot; ++l) {
    if (l == kDmrsSymbol) continue;
    for (int layer = 0; layer < kLayers; ++layer) {
      const cplx* y = rx[static_cast<std::size_t>(layer)].symbol(l);
      sym[static_cast<std::size_t>(layer)].assign(y, y + m);
    }
    if (mode == CompensationMode::kCpe) {
      const cplx rot = std::polar(1.0, -estimate_cpe(rx, tx, meta, layout, l));
      for (auto& s : sym) {
        for (auto& v : s) v *= rot;
      }
    } else if (mode == CompensationMode::kIci) {
      const IciEstimate est = estimate_ici(rx, tx, meta, layout, l, half_width);
      out.ici_fallbacks += est.fallback ? 1 : 0;
      for (auto& s : sym) remove_ici(num, s, est.taps);
    }

    for (int layer = 0; layer < kLayers; ++layer) {
      const auto li = static_cast<std::size_t>(layer);
      kernels::divide(sym[li], meta.channel_estimate[li], eq);
      const cplx* x = tx.grid[li].symbol(l);
      for (int g0 = 0; g0 < m; g0 += group) {
        double err = 0.0;
        int count = 0;
        for (int k = g0; k < std::min(m, g0 + group); ++k) {
          if (tx.pilot[static_cast<std::size_t>(k)]) continue;
          err += std::norm(eq[static_cast<std::size_t>(k)] - x[k]);
          ++count;
        }
        if (count == 0) continue;
        const double mse = err / count + meta.isi_penalty;
        out.sinr.push_back(1.0 / std::max(mse, 1e-12));
      }
    }
  }
  return out;
}

}  // namespace hst::link
