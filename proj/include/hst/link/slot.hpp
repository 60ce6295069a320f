// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "hst/channel/ricean.hpp"
#include "hst/link/numerology.hpp"
#include "hst/link/ptrs.hpp"

namespace hst::link {

using cplx = std::complex<double>;
inline constexpr int kLayers = 2;

// Resource grid of one slot, one layer: symbol-major, M subcarriers each.
struct Grid {
  int symbols = kSymbolsPerSlot;
  int subcarriers = 0;
  std::vector<cplx> re;

  Grid() = default;
  Grid(int subcarriers_) : subcarriers(subcarriers_), re(static_cast<std::size_t>(kSymbolsPerSlot * subcarriers_)) {}
  cplx* symbol(int l) { return re.data() + static_cast<std::ptrdiff_t>(l) * subcarriers; }
  const cplx* symbol(int l) const { return re.data() + static_cast<std::ptrdiff_t>(l) * subcarriers; }
};

// Transmitted slot: DMRS on symbol 2, PTRS pilots on the subcarriers of both
// layouts in all other symbols, QAM data elsewhere. Layers carry independent data.
struct TransmitSlot {
  std::array<Grid, kLayers> grid;
  std::vector<bool> pilot;  // per subcarrier, true for any PTRS position
  int bits_per_symbol = 8;
};

TransmitSlot make_transmit_slot(const OfdmNumerology& num, int bits_per_symbol, std::uint64_t seed);

// Unit-power Gray square QAM point for the given label.
cplx qam_point(int bits_per_symbol, unsigned label);

// One RRH's contribution at the train after precompensation.
struct SfnPath {
  std::array<channel::ChannelResponse, kLayers> channel;
  double reference_delay = 0.0;  // delay the network compensated
  double amplitude = 1.0;        // large-scale amplitude
  double residual_doppler_hz = 0.0;
  std::vector<double> tx_phase_noise;  // per slot sample; empty for none
};

struct ReceivedSlot {
  std::array<Grid, kLayers> grid;      // noiseless received grid
  std::array<std::vector<cplx>, kLayers> channel_estimate;
  double signal_power = 0.0;   // mean ideal composite |H|^2 per RE
  double isi_penalty = 0.0;    // extra MSE from arrival skew beyond the CP
  bool skew_exceeds_cp = false;
};

// Sum over RRHs of channel-filtered, phase-noisy, frequency-shifted symbols,
// then the common receiver phase noise. The channel estimate is the composite
// response scaled by each path's mean phase factor over the DMRS symbol.
ReceivedSlot sfn_ofdm_slot(const OfdmNumerology& num, int slot_in_half_subframe, const TransmitSlot& tx,
                           const std::vector<SfnPath>& paths, const std::vector<double>& rx_phase_noise);

// Unit-variance complex Gaussian noise grids, one per layer.
std::array<Grid, kLayers> unit_noise(const OfdmNumerology& num, std::uint64_t seed);

}  // namespace hst::link
