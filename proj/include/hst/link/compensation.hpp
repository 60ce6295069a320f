// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "hst/link/slot.hpp"

namespace hst::link {

enum class CompensationMode { kIdeal, kNone, kCpe, kIci };

std::string_view mode_name(CompensationMode mode);
CompensationMode parse_mode(std::string_view name);  // throws ConfigError
// The PTRS layout a receiver in this mode reads.
PtrsLayout layout_for(const OfdmNumerology& num, CompensationMode mode);

using SlotGrids = std::array<Grid, kLayers>;

// Common phase of one symbol: arg sum conj(H X) Y over the pilot subcarriers
// of both layers.
double estimate_cpe(const SlotGrids& rx, const TransmitSlot& tx, const ReceivedSlot& meta, const PtrsLayout& layout,
                    int symbol);

struct IciEstimate {
  std::vector<cplx> taps;  // spectral taps -u..u of the phase-noise process
  double condition = 1.0;
  bool fallback = false;   // ill-conditioned, taps hold the CPE only
};

inline constexpr double kIciConditionLimit = 1e6;

// Least-squares fit of Y_k = sum_l J_l (H X)_{k-l} over the interior of a
// contiguous pilot block, both layers stacked.
IciEstimate estimate_ici(const SlotGrids& rx, const TransmitSlot& tx, const ReceivedSlot& meta,
                         const PtrsLayout& layout, int symbol, int half_width = 1);

// Divides the time-domain symbol by the reconstructed phase process.
void remove_ici(const OfdmNumerology& num, std::span<cplx> symbol, std::span<const cplx> taps);

struct SlotSinr {
  std::vector<double> sinr;  // linear, per (data symbol, layer, 4-PRB group)
  int ici_fallbacks = 0;
};

// Phase correction as selected by `mode`, zero-forcing equalization with
// the DMRS channel estimate, and post-equalization SINR = 1 / MSE measured
// on the data REs.
SlotSinr equalized_sinr(const OfdmNumerology& num, const SlotGrids& rx, const TransmitSlot& tx,
                        const ReceivedSlot& meta, CompensationMode mode, int half_width = 1);

}  // namespace hst::link
