// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

namespace hst::link {

inline constexpr int kSymbolsPerSlot = 14;
inline constexpr int kSubcarriersPerPrb = 12;
inline constexpr int kSlotsPerHalfSubframe = 4;  // at 120 kHz
inline constexpr int kDmrsSymbol = 2;

// CP-OFDM numerology at 120 kHz subcarrier spacing. Active subcarriers are
// centered on DC: subcarrier m maps to signed bin m - M/2.
struct OfdmNumerology {
  double scs_hz = 120e3;
  int prbs = 264;
  std::size_t fft_size = 4096;
  std::size_t cp_samples = 288;
  // Extra CP on the first symbol of every half subframe.
  std::size_t long_cp_extra = 256;

  int subcarriers() const { return prbs * kSubcarriersPerPrb; }
  double sample_rate() const { return scs_hz * static_cast<double>(fft_size); }
  double cp_seconds() const { return static_cast<double>(cp_samples) / sample_rate(); }
  double useful_seconds() const { return 1.0 / scs_hz; }
  std::size_t bin(int subcarrier) const;
  double frequency(int subcarrier) const;
  std::size_t cp_length(int symbol, int slot_in_half_subframe) const;
  // Sample offset of the first useful (post-CP) sample of a symbol.
  std::size_t useful_start(int symbol, int slot_in_half_subframe) const;
  std::size_t slot_samples(int slot_in_half_subframe) const;
  double nominal_slot_seconds() const { return 1e-3 / (scs_hz / 15e3); }
};

// 264 PRBs -> 4096-point FFT, 132 PRBs -> 2048. Throws ConfigError otherwise.
OfdmNumerology make_numerology(int prbs);

}  // namespace hst::link
