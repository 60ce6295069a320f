// SPDX-License-Identifier: Apache-2.0
#include "hst/link/numerology.hpp"

#include <string>

#include "hst/common/errors.hpp"
#include "hst/dsp/fft.hpp"

namespace hst::link {

std::size_t OfdmNumerology::bin(int subcarrier) const {
  return dsp::bin_of(static_cast<long>(subcarrier) - subcarriers() / 2, fft_size);
}

double OfdmNumerology::frequency(int subcarrier) const {
  return static_cast<double>(subcarrier - subcarriers() / 2) * scs_hz;
}

std::size_t OfdmNumerology::cp_length(int symbol, int slot_in_half_subframe) const {
  return cp_samples + (symbol == 0 && slot_in_half_subframe == 0 ? long_cp_extra : 0);
}

std::size_t OfdmNumerology::useful_start(int symbol, int slot_in_half_subframe) const {
  std::size_t n = 0;
  for (int l = 0; l < symbol; ++l) n += cp_length(l, slot_in_half_subframe) + fft_size;
  return n + cp_length(symbol, slot_in_half_subframe);
}

std::size_t OfdmNumerology::slot_samples(int slot_in_half_subframe) const {
  return useful_start(kSymbolsPerSlot - 1, slot_in_half_subframe) + fft_size;
}

OfdmNumerology make_numerology(int prbs) {
  OfdmNumerology n;
  n.prbs = prbs;
  if (prbs == 264) {
    n.fft_size = 4096;
    n.cp_samples = 288;
    n.long_cp_extra = 256;
  } else if (prbs == 132) {
    n.fft_size = 2048;
    n.cp_samples = 144;
    n.long_cp_extra = 128;
  } else {
    throw ConfigError("allocation must be 132 or 264 PRBs, got " + std::to_string(prbs));
  }
  return n;
}

}  // namespace hst::link
