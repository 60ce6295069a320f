// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "hst/link/numerology.hpp"

namespace hst::link {

enum class PtrsKind { kNone, kDistributed, kBlock };

inline constexpr int kPtrsSubcarriers = 48;
inline constexpr int kBlockPtrsPrbs = 4;

// PTRS subcarriers, identical on every data symbol and on both layers.
struct PtrsLayout {
  PtrsKind kind = PtrsKind::kNone;
  std::vector<int> subcarriers;  // ascending
};

// Every (M/48)-th subcarrier across the allocation.
PtrsLayout distributed_ptrs(const OfdmNumerology& num, int count = kPtrsSubcarriers);
// One contiguous run of 4 PRBs in the middle of the allocation.
PtrsLayout block_ptrs(const OfdmNumerology& num, int prbs = kBlockPtrsPrbs);

}  // namespace hst::link
