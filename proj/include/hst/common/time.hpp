// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ratio>

namespace hst {

// Timing observations are kept on an integer femtosecond grid so that
// differencing against a reference cancels a common clock offset exactly.
using Femtoseconds = std::chrono::duration<std::int64_t, std::femto>;

inline Femtoseconds to_femtoseconds(double seconds) {
  return Femtoseconds{std::llround(seconds * 1e15)};
}

inline double to_seconds(Femtoseconds t) { return static_cast<double>(t.count()) * 1e-15; }

}  // namespace hst
