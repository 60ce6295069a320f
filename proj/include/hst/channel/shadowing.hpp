// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace hst::channel {

struct ShadowingParams {
  double sigma_db = 4.0;
  double decorrelation_m = 10.0;
  bool enabled = true;
};

// Zero-mean Gaussian field over the along-track coordinate with exponential
// autocorrelation sigma^2 exp(-|lag| / decorrelation). Stateless: the value at
// any position depends only on (position, seed), so epochs can be evaluated
// in any order.
double shadowing_db(double arc_m, std::uint64_t seed, const ShadowingParams& params = {});

}  // namespace hst::channel
