// SPDX-License-Identifier: Apache-2.0
#include "hst/channel/shadowing.hpp"

#include <cmath>
#include <stdexcept>

#include "hst/common/random.hpp"

namespace hst::channel {
namespace {

constexpr double kGrid = 1.0;  // m

// Gauss-Markov value at grid node k, written as the moving-average expansion
// of x_k = rho x_{k-1} + sqrt(1 - rho^2) w_k truncated where rho^j < 1e-8.
double node_value(std::int64_t k, std::uint64_t seed, double rho, int terms) {
  double sum = 0.0;
  double weight = 1.0;
  for (int j = 0; j < terms; ++j) {
    sum += weight * counter_normal(seed, k - j);
    weight *= rho;
  }
  return std::sqrt(1.0 - rho * rho) * sum;
}

}  // namespace

double shadowing_db(double arc_m, std::uint64_t seed, const ShadowingParams& params) {
  if (!params.enabled || params.sigma_db == 0.0) return 0.0;
  if (!(params.decorrelation_m > 0.0)) throw std::invalid_argument("decorrelation distance must be positive");
  const double rho = std::exp(-kGrid / params.decorrelation_m);
  const int terms = static_cast<int>(std::ceil(std::log(1e-8) / std::log(rho)));
  const double t = arc_m / kGrid;
  const auto k = static_cast<std::int64_t>(std::floor(t));
  const double frac = t - static_cast<double>(k);
  const double a = node_value(k, seed, rho, terms);
  if (frac == 0.0) return params.sigma_db * a;
  const double b = node_value(k + 1, seed, rho, terms);
  return params.sigma_db * ((1.0 - frac) * a + frac * b);
}

}  // namespace hst::channel
