// SPDX-License-Identifier: Apache-2.0
#include "hst/channel/ricean.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hst/common/geometry.hpp"
#include "hst/common/random.hpp"

namespace hst::channel {
namespace {

// Diffuse taps decay by one neper every kDecayTaps taps.
constexpr double kDecayTaps = 6.0;

}  // namespace

double ChannelResponse::total_power() const {
  double p = 0.0;
  for (const auto& t : taps) p += std::norm(t.gain);
  return p;
}

std::complex<double> ChannelResponse::frequency_response(double f_hz, double reference_delay) const {
  std::complex<double> h{0.0, 0.0};
  for (const auto& t : taps) h += t.gain * std::polar(1.0, -2.0 * kPi * f_hz * (t.delay - reference_delay));
  return h;
}

void ChannelResponse::frequency_response(std::span<const double> f_hz, double reference_delay,
                                         std::span<std::complex<double>> out) const {
  if (f_hz.size() != out.size()) throw std::invalid_argument("frequency/output size mismatch");
  for (std::size_t i = 0; i < f_hz.size(); ++i) out[i] = frequency_response(f_hz[i], reference_delay);
}

double rms_delay_spread(std::span<const double> delay, std::span<const double> power) {
  const double total = std::accumulate(power.begin(), power.end(), 0.0);
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < delay.size(); ++i) {
    m1 += power[i] * delay[i];
    m2 += power[i] * delay[i] * delay[i];
  }
  m1 /= total;
  m2 /= total;
  return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

PowerDelayProfile ricean_profile(double k_factor_db, double delay_spread_s) {
  if (!std::isfinite(k_factor_db)) throw std::invalid_argument("K factor must be finite");
  if (!(delay_spread_s > 0.0)) throw std::invalid_argument("delay spread must be positive");
  PowerDelayProfile pdp;
  if (k_factor_db > kPureLosKDb) {
    pdp.delay = {0.0};
    pdp.power = {1.0};
    return pdp;
  }
  const double k = std::pow(10.0, k_factor_db / 10.0);
  pdp.delay.assign(kDiffuseTaps + 1, 0.0);
  pdp.power.assign(kDiffuseTaps + 1, 0.0);
  pdp.power[0] = k / (k + 1.0);
  double diffuse = 0.0;
  for (int m = 1; m <= kDiffuseTaps; ++m) diffuse += std::exp(-(m - 1) / kDecayTaps);
  for (int m = 1; m <= kDiffuseTaps; ++m) {
    pdp.delay[static_cast<std::size_t>(m)] = m;
    pdp.power[static_cast<std::size_t>(m)] = std::exp(-(m - 1) / kDecayTaps) / diffuse / (k + 1.0);
  }
  // The spread of a fixed shape is linear in the tap spacing.
  const double spacing = delay_spread_s / rms_delay_spread(pdp.delay, pdp.power);
  for (auto& d : pdp.delay) d *= spacing;
  return pdp;
}

ChannelResponse ricean_channel(double los_delay_s, double k_factor_db, double delay_spread_s,
                               std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x6c6f73ULL));
  std::uniform_real_distribution<double> phase(-kPi, kPi);
  return ricean_channel(los_delay_s, phase(rng), k_factor_db, delay_spread_s, seed);
}

ChannelResponse ricean_channel(double los_delay_s, double los_phase_rad, double k_factor_db, double delay_spread_s,
                               std::uint64_t seed) {
  const PowerDelayProfile pdp = ricean_profile(k_factor_db, delay_spread_s);
  ChannelResponse r;
  r.k_factor_db = k_factor_db;
  r.rms_delay_spread_s = pdp.delay.size() > 1 ? delay_spread_s : 0.0;
  Rng rng(derive_seed(seed, 0x726963ULL));
  r.taps.push_back({los_delay_s, std::polar(std::sqrt(pdp.power[0]), los_phase_rad)});
  if (pdp.delay.size() == 1) return r;

  double drawn = 0.0;
  for (std::size_t m = 1; m < pdp.delay.size(); ++m) {
    const auto g = complex_normal(rng, pdp.power[m]);
    drawn += std::norm(g);
    r.taps.push_back({los_delay_s + pdp.delay[m], g});
  }
  const double target = 1.0 - pdp.power[0];
  const double fix = std::sqrt(target / drawn);
  for (std::size_t m = 1; m < r.taps.size(); ++m) r.taps[m].gain *= fix;
  return r;
}

}  // namespace hst::channel
