// SPDX-License-Identifier: Apache-2.0
#include "hst/channel/propagation.hpp"

#include <cmath>
#include <stdexcept>

namespace hst::channel {

double path_loss_db(double distance_m, double carrier_hz) {
  if (!(distance_m >= 1.0)) throw std::domain_error("path loss needs a distance of at least 1 m");
  if (!(carrier_hz > 0.0)) throw std::domain_error("carrier frequency must be positive");
  return 32.4 + 21.0 * std::log10(distance_m) + 20.0 * std::log10(carrier_hz / 1e9);
}

double thermal_noise_dbm(double bandwidth_hz, double noise_figure_db) {
  if (!(bandwidth_hz > 0.0)) throw std::domain_error("bandwidth must be positive");
  return kThermalNoiseDbmPerHz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

double doppler_shift_hz(const Vec2& velocity, const Vec2& unit_toward_peer, double carrier_hz) {
  return dot(velocity, unit_toward_peer) * carrier_hz / kSpeedOfLight;
}

double LinkBudget::closed_snr_db() const {
  return tx_power_dbm + tx_gain_db + rx_gain_db - path_loss_db - shadowing_db -
         thermal_noise_dbm(bandwidth_hz, noise_figure_db);
}

LinkBudget link_budget(double distance_m, const LinkParams& params) {
  LinkBudget b;
  b.distance = distance_m;
  b.carrier_hz = params.carrier_hz;
  b.path_loss_db = path_loss_db(std::max(distance_m, 1.0), params.carrier_hz);
  b.shadowing_db = params.shadowing_db;
  b.tx_power_dbm = params.tx_power_dbm;
  b.tx_gain_db = params.tx_gain_db;
  b.rx_gain_db = params.rx_gain_db;
  b.noise_figure_db = params.noise_figure_db;
  b.bandwidth_hz = params.bandwidth_hz;
  b.snr_db = b.closed_snr_db();
  return b;
}

LinkBudget link_budget(const Vec2& tx, const Vec2& rx, const LinkParams& params) {
  return link_budget(distance(tx, rx), params);
}

}  // namespace hst::channel
