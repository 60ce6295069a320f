// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "hst/common/geometry.hpp"

namespace hst::channel {

inline constexpr double kThermalNoiseDbmPerHz = -174.0;

// Urban-micro street-canyon LOS path loss. Throws std::domain_error below 1 m.
double path_loss_db(double distance_m, double carrier_hz);

double thermal_noise_dbm(double bandwidth_hz, double noise_figure_db);

// f_d = (v . u) f_c / c, u pointing from this end toward the peer.
double doppler_shift_hz(const Vec2& velocity, const Vec2& unit_toward_peer, double carrier_hz);

struct LinkBudget {
  double distance = 0.0;  // m
  double carrier_hz = 30e9;
  double path_loss_db = 0.0;
  double shadowing_db = 0.0;
  double tx_power_dbm = 30.0;
  double tx_gain_db = 0.0;
  double rx_gain_db = 0.0;
  double noise_figure_db = 9.0;
  double bandwidth_hz = 400e6;
  double snr_db = 0.0;

  // SNR recomputed from the stored fields; identical to snr_db.
  double closed_snr_db() const;
};

struct LinkParams {
  double carrier_hz = 30e9;
  double tx_power_dbm = 30.0;
  double tx_gain_db = 0.0;
  double rx_gain_db = 0.0;
  double noise_figure_db = 9.0;
  double bandwidth_hz = 400e6;
  double shadowing_db = 0.0;
};

LinkBudget link_budget(double distance_m, const LinkParams& params);
LinkBudget link_budget(const Vec2& tx, const Vec2& rx, const LinkParams& params);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace hst::channel
