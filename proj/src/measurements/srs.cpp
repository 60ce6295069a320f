// SPDX-License-Identifier: Apache-2.0
#include "hst/measurements/srs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hst/channel/propagation.hpp"
#include "hst/common/errors.hpp"
#include "hst/common/random.hpp"

namespace hst::measurements {

double toa_variance(double snr_linear, double bandwidth_hz) {
  if (!(snr_linear > 0.0)) throw std::domain_error("SNR must be positive");
  if (!(bandwidth_hz > 0.0)) throw std::domain_error("bandwidth must be positive");
  const double beta2 = bandwidth_hz * bandwidth_hz / 12.0;
  return 1.0 / (8.0 * kPi * kPi * beta2 * snr_linear);
}

SweepResult sweep_srs(const scenario::TrainState& state, const scenario::Deployment& deployment,
                      std::span<const beam::BeamAssignment> assignments,
                      const scenario::TrainCodebook& codebook, Femtoseconds clock_offset,
                      const SrsConfig& config, std::uint64_t link_seed, std::uint64_t epoch_seed) {
  if (codebook.size() == 0) throw std::invalid_argument("empty train codebook");
  SweepResult result;
  for (const auto& a : assignments) {
    const scenario::Rrh& rrh = deployment.rrhs.at(static_cast<std::size_t>(a.rrh_id));
    const Vec2 to_rrh = rrh.position - state.position;
    const double d = to_rrh.norm();
    const double toward = to_rrh.bearing();

    channel::LinkParams lp;
    lp.carrier_hz = config.carrier_hz;
    lp.bandwidth_hz = config.bandwidth_hz;
    lp.tx_power_dbm = config.tx_power_dbm;
    lp.noise_figure_db = config.rrh_noise_figure_db;
    lp.rx_gain_db = beam::rrh_gain_db(rrh, a, state.position);
    lp.shadowing_db = channel::shadowing_db(state.arc, derive_seed(link_seed, 0x736861ULL, static_cast<std::uint64_t>(rrh.id)),
                                            config.shadowing);
    const double base_snr = channel::link_budget(d, lp).snr_db;
    const double noise_dbm = channel::thermal_noise_dbm(config.bandwidth_hz, config.rrh_noise_figure_db);

    std::vector<beam::SweepCandidate> candidates;
    candidates.reserve(codebook.size());
    for (std::size_t i = 0; i < codebook.size(); ++i) {
      const double snr = base_snr + codebook.gain_db(i, state.heading, toward);
      candidates.push_back({static_cast<int>(i), snr + noise_dbm});
    }
    const int best = beam::select_train_beam(candidates, 0);
    const double snr_db = candidates[static_cast<std::size_t>(best)].received_power_dbm - noise_dbm;
    result.candidates.push_back(std::move(candidates));
    if (snr_db < config.snr_floor_db) continue;

    Rng rng(derive_seed(epoch_seed, 0x746f61ULL, static_cast<std::uint64_t>(rrh.id)));
    std::normal_distribution<double> unit;
    const double timing_noise = unit(rng);
    const double snr_error = unit(rng);

    ToaObservation obs;
    obs.rrh_id = rrh.id;
    obs.snr_db = snr_db;
    obs.train_beam_index = best;
    obs.snr_estimate_db = snr_db + config.snr_estimate_error_db * snr_error;
    obs.variance = toa_variance(channel::db_to_linear(obs.snr_estimate_db), config.bandwidth_hz);
    // Each term is rounded on its own so the clock offset survives differencing exactly.
    Femtoseconds toa = to_femtoseconds(d / kSpeedOfLight);
    if (config.noise_enabled) {
      const double sigma = std::sqrt(toa_variance(channel::db_to_linear(snr_db), config.bandwidth_hz));
      toa += to_femtoseconds(sigma * timing_noise);
    }
    obs.toa = toa + clock_offset;
    result.observations.push_back(obs);
  }
  return result;
}

TdoaBatch form_tdoa(std::span<const ToaObservation> observations, double epoch_time) {
  if (observations.size() < 3) throw InsufficientAnchors("TDOA needs at least three RRHs");
  const auto ref = std::max_element(observations.begin(), observations.end(), [](const auto& a, const auto& b) {
    return a.snr_db < b.snr_db || (a.snr_db == b.snr_db && a.rrh_id > b.rrh_id);
  });
  TdoaBatch batch;
  batch.epoch_time = epoch_time;
  batch.reference_rrh_id = ref->rrh_id;
  batch.reference_variance = ref->variance;
  for (const auto& o : observations) {
    if (&o == &*ref) continue;
    batch.pairs.push_back({o.rrh_id, o.toa - ref->toa, o.variance});
  }
  const auto m = static_cast<Eigen::Index>(batch.pairs.size());
  batch.covariance = Eigen::MatrixXd::Constant(m, m, ref->variance);
  for (Eigen::Index i = 0; i < m; ++i) batch.covariance(i, i) += batch.pairs[static_cast<std::size_t>(i)].variance;
  return batch;
}

}  // namespace hst::measurements
