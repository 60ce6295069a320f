// SPDX-License-Identifier: Apache-2.0
#include "hst/link/link_sim.hpp"

#include <algorithm>
#include <cmath>

#include "hst/beam/beam.hpp"
#include "hst/channel/propagation.hpp"
#include "hst/channel/ricean.hpp"
#include "hst/common/random.hpp"
#include "hst/link/precompensation.hpp"
#include "hst/link/throughput.hpp"
#include "hst/scenario/deployment.hpp"

namespace hst::link {

StateError ErrorStatistics::draw(std::uint64_t seed) const {
  switch (kind) {
    case Kind::kIdeal: return {};
    case Kind::kGaussian:
      return {{position_sigma_m * counter_normal(seed, 0), position_sigma_m * counter_normal(seed, 1)},
              {velocity_sigma_mps * counter_normal(seed, 2), velocity_sigma_mps * counter_normal(seed, 3)}};
    case Kind::kEmpirical:
      if (samples.empty()) return {};
      return samples[static_cast<std::size_t>(mix64(seed) % samples.size())];
  }
  return {};
}

LinkRealization simulate_link_realization(const LinkConfig& config, double distance_m, const StateError& error,
                                          std::uint64_t seed) {
  const OfdmNumerology num = make_numerology(config.prbs);
  const McsEntry& mcs = mcs_entry(config.mcs);
  const int slot_in_half = static_cast<int>(mix64(seed) % kSlotsPerHalfSubframe);
  const std::size_t slot_len = num.slot_samples(slot_in_half);

  const auto track = scenario::build_track(2.0 * config.inter_site_distance, scenario::CurvatureSpec::straight(), 0);
  const auto deployment =
      scenario::deploy_rrhs(track, config.inter_site_distance, config.lateral_offset, config.rrh_array);
  const auto codebook = scenario::TrainCodebook::sweep(config.train_array, config.train_sweep_span_rad);

  const Vec2 position = track.position_at(distance_m);
  const double heading = track.heading_at(distance_m);
  const Vec2 velocity = Vec2::from_polar(config.speed_mps, heading);
  const Vec2 est_position = position + error.position;
  const Vec2 est_velocity = velocity + error.velocity;

  const bool pn = config.phase_noise_enabled && config.phase_noise.enabled();
  LinkRealization out;
  std::vector<SfnPath> paths, ideal_paths;
  for (int a = 0; a < 2; ++a) {
    const auto& rrh = deployment.rrhs[static_cast<std::size_t>(a)];
    const LinkEstimate truth = estimate_link(position, velocity, rrh.position, config.carrier_hz);
    const LinkEstimate est = estimate_link(est_position, est_velocity, rrh.position, config.carrier_hz);
    const LinkResidual res = residual(truth, est);
    out.residual_doppler_hz.push_back(res.doppler_hz);
    out.residual_delay_s.push_back(res.delay_s);

    const auto assignment = beam::point_beam(rrh, est_position);
    double train_gain = -1e9;
    const double toward = (rrh.position - position).bearing();
    for (std::size_t b = 0; b < codebook.size(); ++b) train_gain = std::max(train_gain, codebook.gain_db(b, heading, toward));
    const double gain_db = beam::rrh_gain_db(rrh, assignment, position) + train_gain -
                           channel::path_loss_db((rrh.position - position).norm(), config.carrier_hz);

    // One LOS phase per RRH (carrier phase plus path length, uniform at
    // this wavelength), shared by both polarizations; diffuse taps per layer.
    const double los_phase = 2.0 * kPi * counter_uniform(derive_seed(seed, 0x6c6f73ULL, a));
    SfnPath p;
    for (int layer = 0; layer < kLayers; ++layer) {
      p.channel[static_cast<std::size_t>(layer)] =
          channel::ricean_channel(truth.delay_s, los_phase, config.k_factor_db, config.delay_spread_s,
                                  derive_seed(seed, 0x636861ULL, 2 * a + layer));
    }
    p.amplitude = std::pow(10.0, gain_db / 20.0);
    SfnPath ideal = p;
    ideal.reference_delay = truth.delay_s;

    p.reference_delay = est.delay_s;
    p.residual_doppler_hz = res.doppler_hz;
    if (pn) p.tx_phase_noise = phase_noise_trace(config.phase_noise, slot_len, num.sample_rate(), derive_seed(seed, 0x706e7478ULL, a));
    paths.push_back(std::move(p));
    ideal_paths.push_back(std::move(ideal));
  }
  // Only the relative amplitudes matter; the SNR axis is the composite SNR.
  const double norm = std::hypot(paths[0].amplitude, paths[1].amplitude);
  for (auto* set : {&paths, &ideal_paths}) {
    for (auto& p : *set) p.amplitude /= norm;
  }

  std::vector<double> rx_pn;
  if (pn) rx_pn = phase_noise_trace(config.phase_noise, slot_len, num.sample_rate(), derive_seed(seed, 0x706e7278ULL));

  const TransmitSlot tx = make_transmit_slot(num, mcs.bits_per_symbol, derive_seed(seed, 0x6461746155ULL));
  const bool need_ideal = std::find(config.modes.begin(), config.modes.end(), CompensationMode::kIdeal) != config.modes.end();
  const ReceivedSlot impaired = sfn_ofdm_slot(num, slot_in_half, tx, paths, rx_pn);
  ReceivedSlot clean;
  if (need_ideal) clean = sfn_ofdm_slot(num, slot_in_half, tx, ideal_paths, {});
  out.skew_exceeds_cp = impaired.skew_exceeds_cp;
  const auto noise = unit_noise(num, derive_seed(seed, 0x6e6f6973ULL));

  const double slot_s = num.nominal_slot_seconds();
  SlotGrids noisy;
  for (double snr_db : config.snr_db) {
    std::vector<double> row;
    for (CompensationMode mode : config.modes) {
      const ReceivedSlot& src = mode == CompensationMode::kIdeal ? clean : impaired;
      const double sigma = std::sqrt(src.signal_power / channel::db_to_linear(snr_db));
      for (int layer = 0; layer < kLayers; ++layer) {
        const auto li = static_cast<std::size_t>(layer);
        noisy[li] = src.grid[li];
        for (std::size_t i = 0; i < noisy[li].re.size(); ++i) noisy[li].re[i] += sigma * noise[li].re[i];
      }
      const auto eq_mode = mode == CompensationMode::kIdeal ? CompensationMode::kNone : mode;
      const SlotSinr s = equalized_sinr(num, noisy, tx, src, eq_mode, config.ici_half_width);
      out.ici_fallbacks += s.ici_fallbacks;
      row.push_back(slot_throughput_bps(s.sinr, mcs, config.prbs, kLayers, slot_s));
    }
    out.throughput_bps.push_back(std::move(row));
  }
  return out;
}

}  // namespace hst::link
