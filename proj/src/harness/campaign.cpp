// SPDX-License-Identifier: Apache-2.0
#include "hst/harness/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "hst/beam/beam.hpp"
#include "hst/common/errors.hpp"
#include "hst/common/random.hpp"
#include "hst/measurements/srs.hpp"
#include "hst/scenario/deployment.hpp"
#include "hst/tracking/tracker.hpp"

namespace hst::harness {
namespace {

enum Stream : std::uint64_t {
  kReplicationStream = 1,
  kLinkStream = 2,
  kEpochStream = 3,
  kClockStream = 4,
  kLinkRealizationStream = 16,
};

// Runs task(i) for i in [0, n) on a small pool. Tasks write to their own slot,
// so the result does not depend on scheduling.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& task) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct World {
  double start_arc = 0.0;
  scenario::Track track;
  scenario::Deployment deployment;
  scenario::SpeedProfile profile;
  scenario::TrainCodebook codebook;
  std::vector<Vec2> anchors;
};

World make_world(const CampaignConfig& c) {
  const auto& s = c.scenario;
  // RRHs continue one site beyond both ends of the journey. Past the last
  // anchor of a straight line the along-track position is unobservable.
  const double margin = s.inter_site_distance_m;
  scenario::Track track = scenario::build_track(s.track_length_m + 2.0 * margin, curvature_spec(s), s.track_seed);
  scenario::Deployment dep =
      scenario::deploy_rrhs(track, s.inter_site_distance_m, s.lateral_offset_m, s.rrh_array);
  scenario::SpeedProfile profile = scenario::SpeedProfile::journey(s.track_length_m, journey_shape(s));
  std::vector<Vec2> anchors = dep.anchor_positions();
  return {margin, std::move(track), std::move(dep), std::move(profile), train_codebook(c), std::move(anchors)};
}

struct ReplicationOutput {
  PositioningResult series;
  ReplicationLog log;
};

ReplicationOutput run_replication(const CampaignConfig& c, const World& w, int rep) {
  const std::uint64_t seed = derive_seed(c.seed, kReplicationStream, static_cast<std::uint64_t>(rep));
  const std::uint64_t link_seed = derive_seed(seed, kLinkStream);
  const measurements::SrsConfig srs = srs_config(c);
  tracking::Tracker tracker(tracker_config(c));
  Rng clock_rng(derive_seed(seed, kClockStream));
  std::normal_distribution<double> step(0.0, 1.0);
  std::uniform_real_distribution<double> initial(-1e-6, 1e-6);

  ReplicationOutput out;
  out.log.replication = rep;
  const double dt = c.measurement.srs_interval_s;
  const double walk = c.measurement.clock_walk_s_per_sqrt_s * std::sqrt(dt);
  double clock = initial(clock_rng);
  const auto count = static_cast<std::size_t>(c.measurement.rrh_count);
  const auto epochs = static_cast<std::int64_t>(std::floor(w.profile.duration() / dt));
  std::vector<beam::BeamAssignment> assignments;

  for (std::int64_t k = 1; k <= epochs; ++k) {
    const double t = static_cast<double>(k) * dt;
    clock += walk * step(clock_rng);
    const scenario::TrainState state = scenario::train_state_at(w.track, w.profile, t, w.start_arc);
    const bool steered = tracker.initialized();
    const Vec2 target = steered ? tracker.predict(t) : state.position;

    assignments.clear();
    for (int id : w.deployment.nearest_by_arc(state.arc, state.position, count)) {
      assignments.push_back(beam::point_beam(w.deployment.rrhs[static_cast<std::size_t>(id)], target, t));
    }
    const auto sweep = measurements::sweep_srs(state, w.deployment, assignments, w.codebook, to_femtoseconds(clock),
                                               srs, link_seed, derive_seed(seed, kEpochStream, static_cast<std::uint64_t>(k)));

    measurements::TdoaBatch batch;
    try {
      batch = measurements::form_tdoa(sweep.observations, t);
    } catch (const InsufficientAnchors&) {
      ++out.log.skipped_epochs;
      continue;
    }
    try {
      if (tracker.process(batch, w.anchors) == tracking::TrackOutcome::kReinitialized) ++out.log.reinitializations;
    } catch (const NumericalFailure&) {
      ++out.log.numerical_failures;
    }
    if (!tracker.initialized()) continue;

    const Vec2 p = tracker.predict(t);
    const Vec2 v = tracker.estimate().velocity();
    ++out.log.epochs;
    out.series.position_error_m.add(distance(p, state.position));
    out.series.velocity_error_mps.add(distance(v, state.velocity));
    out.series.state_errors.push_back({p - state.position, v - state.velocity});
    if (steered) {
      const auto& closest = assignments.front();
      if (!closest.clamped) {
        const auto& rrh = w.deployment.rrhs[static_cast<std::size_t>(closest.rrh_id)];
        out.series.beam_error_deg.add(beam::beam_direction_error_deg(closest, rrh, state.position));
      }
    }
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

PositioningResult run_positioning_campaign(const CampaignConfig& config, unsigned workers) {
  validate(config);
  const World world = make_world(config);
  std::vector<ReplicationOutput> reps(static_cast<std::size_t>(config.replications));
  parallel_for(reps.size(), workers, [&](std::size_t i) { reps[i] = run_replication(config, world, static_cast<int>(i)); });

  PositioningResult result;
  for (auto& r : reps) {
    result.position_error_m.append(r.series.position_error_m);
    result.velocity_error_mps.append(r.series.velocity_error_mps);
    result.beam_error_deg.append(r.series.beam_error_deg);
    result.state_errors.insert(result.state_errors.end(), r.series.state_errors.begin(), r.series.state_errors.end());
    result.replications.push_back(r.log);
  }
  return result;
}

void write_positioning_outputs(const PositioningResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto* s : {&result.position_error_m, &result.velocity_error_mps, &result.beam_error_deg}) {
    emit_cdf(*s, dir / (s->name() + ".csv"));
  }
  write_text(dir / "positioning.gp",
             "set datafile separator ','\n"
             "set terminal pngcairo size 1500,450\n"
             "set output 'positioning.png'\n"
             "set multiplot layout 1,3\n"
             "set ylabel 'CDF'\n"
             "set grid\n"
             "set logscale x\n"
             "set xlabel 'position error [m]'\n"
             "plot 'position_error_m.csv' using 1:2 with lines notitle\n"
             "set xlabel 'velocity error [m/s]'\n"
             "plot 'velocity_error_mps.csv' using 1:2 with lines notitle\n"
             "set xlabel 'beam direction error [deg]'\n"
             "plot 'beam_error_deg.csv' using 1:2 with lines notitle\n"
             "unset multiplot\n");
}

const LinkPoint& LinkResult::at(double distance_m, double snr_db, link::CompensationMode mode) const {
  for (const auto& p : points) {
    if (p.distance_m == distance_m && p.snr_db == snr_db && p.mode == mode) return p;
  }
  throw std::out_of_range("no such link point");
}

link::ErrorStatistics error_statistics(const CampaignConfig& config, const PositioningResult* positioning) {
  const auto& e = config.link.errors;
  if (e.source == "ideal") return link::ErrorStatistics::ideal();
  if (e.source == "gaussian") {
    return {link::ErrorStatistics::Kind::kGaussian, e.position_sigma_m, e.velocity_sigma_mps, {}};
  }
  if (positioning == nullptr || positioning->state_errors.empty()) {
    throw ConfigError("link.errors.source=campaign needs a positioning campaign with tracked epochs");
  }
  return {link::ErrorStatistics::Kind::kEmpirical, 0.0, 0.0, positioning->state_errors};
}

LinkResult run_link_campaign(const CampaignConfig& config, const link::ErrorStatistics& errors, unsigned workers) {
  validate(config);
  link::LinkConfig lc = link_config(config);
  if (std::find(lc.modes.begin(), lc.modes.end(), link::CompensationMode::kIdeal) == lc.modes.end()) {
    lc.modes.insert(lc.modes.begin(), link::CompensationMode::kIdeal);
  }
  const std::size_t nd = lc.distances_m.size();
  const auto nr = static_cast<std::size_t>(lc.realizations);
  std::vector<link::LinkRealization> runs(nd * nr);
  parallel_for(runs.size(), workers, [&](std::size_t i) {
    const std::size_t d = i / nr;
    const std::size_t r = i % nr;
    const std::uint64_t seed = derive_seed(config.seed, kLinkRealizationStream + d, r);
    runs[i] = link::simulate_link_realization(lc, lc.distances_m[d], errors.draw(derive_seed(seed, 1)), seed);
  });

  LinkResult result;
  result.mcs = lc.mcs;
  result.realizations = lc.realizations;
  for (const auto& r : runs) {
    result.ici_fallbacks += r.ici_fallbacks;
    result.skew_exceeds_cp += r.skew_exceeds_cp ? 1 : 0;
  }
  for (std::size_t d = 0; d < nd; ++d) {
    for (std::size_t s = 0; s < lc.snr_db.size(); ++s) {
      for (std::size_t m = 0; m < lc.modes.size(); ++m) {
        double sum = 0.0, sum2 = 0.0;
        for (std::size_t r = 0; r < nr; ++r) {
          const double g = runs[d * nr + r].throughput_bps[s][m] * 1e-9;
          sum += g;
          sum2 += g * g;
        }
        const double n = static_cast<double>(nr);
        const double mean = sum / n;
        const double var = nr > 1 ? std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0)) : 0.0;
        result.points.push_back({lc.distances_m[d], lc.snr_db[s], lc.modes[m], mean, std::sqrt(var / n)});
      }
    }
  }
  return result;
}

std::string link_csv_text(const LinkResult& result) {
  std::string out = "snr_db,mode,mcs,distance_m,throughput_gbps\n";
  for (const auto& p : result.points) {
    out += format_number(p.snr_db) + "," + std::string(link::mode_name(p.mode)) + "," + std::to_string(result.mcs) + "," +
           format_number(p.distance_m) + "," + format_number(p.mean_gbps) + "\n";
  }
  return out;
}

void write_link_outputs(const LinkResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "throughput.csv", link_csv_text(result));
  std::vector<double> distances;
  for (const auto& p : result.points) {
    if (std::find(distances.begin(), distances.end(), p.distance_m) == distances.end()) distances.push_back(p.distance_m);
  }
  std::string gp =
      "set datafile separator ','\n"
      "set terminal pngcairo size 1000,450\n"
      "set output 'throughput.png'\n"
      "set xlabel 'SNR [dB]'\n"
      "set ylabel 'throughput [Gbps]'\n"
      "set grid\n"
      "set key bottom right\n"
      "set multiplot layout 1," + std::to_string(distances.size()) + "\n";
  for (double d : distances) {
    const std::string ds = format_number(d);
    gp += "set title 'distance " + ds + " m'\n";
    gp += "plot for [m in 'ideal none cpe ici'] 'throughput.csv' using "
          "(strcol(2) eq m && $4 == " + ds + " ? $1 : NaN):5 with linespoints title m\n";
  }
  gp += "unset multiplot\n";
  write_text(dir / "throughput.gp", gp);
}

}  // namespace hst::harness
