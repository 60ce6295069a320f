// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "hst/beam/beam.hpp"
#include "hst/common/errors.hpp"
#include "hst/common/random.hpp"
#include "hst/measurements/srs.hpp"
#include "hst/measurements/toa_estimator.hpp"
#include "hst/scenario/deployment.hpp"

using namespace hst;
using namespace hst::measurements;
using Catch::Approx;

namespace {

struct Setup {
  scenario::Track track = scenario::build_track(10000.0, scenario::CurvatureSpec::straight(), 1);
  scenario::Deployment deployment = scenario::deploy_rrhs(track, 580.0, 5.0);
  scenario::TrainCodebook codebook = scenario::TrainCodebook::sweep({4, 4, 0.5}, deg2rad(60.0));

  scenario::TrainState state_at(double x) const {
    scenario::TrainState s;
    s.arc = x;
    s.position = {x, 0.0};
    s.velocity = {138.889, 0.0};
    s.speed = 138.889;
    return s;
  }

  std::vector<beam::BeamAssignment> assignments(const scenario::TrainState& s, std::size_t count) const {
    std::vector<beam::BeamAssignment> out;
    for (int id : deployment.nearest(s.position, count)) {
      out.push_back(beam::point_beam(deployment.rrhs[static_cast<std::size_t>(id)], s.position));
    }
    return out;
  }
};

ToaObservation obs(int id, double toa_s, double snr_db, double variance) {
  ToaObservation o;
  o.rrh_id = id;
  o.toa = to_femtoseconds(toa_s);
  o.snr_db = snr_db;
  o.variance = variance;
  return o;
}

}  // namespace

TEST_CASE("TOA variance CRLB closed form") {
  const double v = toa_variance(10.0, 400e6);
  const double oracle = 1.0 / (8.0 * kPi * kPi * (400e6 * 400e6 / 12.0) * 10.0);
  CHECK(v == Approx(oracle).epsilon(1e-14));
  CHECK(v == Approx(9.50e-20).epsilon(0.005));
  CHECK(std::sqrt(v) * kSpeedOfLight == Approx(0.0923).margin(5e-4));
  CHECK(toa_variance(10.0, 200e6) == Approx(4.0 * v));
  CHECK(toa_variance(100.0, 400e6) == Approx(v / 10.0));
  CHECK_THROWS_AS(toa_variance(0.0, 400e6), std::domain_error);
  CHECK_THROWS_AS(toa_variance(1.0, -1.0), std::domain_error);
}

TEST_CASE("noise-free TOA is geometric delay plus clock offset") {
  scenario::Deployment d;
  scenario::Rrh r;
  r.id = 0;
  r.position = {299.792458, 0.0};
  r.boresight = {kPi, kPi};
  d.rrhs.push_back(r);
  scenario::TrainState s;
  const beam::BeamAssignment a = beam::point_beam(r, s.position);
  SrsConfig cfg;
  cfg.noise_enabled = false;
  const auto book = scenario::TrainCodebook::sweep({4, 4, 0.5}, deg2rad(60.0));
  const auto res = sweep_srs(s, d, std::span(&a, 1), book, to_femtoseconds(1e-6), cfg, 1, 2);
  REQUIRE(res.observations.size() == 1);
  CHECK(res.observations[0].toa == to_femtoseconds(2e-6));
}

TEST_CASE("sweep picks the codebook beam closest to the RRH direction") {
  Setup s;
  // Abreast of RRH 2 (at x=1160, y=+5), so the RRH is 90 degrees off the nose.
  const auto st = s.state_at(1160.0);
  const auto asg = s.assignments(st, 5);
  const auto res = sweep_srs(st, s.deployment, asg, s.codebook, Femtoseconds{0}, {}, 3, 4);
  REQUIRE(res.observations.size() == 5);
  for (std::size_t i = 0; i < res.observations.size(); ++i) {
    const auto& o = res.observations[i];
    const Vec2 toward = s.deployment.rrhs[static_cast<std::size_t>(o.rrh_id)].position - st.position;
    // Brute force over the codebook.
    std::size_t best = 0;
    for (std::size_t b = 1; b < s.codebook.size(); ++b) {
      if (s.codebook.gain_db(b, st.heading, toward.bearing()) > s.codebook.gain_db(best, st.heading, toward.bearing())) best = b;
    }
    // Endfire directions alias between mirrored beams, so compare gains.
    CHECK(s.codebook.gain_db(static_cast<std::size_t>(o.train_beam_index), st.heading, toward.bearing()) ==
          Approx(s.codebook.gain_db(best, st.heading, toward.bearing())).margin(1e-9));
  }
  // For the abreast RRH that is the +60 degree edge beam of the nose panel.
  const auto abreast = std::find_if(res.observations.begin(), res.observations.end(), [](const auto& o) { return o.rrh_id == 2; });
  REQUIRE(abreast != res.observations.end());
  const auto& beam = s.codebook.beams[static_cast<std::size_t>(abreast->train_beam_index)];
  CHECK(std::abs(beam.relative_azimuth) == Approx(deg2rad(60.0)));
}

TEST_CASE("weak links fall below the SNR floor") {
  Setup s;
  const auto st = s.state_at(1000.0);
  SrsConfig cfg;
  cfg.snr_floor_db = 200.0;
  CHECK(sweep_srs(st, s.deployment, s.assignments(st, 5), s.codebook, Femtoseconds{0}, cfg, 1, 1).observations.empty());
}

TEST_CASE("equidistant RRHs give zero TDOA for any clock offset") {
  const double toa = 1e-6;
  for (double offset : {0.0, 3.3e-7, -1e-3}) {
    std::vector<ToaObservation> o{obs(0, toa + offset, 30.0, 1e-20), obs(1, toa + offset, 20.0, 1e-20),
                                  obs(2, 2e-6 + offset, 10.0, 1e-20)};
    const TdoaBatch b = form_tdoa(o);
    CHECK(b.reference_rrh_id == 0);
    CHECK(b.pairs[0].tdoa.count() == 0);
  }
}

TEST_CASE("TDOA geometric example") {
  const Vec2 train{0.0, 0.0}, ref{100.0, 5.0}, other{-480.0, -5.0}, third{660.0, 5.0};
  std::vector<ToaObservation> o{obs(0, distance(train, ref) / kSpeedOfLight, 30.0, 1e-20),
                                obs(1, distance(train, other) / kSpeedOfLight, 10.0, 1e-20),
                                obs(2, distance(train, third) / kSpeedOfLight, 5.0, 1e-20)};
  const TdoaBatch b = form_tdoa(o);
  CHECK(b.reference_rrh_id == 0);
  CHECK(b.pairs[0].tdoa_seconds() == Approx((480.026 - 100.125) / kSpeedOfLight).epsilon(1e-5));
  CHECK(b.pairs[0].tdoa_seconds() * 1e9 == Approx(1267.2).margin(0.05));
}

TEST_CASE("TDOA covariance is diag plus the reference variance") {
  const double v = 2e-20;
  std::vector<ToaObservation> o{obs(0, 1e-6, 30.0, v), obs(1, 2e-6, 20.0, v), obs(2, 3e-6, 10.0, v), obs(3, 4e-6, 5.0, v)};
  const TdoaBatch b = form_tdoa(o);
  const Eigen::MatrixXd expected = v * (Eigen::MatrixXd::Identity(3, 3) + Eigen::MatrixXd::Ones(3, 3));
  CHECK((b.covariance - expected).cwiseAbs().maxCoeff() < 1e-35);
}

TEST_CASE("form_tdoa needs three observations") {
  std::vector<ToaObservation> o{obs(0, 1e-6, 30.0, 1e-20), obs(1, 2e-6, 20.0, 1e-20)};
  CHECK_THROWS_AS(form_tdoa(o), InsufficientAnchors);
}

TEST_CASE("clock offset cancels bit-exactly in campaign measurements") {
  Setup s;
  Rng rng(77);
  std::uniform_real_distribution<double> x(600.0, 9000.0), off(-1e-3, 1e-3);
  for (int i = 0; i < 500; ++i) {
    const auto st = s.state_at(x(rng));
    const auto asg = s.assignments(st, 5);
    const auto a = sweep_srs(st, s.deployment, asg, s.codebook, Femtoseconds{0}, {}, 9, static_cast<std::uint64_t>(i));
    const auto b = sweep_srs(st, s.deployment, asg, s.codebook, to_femtoseconds(off(rng)), {}, 9, static_cast<std::uint64_t>(i));
    const TdoaBatch ba = form_tdoa(a.observations);
    const TdoaBatch bb = form_tdoa(b.observations);
    REQUIRE(ba.pairs.size() == bb.pairs.size());
    for (std::size_t k = 0; k < ba.pairs.size(); ++k) REQUIRE(ba.pairs[k].tdoa == bb.pairs[k].tdoa);
    REQUIRE((ba.covariance.array() == bb.covariance.array()).all());
  }
}

TEST_CASE("batch covariances are positive definite") {
  Setup s;
  Rng rng(78);
  std::uniform_real_distribution<double> x(600.0, 9000.0);
  for (int i = 0; i < 500; ++i) {
    const auto st = s.state_at(x(rng));
    const auto res = sweep_srs(st, s.deployment, s.assignments(st, 5), s.codebook, Femtoseconds{0}, {}, 9,
                               static_cast<std::uint64_t>(i));
    const TdoaBatch b = form_tdoa(res.observations);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.covariance);
    REQUIRE(es.eigenvalues().minCoeff() > 0.0);
    REQUIRE(b.covariance.isApprox(b.covariance.transpose()));
  }
}

TEST_CASE("estimated TOA noise follows the CRLB") {
  Setup s;
  const auto st = s.state_at(2000.0);
  const auto asg = s.assignments(st, 3);
  SrsConfig cfg;
  cfg.shadowing.enabled = false;
  std::vector<double> err;
  double crlb = 0.0;
  for (int i = 0; i < 4000; ++i) {
    const auto res = sweep_srs(st, s.deployment, asg, s.codebook, Femtoseconds{0}, cfg, 1, static_cast<std::uint64_t>(i));
    const auto& o = res.observations[0];
    const double geo = distance(st.position, s.deployment.rrhs[static_cast<std::size_t>(o.rrh_id)].position) / kSpeedOfLight;
    err.push_back(o.toa_seconds() - geo);
    crlb = toa_variance(std::pow(10.0, o.snr_db / 10.0), cfg.bandwidth_hz);
  }
  double m2 = 0.0;
  for (double e : err) m2 += e * e;
  CHECK(m2 / static_cast<double>(err.size()) == Approx(crlb).epsilon(0.1));
}

TEST_CASE("cross-correlation estimator approaches the CRLB") {
  for (double snr : {10.0, 20.0, 30.0}) {
    const CrlbTrial t = validate_crlb(400e6, snr, 400, 5);
    INFO("snr " << snr << " crlb " << t.crlb_std_s << " empirical " << t.empirical_std_s);
    CHECK(t.empirical_std_s < 2.0 * t.crlb_std_s);
    CHECK(t.empirical_std_s > 0.5 * t.crlb_std_s);
  }
  CHECK(validate_crlb(400e6, 10.0, 2, 1).crlb_std_s == Approx(0.308e-9).epsilon(0.002));
}

TEST_CASE("noiseless estimator recovers the delay exactly") {
  const ReferenceSignal ref = make_reference_signal(400e6, 512, 2, 3);
  const double tau = 7.3 / ref.sample_rate_hz;
  std::vector<std::complex<double>> rx(ref.size());
  for (std::size_t k = 0; k < rx.size(); ++k) rx[k] = ref.spectrum[k] * std::polar(1.0, -2.0 * kPi * ref.frequency[k] * tau);
  CHECK(estimate_delay(ref, rx, 7.0 / ref.sample_rate_hz, 2.0 / ref.sample_rate_hz) == Approx(tau).epsilon(1e-9));
}
