// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hst/beam/beam.hpp"
#include "hst/common/random.hpp"
#include "hst/scenario/deployment.hpp"

using namespace hst;
using namespace hst::beam;
using Catch::Approx;

namespace {

scenario::Deployment straight_deployment(double length = 5000.0) {
  return scenario::deploy_rrhs(scenario::build_track(length, scenario::CurvatureSpec::straight(), 1), 580.0, 5.0);
}

scenario::Rrh rrh_at(Vec2 p, int side) {
  scenario::Rrh r;
  r.position = p;
  r.side = side;
  const double inward = side > 0 ? -kPi / 2 : kPi / 2;
  r.boresight = {wrap_angle(inward + side * kPi / 4), wrap_angle(inward - side * kPi / 4)};
  return r;
}

}  // namespace

TEST_CASE("steering azimuth is the planar bearing") {
  const scenario::Rrh r = rrh_at({0.0, 5.0}, 1);
  const BeamAssignment a = point_beam(r, {100.0, 0.0});
  CHECK(rad2deg(a.steer_azimuth) == Approx(-2.862).margin(5e-4));
  CHECK(a.steer_azimuth == Approx(std::atan2(-5.0, 100.0)));
  CHECK(a.panel_index == 0);
  CHECK_FALSE(a.clamped);
  // A target behind the RRH along the track uses the backward panel.
  CHECK(point_beam(r, {-100.0, 0.0}).panel_index == 1);
}

TEST_CASE("broadside target ties to panel 0") {
  const scenario::Rrh r = rrh_at({0.0, 5.0}, 1);
  const BeamAssignment a = point_beam(r, {0.0, 0.0});
  CHECK(a.panel_index == 0);
  CHECK(a.steer_azimuth == Approx(-kPi / 2));
  CHECK_FALSE(a.clamped);
}

TEST_CASE("targets outside the field of view are clamped and flagged") {
  const scenario::Rrh r = rrh_at({0.0, 5.0}, 1);
  // Bearing +90 degrees is 135 degrees from panel 1 and 225 from panel 0.
  const BeamAssignment a = point_beam(r, {0.0, 50.0});
  CHECK(a.clamped);
  const double rel = angle_between(a.steer_azimuth, r.boresight[static_cast<std::size_t>(a.panel_index)]);
  CHECK(rel == Approx(kPanelFieldOfView));
}

TEST_CASE("zero prediction error gives zero beam error") {
  const auto d = straight_deployment();
  for (const auto& r : d.rrhs) {
    const Vec2 p{r.position.x + 123.0, 0.0};
    CHECK(beam_direction_error_deg(point_beam(r, p), r, p) == 0.0);
  }
}

TEST_CASE("proximity amplifies beam error") {
  const scenario::Rrh r = rrh_at({0.0, 5.0}, 1);
  // Lateral error of 1 m at the given range along the track.
  const auto lateral = [&](double range) {
    const Vec2 truth{range, 5.0};
    const Vec2 predicted{range, 6.0};
    scenario::Rrh side = rrh_at({0.0, 5.0}, 1);
    return beam_direction_error_deg(point_beam(side, predicted), side, truth);
  };
  CHECK(lateral(290.0) == Approx(rad2deg(std::atan(1.0 / 290.0))).margin(1e-9));
  CHECK(lateral(290.0) == Approx(0.198).margin(5e-4));
  CHECK(lateral(10.0) == Approx(5.71).margin(5e-3));
  (void)r;
}

TEST_CASE("beam error is bounded by asin(position error / range)") {
  const auto d = straight_deployment();
  Rng rng(17);
  std::uniform_real_distribution<double> along(0.0, 5000.0), err(-3.0, 3.0);
  int checked = 0;
  for (int i = 0; i < 20000; ++i) {
    const Vec2 truth{along(rng), 0.0};
    const Vec2 predicted = truth + Vec2{err(rng), err(rng)};
    for (const auto& r : d.rrhs) {
      const BeamAssignment a = point_beam(r, predicted);
      if (a.clamped) continue;
      const double e = distance(predicted, truth);
      const double range = distance(truth, r.position);
      const double got = deg2rad(beam_direction_error_deg(a, r, truth));
      REQUIRE(got <= pointing_error_bound_rad(e, range) + 1e-9);
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("asin bound is attained for errors perpendicular to the predicted line of sight") {
  const Vec2 rrh{0.0, 0.0};
  const Vec2 truth{100.0, 0.0};
  // Error of length e at right angles to the predicted ray, i.e. the predicted
  // ray is tangent to the error circle.
  const double e = 10.0;
  const double phi = std::asin(e / 100.0);
  const Vec2 predicted = Vec2::from_polar(100.0 * std::cos(phi), phi);
  CHECK(distance(predicted, truth) == Approx(e));
  CHECK(angle_between(predicted.bearing(), truth.bearing()) == Approx(pointing_error_bound_rad(e, 100.0)));
  CHECK(std::atan(e / 100.0) < pointing_error_bound_rad(e, 100.0));
  (void)rrh;
}

TEST_CASE("sweep selection is the brute-force argmax") {
  Rng rng(5);
  std::normal_distribution<double> g(0.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<SweepCandidate> c;
    for (int i = 0; i < 12; ++i) c.push_back({i, g(rng)});
    int best = 0;
    for (int i = 1; i < 12; ++i) {
      if (c[static_cast<std::size_t>(i)].received_power_dbm > c[static_cast<std::size_t>(best)].received_power_dbm) best = i;
    }
    REQUIRE(select_train_beam(c, -1) == best);
  }
  const std::vector<SweepCandidate> single{{7, -3.0}};
  CHECK(select_train_beam(single, 2) == 7);
  CHECK(select_train_beam({}, 4) == 4);
}

TEST_CASE("fixed mode picks nose or tail by bearing") {
  CHECK(select_fixed_beam(0.0, {0.0, 0.0}, {300.0, 5.0}) == 0);
  CHECK(select_fixed_beam(0.0, {0.0, 0.0}, {-300.0, 5.0}) == 1);
  CHECK(select_fixed_beam(kPi, {0.0, 0.0}, {-300.0, 5.0}) == 0);
}

TEST_CASE("RRH gain peaks on the steered target") {
  const auto d = straight_deployment();
  const auto& r = d.rrhs[1];
  const Vec2 p{r.position.x + 200.0, 0.0};
  const BeamAssignment a = point_beam(r, p);
  CHECK(rrh_gain_db(r, a, p) == Approx(10.0 * std::log10(32.0)));
}
