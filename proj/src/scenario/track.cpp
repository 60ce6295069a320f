// SPDX-License-Identifier: Apache-2.0
#include "hst/scenario/track.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hst/common/random.hpp"

namespace hst::scenario {
namespace {

// sin(x)/x, accurate near zero.
double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

// Chord of a constant-curvature arc of length u starting with heading theta.
Vec2 arc_chord(double theta, double curvature, double u) {
  const double half_turn = 0.5 * curvature * u;
  return Vec2::from_polar(u * sinc(half_turn), theta + half_turn);
}

double random_curvature(const CurvatureSpec& spec, std::uint64_t seed, double s) {
  // Knot values uniform in [-k, k], joined by a smoothstep so the profile is
  // C1 and never leaves the bound.
  const double t = s / spec.correlation_length_m;
  const auto knot = static_cast<std::int64_t>(std::floor(t));
  const double frac = t - static_cast<double>(knot);
  const auto value = [&](std::int64_t i) {
    return spec.curvature * (2.0 * counter_uniform(derive_seed(seed, 0x7472616bULL, static_cast<std::uint64_t>(i))) - 1.0);
  };
  const double w = frac * frac * (3.0 - 2.0 * frac);
  return (1.0 - w) * value(knot) + w * value(knot + 1);
}

}  // namespace

Track::Track(std::vector<double> arc, std::vector<Vec2> nodes, std::vector<double> headings,
             std::vector<double> curvatures)
    : arc_(std::move(arc)),
      nodes_(std::move(nodes)),
      heading_(std::move(headings)),
      curvature_(std::move(curvatures)) {
  if (arc_.size() < 2 || nodes_.size() != arc_.size() || heading_.size() != arc_.size() ||
      curvature_.size() + 1 != arc_.size()) {
    throw std::invalid_argument("inconsistent track tables");
  }
}

std::size_t Track::segment_index(double arc) const {
  const double clamped = std::clamp(arc, 0.0, length());
  auto i = static_cast<std::size_t>(clamped / kTrackSegmentLength);
  i = std::min(i, curvature_.size() - 1);
  // Only the final segment may be shorter than the nominal spacing.
  while (i + 1 < curvature_.size() && arc_[i + 1] <= clamped) ++i;
  while (i > 0 && arc_[i] > clamped) --i;
  return i;
}

Vec2 Track::position_at(double arc) const {
  const std::size_t i = segment_index(arc);
  const double u = std::clamp(arc, 0.0, length()) - arc_[i];
  return nodes_[i] + arc_chord(heading_[i], curvature_[i], u);
}

double Track::heading_at(double arc) const {
  const std::size_t i = segment_index(arc);
  const double u = std::clamp(arc, 0.0, length()) - arc_[i];
  return heading_[i] + curvature_[i] * u;
}

double Track::curvature_at(double arc) const { return curvature_[segment_index(arc)]; }

Track build_track(double length_m, const CurvatureSpec& spec, std::uint64_t seed) {
  if (!(length_m > 0.0)) throw std::invalid_argument("track length must be positive");
  if (std::abs(spec.curvature) > kMaxTrackCurvature) {
    throw std::invalid_argument("track curvature exceeds the rail-plausible bound");
  }
  if (spec.kind == CurvatureSpec::Kind::kRandom && !(spec.correlation_length_m > 0.0)) {
    throw std::invalid_argument("curvature correlation length must be positive");
  }

  const auto segments = static_cast<std::size_t>(std::ceil(length_m / kTrackSegmentLength - 1e-9));
  std::vector<double> arc(segments + 1);
  std::vector<Vec2> nodes(segments + 1);
  std::vector<double> heading(segments + 1);
  std::vector<double> curvature(segments);

  for (std::size_t i = 0; i < segments; ++i) {
    const double s0 = static_cast<double>(i) * kTrackSegmentLength;
    const double len = std::min(kTrackSegmentLength, length_m - s0);
    double k = 0.0;
    switch (spec.kind) {
      case CurvatureSpec::Kind::kStraight: k = 0.0; break;
      case CurvatureSpec::Kind::kConstant: k = spec.curvature; break;
      case CurvatureSpec::Kind::kRandom: k = random_curvature(spec, seed, s0 + 0.5 * len); break;
    }
    curvature[i] = k;
    arc[i] = s0;
    arc[i + 1] = s0 + len;
    nodes[i + 1] = nodes[i] + arc_chord(heading[i], k, len);
    heading[i + 1] = heading[i] + k * len;
  }
  arc.back() = length_m;
  return Track(std::move(arc), std::move(nodes), std::move(heading), std::move(curvature));
}

}  // namespace hst::scenario
