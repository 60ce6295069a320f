// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hst/common/geometry.hpp"

namespace hst::scenario {

inline constexpr double kMaxTrackCurvature = 0.005;   // 1/m
inline constexpr double kTrackSegmentLength = 5.0;    // m, node spacing of the centerline

struct CurvatureSpec {
  enum class Kind { kStraight, kConstant, kRandom };

  Kind kind = Kind::kRandom;
  // kConstant: the curvature itself. kRandom: bound on |curvature|.
  double curvature = 5e-5;
  // kRandom: spacing of the random curvature knots.
  double correlation_length_m = 5000.0;

  static CurvatureSpec straight() { return {Kind::kStraight, 0.0, 0.0}; }
  static CurvatureSpec constant(double k) { return {Kind::kConstant, k, 0.0}; }
  static CurvatureSpec random(double max_k, double correlation_length_m) {
    return {Kind::kRandom, max_k, correlation_length_m};
  }
};

// Planar rail centerline made of constant-curvature segments. Positions inside a
// segment follow the exact circular arc, so heading and tangent are the analytic
// derivative of position.
class Track {
 public:
  Track(std::vector<double> arc, std::vector<Vec2> nodes, std::vector<double> headings,
        std::vector<double> curvatures);

  double length() const { return arc_.back(); }
  std::size_t segment_count() const { return curvature_.size(); }

  Vec2 position_at(double arc) const;
  double heading_at(double arc) const;
  double curvature_at(double arc) const;
  Vec2 tangent_at(double arc) const { return Vec2::from_polar(1.0, heading_at(arc)); }
  // Unit normal pointing to the left of the direction of travel.
  Vec2 normal_at(double arc) const { return Vec2::from_polar(1.0, heading_at(arc) + kPi / 2.0); }

  std::span<const double> arc_lengths() const { return arc_; }
  std::span<const Vec2> nodes() const { return nodes_; }
  std::span<const double> curvatures() const { return curvature_; }

 private:
  std::size_t segment_index(double arc) const;

  std::vector<double> arc_;
  std::vector<Vec2> nodes_;
  std::vector<double> heading_;
  std::vector<double> curvature_;
};

// Throws std::invalid_argument for a non-positive length or a curvature above
// kMaxTrackCurvature. Deterministic for a given seed.
Track build_track(double length_m, const CurvatureSpec& spec, std::uint64_t seed);

}  // namespace hst::scenario
