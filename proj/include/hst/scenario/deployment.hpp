// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>
#include <vector>

#include "hst/common/geometry.hpp"
#include "hst/scenario/antenna.hpp"
#include "hst/scenario/track.hpp"

namespace hst::scenario {

struct Rrh {
  int id = 0;
  Vec2 position;
  double arc = 0.0;   // along-track coordinate of the foot point
  int side = 1;       // +1 left of the direction of travel, -1 right
  // Panel 0 looks forward along the track, panel 1 backward; both 45 degrees
  // off the inward track normal.
  std::array<double, 2> boresight{};
  ArrayGeometry array;
};

struct Deployment {
  std::vector<Rrh> rrhs;
  double inter_site_distance = 580.0;
  double lateral_offset = 5.0;

  std::vector<Vec2> anchor_positions() const;
  // Ids of the `count` RRHs closest to p, nearest first.
  std::vector<int> nearest(const Vec2& p, std::size_t count) const;
  // Same, for a train at along-track coordinate arc; cheaper than nearest()
  // because RRHs are sorted by arc.
  std::vector<int> nearest_by_arc(double arc, const Vec2& p, std::size_t count) const;
};

// RRHs every isd meters from arc 0, alternating sides starting on the left.
Deployment deploy_rrhs(const Track& track, double isd, double lateral_offset,
                       const ArrayGeometry& array = {});

}  // namespace hst::scenario
