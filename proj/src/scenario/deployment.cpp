// SPDX-License-Identifier: Apache-2.0
#include "hst/scenario/deployment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hst::scenario {

std::vector<Vec2> Deployment::anchor_positions() const {
  std::vector<Vec2> out;
  out.reserve(rrhs.size());
  for (const auto& r : rrhs) out.push_back(r.position);
  return out;
}

std::vector<int> Deployment::nearest(const Vec2& p, std::size_t count) const {
  std::vector<int> ids(rrhs.size());
  std::iota(ids.begin(), ids.end(), 0);
  const auto key = [&](int i) { return (rrhs[static_cast<std::size_t>(i)].position - p).squared_norm(); };
  count = std::min(count, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(count), ids.end(),
                    [&](int a, int b) { return key(a) < key(b) || (key(a) == key(b) && a < b); });
  ids.resize(count);
  return ids;
}

std::vector<int> Deployment::nearest_by_arc(double arc, const Vec2& p, std::size_t count) const {
  if (rrhs.empty()) return {};
  // Candidates within a window of the foot index; the track is nearly straight
  // on the scale of a few sites, so the nearest ones are always in there.
  const auto centre = static_cast<long>(std::lround(arc / inter_site_distance));
  const long pad = static_cast<long>(count) + 2;
  const long lo = std::max(0L, centre - pad);
  const long hi = std::min(static_cast<long>(rrhs.size()) - 1, centre + pad);
  std::vector<int> ids;
  for (long i = lo; i <= hi; ++i) ids.push_back(static_cast<int>(i));
  const auto key = [&](int i) { return (rrhs[static_cast<std::size_t>(i)].position - p).squared_norm(); };
  count = std::min(count, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(count), ids.end(),
                    [&](int a, int b) { return key(a) < key(b) || (key(a) == key(b) && a < b); });
  ids.resize(count);
  return ids;
}

Deployment deploy_rrhs(const Track& track, double isd, double lateral_offset, const ArrayGeometry& array) {
  if (!(isd > 0.0)) throw std::invalid_argument("inter-site distance must be positive");
  if (!(lateral_offset > 0.0)) throw std::invalid_argument("lateral offset must be positive");
  Deployment d;
  d.inter_site_distance = isd;
  d.lateral_offset = lateral_offset;
  const auto count = static_cast<std::size_t>(std::floor(track.length() / isd + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) {
    Rrh r;
    r.id = static_cast<int>(i);
    r.arc = std::min(static_cast<double>(i) * isd, track.length());
    r.side = i % 2 == 0 ? 1 : -1;
    const Vec2 normal = track.normal_at(r.arc);
    r.position = track.position_at(r.arc) + normal * (r.side * lateral_offset);
    const double inward = (normal * static_cast<double>(-r.side)).bearing();
    const double quarter = kPi / 4.0;
    r.boresight = {wrap_angle(inward + r.side * quarter), wrap_angle(inward - r.side * quarter)};
    r.array = array;
    d.rrhs.push_back(r);
  }
  return d;
}

}  // namespace hst::scenario
