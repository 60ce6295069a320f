// SPDX-License-Identifier: Apache-2.0
#include "hst/scenario/antenna.hpp"

#include <cmath>
#include <stdexcept>

#include "hst/common/geometry.hpp"

namespace hst::scenario {
namespace {

void check(const ArrayGeometry& array) {
  if (array.horizontal < 1 || array.vertical < 1) throw std::invalid_argument("array needs at least one element");
  if (!(array.spacing > 0.0)) throw std::invalid_argument("element spacing must be positive");
}

}  // namespace

std::vector<std::complex<double>> array_response(const ArrayGeometry& array, double azimuth,
                                                 double elevation) {
  check(array);
  const double u = 2.0 * kPi * array.spacing * std::sin(azimuth) * std::cos(elevation);
  const double v = 2.0 * kPi * array.spacing * std::sin(elevation);
  std::vector<std::complex<double>> a(static_cast<std::size_t>(array.elements()));
  for (int n = 0; n < array.vertical; ++n) {
    for (int m = 0; m < array.horizontal; ++m) {
      a[static_cast<std::size_t>(n * array.horizontal + m)] = std::polar(1.0, m * u + n * v);
    }
  }
  return a;
}

double beam_gain_db(const ArrayGeometry& array, double steer_azimuth, double signal_azimuth,
                    double steer_elevation, double signal_elevation) {
  check(array);
  // The URA factor separates into horizontal and vertical uniform-linear sums.
  const auto ula = [](int count, double phase) {
    std::complex<double> sum{0.0, 0.0};
    for (int i = 0; i < count; ++i) sum += std::polar(1.0, i * phase);
    return std::norm(sum);
  };
  const double k = 2.0 * kPi * array.spacing;
  const double du = k * (std::sin(signal_azimuth) * std::cos(signal_elevation) -
                         std::sin(steer_azimuth) * std::cos(steer_elevation));
  const double dv = k * (std::sin(signal_elevation) - std::sin(steer_elevation));
  const double power = ula(array.horizontal, du) * ula(array.vertical, dv) / array.elements();
  return 10.0 * std::log10(std::max(power, 1e-30));
}

double panel_gain_db(const ArrayGeometry& array, double boresight, double steer_world,
                     double signal_world) {
  const double signal = wrap_angle(signal_world - boresight);
  if (std::abs(signal) > kPi / 2.0) return kBackLobeGainDb;
  return beam_gain_db(array, wrap_angle(steer_world - boresight), signal);
}

double half_power_beamwidth(const ArrayGeometry& array) {
  check(array);
  // First-order ULA result for half-wavelength spacing, scaled for other spacings.
  return 1.772 / (array.horizontal * 2.0 * array.spacing);
}

TrainCodebook TrainCodebook::sweep(const ArrayGeometry& array, double span_rad) {
  if (!(span_rad > 0.0)) throw std::invalid_argument("codebook span must be positive");
  const double hpbw = half_power_beamwidth(array);
  const auto per_panel = static_cast<int>(std::ceil(2.0 * span_rad / hpbw)) + 1;
  const double step = 2.0 * span_rad / (per_panel - 1);
  TrainCodebook book{array, {}};
  for (int panel = 0; panel < 2; ++panel) {
    for (int i = 0; i < per_panel; ++i) book.beams.push_back({panel, -span_rad + i * step});
  }
  return book;
}

TrainCodebook TrainCodebook::fixed(const ArrayGeometry& array) {
  return {array, {{0, 0.0}, {1, 0.0}}};
}

double TrainCodebook::panel_boresight(int panel, double heading) const {
  return wrap_angle(panel == 0 ? heading : heading + kPi);
}

double TrainCodebook::steer_azimuth(std::size_t index, double heading) const {
  const TrainBeam& b = beams.at(index);
  return wrap_angle(panel_boresight(b.panel, heading) + b.relative_azimuth);
}

double TrainCodebook::gain_db(std::size_t index, double heading, double direction_world) const {
  const TrainBeam& b = beams.at(index);
  return panel_gain_db(array, panel_boresight(b.panel, heading), steer_azimuth(index, heading),
                       direction_world);
}

}  // namespace hst::scenario
