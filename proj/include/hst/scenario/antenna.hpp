// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace hst::scenario {

// Uniform rectangular array of isotropic elements.
struct ArrayGeometry {
  int horizontal = 8;
  int vertical = 4;
  double spacing = 0.5;  // wavelengths

  int elements() const { return horizontal * vertical; }
};

// Gain floor for directions behind a panel.
inline constexpr double kBackLobeGainDb = -100.0;

// Per-element unit phasors for a plane wave from (azimuth, elevation), both
// measured from the array boresight. Element (m, n) is at index n*horizontal+m.
std::vector<std::complex<double>> array_response(const ArrayGeometry& array, double azimuth,
                                                 double elevation = 0.0);

// Normalized array factor |w^H a(signal)|^2 / N with matched weights w = a(steer).
// Peaks at 10*log10(N) when steer equals signal.
double beam_gain_db(const ArrayGeometry& array, double steer_azimuth, double signal_azimuth,
                    double steer_elevation = 0.0, double signal_elevation = 0.0);

// Gain of a panel with world-frame boresight for world-frame steer and signal
// azimuths; kBackLobeGainDb behind the panel.
double panel_gain_db(const ArrayGeometry& array, double boresight, double steer_world,
                     double signal_world);

// Approximate half-power beamwidth of the horizontal cut at broadside (rad).
double half_power_beamwidth(const ArrayGeometry& array);

// Train-side beam. Panel 0 faces the nose (heading), panel 1 the tail.
struct TrainBeam {
  int panel = 0;
  double relative_azimuth = 0.0;  // rad, from the panel boresight
};

struct TrainCodebook {
  ArrayGeometry array;
  std::vector<TrainBeam> beams;

  // Uniform grid over +-span around each panel boresight with a step no larger
  // than the half-power beamwidth.
  static TrainCodebook sweep(const ArrayGeometry& array, double span_rad);
  // One broadside beam per panel.
  static TrainCodebook fixed(const ArrayGeometry& array);

  std::size_t size() const { return beams.size(); }
  double panel_boresight(int panel, double heading) const;
  double steer_azimuth(std::size_t index, double heading) const;
  // Gain of codebook beam `index` toward a world-frame direction.
  double gain_db(std::size_t index, double heading, double direction_world) const;
};

}  // namespace hst::scenario
