// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include <Eigen/Dense>

#include "hst/common/geometry.hpp"
#include "hst/measurements/srs.hpp"

namespace hst::tracking {

using StateVector = Eigen::Vector4d;  // x, y, vx, vy
using StateMatrix = Eigen::Matrix4d;

struct EkfEstimate {
  StateVector mean = StateVector::Zero();
  StateMatrix covariance = StateMatrix::Identity();
  double epoch_time = 0.0;

  Vec2 position() const { return {mean(0), mean(1)}; }
  Vec2 velocity() const { return {mean(2), mean(3)}; }
};

// Continuous white-noise acceleration, spectral density q (m^2/s^3).
struct ProcessModel {
  double q = 1.0;
};

struct InitConfig {
  double corridor_along_m = 300.0;   // half-length of the search corridor
  double corridor_across_m = 30.0;   // half-width
  double grid_step_m = 1.0;
  int gauss_newton_steps = 10;
  double position_prior_var = 100.0;   // m^2
  double velocity_prior_var = 200.0;   // (m/s)^2
  double residual_sigma_factor = 5.0;
};

// TDOA range differences in meters and their covariance (m^2).
struct RangeDifferences {
  Eigen::VectorXd z;
  Eigen::MatrixXd r;
};
RangeDifferences to_range_differences(const measurements::TdoaBatch& batch);

// h_i(x) = |x - p_i| - |x - p_ref| and its Jacobian with respect to position.
Eigen::VectorXd tdoa_model(const measurements::TdoaBatch& batch, std::span<const Vec2> anchors, const Vec2& x,
                           Eigen::MatrixXd* jacobian = nullptr);

// Damped Gauss-Newton fit of the TDOA batch. Damping shrinks steps but does
// not move the fixed point, so the result is the weighted least-squares solution.
Vec2 solve_tdoa_least_squares(const measurements::TdoaBatch& batch, std::span<const Vec2> anchors,
                              const Vec2& start, int iterations, double damping = 0.0);

// Grid search over a corridor around the reference RRH, aligned with the
// principal axis of the participating anchors, followed by Gauss-Newton.
// Throws InitializationFailed when the refined residual stays large.
EkfEstimate ekf_init(const measurements::TdoaBatch& batch, std::span<const Vec2> anchors,
                     const InitConfig& config = {}, const Vec2& velocity_prior = {});

EkfEstimate ekf_predict(const EkfEstimate& estimate, double dt, const ProcessModel& model);

struct UpdateResult {
  EkfEstimate estimate;
  bool gated = false;
  double mahalanobis2 = 0.0;
};

// Joseph-form update. A gated batch returns the input estimate unchanged.
// Throws NumericalFailure when the innovation covariance is not positive definite.
UpdateResult ekf_update(const EkfEstimate& estimate, const measurements::TdoaBatch& batch,
                        std::span<const Vec2> anchors, double gate_probability = 0.997,
                        double noise_scale = 1.0);

Vec2 predict_position(const EkfEstimate& estimate, double dt_ahead);

// Chi-square quantile for the innovation gate, cached per degree of freedom.
double gate_threshold(double probability, int dof);

}  // namespace hst::tracking
