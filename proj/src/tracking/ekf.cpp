// SPDX-License-Identifier: Apache-2.0
#include "hst/tracking/ekf.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

#include "hst/common/errors.hpp"

namespace hst::tracking {
namespace {

const Vec2& anchor(std::span<const Vec2> anchors, int id) {
  if (id < 0 || static_cast<std::size_t>(id) >= anchors.size()) throw std::out_of_range("unknown RRH id");
  return anchors[static_cast<std::size_t>(id)];
}

Eigen::MatrixXd weight_matrix(const Eigen::MatrixXd& r) {
  return r.ldlt().solve(Eigen::MatrixXd::Identity(r.rows(), r.cols()));
}

void symmetrize(StateMatrix& p) { p = 0.5 * (p + p.transpose()).eval(); }

}  // namespace

RangeDifferences to_range_differences(const measurements::TdoaBatch& batch) {
  const auto m = static_cast<Eigen::Index>(batch.pairs.size());
  RangeDifferences out;
  out.z.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) out.z(i) = batch.pairs[static_cast<std::size_t>(i)].tdoa_seconds() * kSpeedOfLight;
  out.r = batch.covariance * (kSpeedOfLight * kSpeedOfLight);
  return out;
}

Eigen::VectorXd tdoa_model(const measurements::TdoaBatch& batch, std::span<const Vec2> anchors, const Vec2& x,
                           Eigen::MatrixXd* jacobian) {
  const auto m = static_cast<Eigen::Index>(batch.pairs.size());
  const Vec2 ref = anchor(anchors, batch.reference_rrh_id);
  const Vec2 to_ref = x - ref;
  const double d_ref = to_ref.norm();
  Eigen::VectorXd h(m);
  if (jacobian != nullptr) jacobian->resize(m, 2);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Vec2 to_i = x - anchor(anchors, batch.pairs[static_cast<std::size_t>(i)].rrh_id);
    const double d_i = to_i.norm();
    h(i) = d_i - d_ref;
    if (jacobian != nullptr) {
      (*jacobian)(i, 0) = to_i.x / d_i - to_ref.x / d_ref;
      (*jacobian)(i, 1) = to_i.y / d_i - to_ref.y / d_ref;
    }
  }
  return h;
}

Vec2 solve_tdoa_least_squares(const measurements::TdoaBatch& batch, std::span<const Vec2> anchors,
                              const Vec2& start, int iterations, double damping) {
  const RangeDifferences rd = to_range_differences(batch);
  const Eigen::MatrixXd w = weight_matrix(rd.r);
  Vec2 x = start;
  Eigen::MatrixXd j;
  for (int it = 0; it < iterations; ++it) {
    const Eigen::VectorXd res = rd.z - tdoa_model(batch, anchors, x, &j);
    const Eigen::Matrix2d normal = j.transpose() * w * j + damping * Eigen::Matrix2d::Identity();
    const Eigen::Vector2d step = normal.ldlt().solve(j.transpose() * w * res);
    if (!step.allFinite()) break;
    x += Vec2{step(0), step(1)};
    if (step.norm() < 1e-12) break;
  }
  return x;
}

EkfEstimate ekf_init(const measurements::TdoaBatch& batch, std::span<const Vec2> anchors, const InitConfig& config,
                     const Vec2& velocity_prior) {
  if (batch.pairs.size() < 2) throw InsufficientAnchors("initialization needs at least two TDOA pairs");
  const RangeDifferences rd = to_range_differences(batch);
  const Vec2 ref = anchor(anchors, batch.reference_rrh_id);

  // Principal axis of the participating anchors approximates the track direction.
  Vec2 mean = ref;
  for (const auto& p : batch.pairs) mean += anchor(anchors, p.rrh_id);
  mean *= 1.0 / static_cast<double>(batch.pairs.size() + 1);
  Eigen::Matrix2d scatter = Eigen::Matrix2d::Zero();
  const auto accumulate = [&](const Vec2& a) {
    const Eigen::Vector2d d(a.x - mean.x, a.y - mean.y);
    scatter += d * d.transpose();
  };
  accumulate(ref);
  for (const auto& p : batch.pairs) accumulate(anchor(anchors, p.rrh_id));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(scatter);
  const Eigen::Vector2d axis = es.eigenvectors().col(1);
  const Vec2 along{axis(0), axis(1)};
  const Vec2 across{-axis(1), axis(0)};

  Vec2 best = ref;
  double best_cost = std::numeric_limits<double>::infinity();
  const int na = static_cast<int>(std::floor(config.corridor_along_m / config.grid_step_m));
  const int nc = static_cast<int>(std::floor(config.corridor_across_m / config.grid_step_m));
  for (int i = -na; i <= na; ++i) {
    for (int k = -nc; k <= nc; ++k) {
      const Vec2 x = ref + along * (i * config.grid_step_m) + across * (k * config.grid_step_m);
      const double cost = (rd.z - tdoa_model(batch, anchors, x)).squaredNorm();
      if (cost < best_cost) {
        best_cost = cost;
        best = x;
      }
    }
  }

  const Vec2 x = solve_tdoa_least_squares(batch, anchors, best, config.gauss_newton_steps,
                                          1.0 / config.position_prior_var);
  Eigen::MatrixXd j;
  const double residual = (rd.z - tdoa_model(batch, anchors, x, &j)).norm();
  const double limit = config.residual_sigma_factor * std::sqrt(batch.covariance.trace()) * kSpeedOfLight;
  if (!(residual <= limit)) throw InitializationFailed("TDOA residual too large after grid search");

  const Eigen::Matrix2d fisher = j.transpose() * weight_matrix(rd.r) * j;
  const Eigen::Matrix2d pos_cov =
      (fisher + Eigen::Matrix2d::Identity() / config.position_prior_var).inverse();

  EkfEstimate e;
  e.epoch_time = batch.epoch_time;
  e.mean << x.x, x.y, velocity_prior.x, velocity_prior.y;
  e.covariance.setZero();
  e.covariance.topLeftCorner<2, 2>() = 0.5 * (pos_cov + pos_cov.transpose());
  e.covariance.bottomRightCorner<2, 2>() = Eigen::Matrix2d::Identity() * config.velocity_prior_var;
  return e;
}

EkfEstimate ekf_predict(const EkfEstimate& estimate, double dt, const ProcessModel& model) {
  if (!(dt >= 0.0)) throw std::invalid_argument("prediction step must be non-negative");
  StateMatrix f = StateMatrix::Identity();
  f(0, 2) = dt;
  f(1, 3) = dt;
  const double q = model.q;
  const double q11 = q * dt * dt * dt / 3.0, q12 = q * dt * dt / 2.0, q22 = q * dt;
  StateMatrix qm = StateMatrix::Zero();
  qm(0, 0) = qm(1, 1) = q11;
  qm(0, 2) = qm(2, 0) = qm(1, 3) = qm(3, 1) = q12;
  qm(2, 2) = qm(3, 3) = q22;
  EkfEstimate out;
  out.mean = f * estimate.mean;
  out.covariance = f * estimate.covariance * f.transpose() + qm;
  symmetrize(out.covariance);
  out.epoch_time = estimate.epoch_time + dt;
  return out;
}

double gate_threshold(double probability, int dof) {
  static std::mutex mutex;
  static std::map<std::pair<double, int>, double> cache;
  std::lock_guard lock(mutex);
  auto [it, inserted] = cache.try_emplace({probability, dof}, 0.0);
  if (inserted) it->second = boost::math::quantile(boost::math::chi_squared_distribution<double>(dof), probability);
  return it->second;
}

UpdateResult ekf_update(const EkfEstimate& estimate, const measurements::TdoaBatch& batch,
                        std::span<const Vec2> anchors, double gate_probability, double noise_scale) {
  const RangeDifferences rd = to_range_differences(batch);
  const auto m = static_cast<Eigen::Index>(batch.pairs.size());
  Eigen::MatrixXd jp;
  const Eigen::VectorXd innovation = rd.z - tdoa_model(batch, anchors, estimate.position(), &jp);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, 4);
  h.leftCols(2) = jp;
  const Eigen::MatrixXd r = rd.r * noise_scale;
  const Eigen::MatrixXd s = h * estimate.covariance * h.transpose() + r;
  const Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (s + s.transpose()));
  if (llt.info() != Eigen::Success || !innovation.allFinite()) {
    throw NumericalFailure("innovation covariance is not positive definite");
  }

  UpdateResult out;
  out.mahalanobis2 = innovation.dot(llt.solve(innovation));
  if (gate_probability < 1.0 && out.mahalanobis2 > gate_threshold(gate_probability, static_cast<int>(m))) {
    out.estimate = estimate;
    out.gated = true;
    return out;
  }

  const Eigen::MatrixXd k = llt.solve(h * estimate.covariance).transpose();  // P H^T S^-1
  const StateMatrix ikh = StateMatrix::Identity() - k * h;
  out.estimate.mean = estimate.mean + k * innovation;
  out.estimate.covariance = ikh * estimate.covariance * ikh.transpose() + k * r * k.transpose();
  symmetrize(out.estimate.covariance);
  out.estimate.epoch_time = std::max(estimate.epoch_time, batch.epoch_time);
  return out;
}

Vec2 predict_position(const EkfEstimate& estimate, double dt_ahead) {
  return estimate.position() + estimate.velocity() * dt_ahead;
}

}  // namespace hst::tracking
