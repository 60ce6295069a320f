// SPDX-License-Identifier: Apache-2.0
#include "hst/link/throughput.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "hst/common/errors.hpp"

namespace hst::link {
namespace {

// Thresholds come from bicm_threshold_db() with a 1 dB gap; a unit test keeps
// them in sync.
const McsEntry kMcs18{18, 6, 822.0 / 1024.0, 28.0, 16.48};
const McsEntry kMcs24{24, 8, 841.0 / 1024.0, 80.0, 22.03};

struct Quadrature {
  std::vector<double> node, weight;
};

// Gauss-Hermite rule via Golub-Welsch; integrates f(x) exp(-x^2).
const Quadrature& hermite() {
  static const Quadrature q = [] {
    constexpr int n = 96;
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) j(k, k - 1) = j(k - 1, k) = std::sqrt(k / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    Quadrature out;
    for (int k = 0; k < n; ++k) {
      out.node.push_back(es.eigenvalues()(k));
      const double v = es.eigenvectors()(0, k);
      out.weight.push_back(std::sqrt(M_PI) * v * v);
    }
    return out;
  }();
  return q;
}

// BICM capacity of Gray-labelled L-PAM with unit energy and noise variance s2.
double pam_bicm(int bits, double s2) {
  const int levels = 1 << bits;
  std::vector<double> amp(static_cast<std::size_t>(levels));
  std::vector<int> label(static_cast<std::size_t>(levels));
  double energy = 0.0;
  for (int i = 0; i < levels; ++i) {
    amp[static_cast<std::size_t>(i)] = 2.0 * i - (levels - 1);
    label[static_cast<std::size_t>(i)] = i ^ (i >> 1);
    energy += amp[static_cast<std::size_t>(i)] * amp[static_cast<std::size_t>(i)];
  }
  const double norm = std::sqrt(energy / levels);
  for (auto& a : amp) a /= norm;

  const Quadrature& q = hermite();
  const double sigma = std::sqrt(s2);
  double loss = 0.0;
  for (int x = 0; x < levels; ++x) {
    for (std::size_t j = 0; j < q.node.size(); ++j) {
      const double y = amp[static_cast<std::size_t>(x)] + std::sqrt(2.0) * sigma * q.node[j];
      // Log-likelihoods relative to the transmitted point for stability.
      double all = 0.0;
      std::vector<double> same(static_cast<std::size_t>(bits), 0.0);
      for (int c = 0; c < levels; ++c) {
        const double d0 = y - amp[static_cast<std::size_t>(x)];
        const double d1 = y - amp[static_cast<std::size_t>(c)];
        const double p = std::exp((d0 * d0 - d1 * d1) / (2.0 * s2));
        all += p;
        for (int b = 0; b < bits; ++b) {
          if (((label[static_cast<std::size_t>(c)] ^ label[static_cast<std::size_t>(x)]) >> b & 1) == 0) {
            same[static_cast<std::size_t>(b)] += p;
          }
        }
      }
      double term = 0.0;
      for (int b = 0; b < bits; ++b) term += std::log2(all / same[static_cast<std::size_t>(b)]);
      loss += q.weight[j] / std::sqrt(M_PI) * term;
    }
  }
  return bits - loss / levels;
}

}  // namespace

const McsEntry& mcs_entry(int index) {
  if (index == 18) return kMcs18;
  if (index == 24) return kMcs24;
  throw ConfigError("unsupported MCS index " + std::to_string(index));
}

double eesm_db(std::span<const double> sinr_linear, double beta) {
  if (sinr_linear.empty()) return -std::numeric_limits<double>::infinity();
  // Factor out the smallest SINR so the exponentials cannot all underflow.
  double lo = std::numeric_limits<double>::infinity();
  for (double s : sinr_linear) lo = std::min(lo, s);
  double acc = 0.0;
  for (double s : sinr_linear) acc += std::exp(-(s - lo) / beta);
  const double eff = lo - beta * std::log(acc / static_cast<double>(sinr_linear.size()));
  return 10.0 * std::log10(std::max(eff, 0.0));
}

double block_error_rate(double effective_sinr_db, const McsEntry& mcs, double slope_db) {
  if (effective_sinr_db == -std::numeric_limits<double>::infinity()) return 1.0;
  return 1.0 / (1.0 + std::exp((effective_sinr_db - mcs.threshold_db) / slope_db));
}

double transport_block_bits(int prbs, int rank, const McsEntry& mcs, double overhead) {
  return overhead * prbs * 12.0 * 14.0 * rank * mcs.bits_per_symbol * mcs.code_rate;
}

double slot_throughput_bps(std::span<const double> sinr_linear, const McsEntry& mcs, int prbs, int rank,
                           double slot_seconds, double overhead) {
  const double bler = block_error_rate(eesm_db(sinr_linear, mcs.eesm_beta), mcs);
  return (1.0 - bler) * transport_block_bits(prbs, rank, mcs, overhead) / slot_seconds;
}

double bicm_capacity(int bits_per_symbol, double snr_db) {
  if (bits_per_symbol < 2 || bits_per_symbol % 2 != 0) throw std::invalid_argument("square QAM needs an even bit count");
  const double snr = std::pow(10.0, snr_db / 10.0);
  // Square QAM is two independent PAM dimensions, each at the complex SNR.
  return 2.0 * pam_bicm(bits_per_symbol / 2, 1.0 / snr);
}

double bicm_threshold_db(int bits_per_symbol, double code_rate, double gap_db) {
  const double target = bits_per_symbol * code_rate;
  double lo = -10.0, hi = 50.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (bicm_capacity(bits_per_symbol, mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) + gap_db;
}

}  // namespace hst::link
