// SPDX-License-Identifier: Apache-2.0
#include "hst/harness/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace hst::harness {

void MetricSeries::add(double value, double weight) {
  if (!(weight > 0.0)) throw std::invalid_argument("metric weight must be positive");
  if (!values_.empty() && value < values_.back()) sorted_ = false;
  values_.push_back(value);
  weights_.push_back(weight);
  total_weight_ += weight;
}

void MetricSeries::append(const MetricSeries& other) {
  for (std::size_t i = 0; i < other.values_.size(); ++i) add(other.values_[i], other.weights_[i]);
}

void MetricSeries::sort() const {
  if (sorted_) return;
  std::vector<std::size_t> idx(values_.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  // Stable so equal values keep insertion order; keeps output byte-identical.
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values_[a] < values_[b]; });
  std::vector<double> v(idx.size()), w(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    v[i] = values_[idx[i]];
    w[i] = weights_[idx[i]];
  }
  values_ = std::move(v);
  weights_ = std::move(w);
  sorted_ = true;
}

double MetricSeries::percentile(double p) const {
  if (values_.empty()) throw std::logic_error("percentile of an empty series");
  if (!(p >= 0.0 && p <= 100.0)) throw std::invalid_argument("percentile outside [0, 100]");
  sort();
  const double target = p / 100.0 * total_weight_;
  double acc = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    acc += weights_[i];
    if (acc >= target * (1.0 - 1e-12)) return values_[i];
  }
  return values_.back();
}

double MetricSeries::mean() const {
  if (values_.empty()) throw std::logic_error("mean of an empty series");
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) s += values_[i] * weights_[i];
  return s / total_weight_;
}

std::vector<std::pair<double, double>> MetricSeries::cdf() const {
  sort();
  std::vector<std::pair<double, double>> out;
  out.reserve(values_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    acc += weights_[i];
    out.emplace_back(values_[i], i + 1 == values_.size() ? 1.0 : acc / total_weight_);
  }
  return out;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string cdf_text(const MetricSeries& series) {
  const auto rows = series.cdf();
  const std::size_t stride = rows.size() > kCdfThinningThreshold ? 10 : 1;
  std::string out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i % stride != 0 && i + 1 != rows.size()) continue;
    out += format_number(rows[i].first);
    out += ',';
    out += format_number(rows[i].second);
    out += '\n';
  }
  return out;
}

void emit_cdf(const MetricSeries& series, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << cdf_text(series);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace hst::harness
