// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace hst::harness {

// Weighted sample set with an empirical CDF.
class MetricSeries {
 public:
  explicit MetricSeries(std::string name = {}) : name_(std::move(name)) {}

  void add(double value, double weight = 1.0);
  void append(const MetricSeries& other);

  const std::string& name() const { return name_; }
  std::size_t count() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double total_weight() const { return total_weight_; }

  // Smallest sample whose cumulative weight reaches p percent. p in [0, 100].
  double percentile(double p) const;
  double mean() const;

  // (value, cumulative weight fraction), sorted by value.
  std::vector<std::pair<double, double>> cdf() const;

 private:
  void sort() const;

  std::string name_;
  mutable std::vector<double> values_;
  mutable std::vector<double> weights_;
  mutable bool sorted_ = true;
  double total_weight_ = 0.0;
};

// Rows above this many samples are thinned to every 10th (the last row is kept).
inline constexpr std::size_t kCdfThinningThreshold = 100000;

// "value,cdf" rows without a header. Throws std::runtime_error when the file
// cannot be written.
void emit_cdf(const MetricSeries& series, const std::filesystem::path& path);
std::string cdf_text(const MetricSeries& series);

// Shortest round-trip decimal, always with a fractional part ("2.0", not "2").
std::string format_number(double v);

}  // namespace hst::harness
