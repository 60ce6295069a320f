// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hst/harness/config.hpp"
#include "hst/harness/metrics.hpp"
#include "hst/link/link_sim.hpp"

namespace hst::harness {

struct ReplicationLog {
  int replication = 0;
  int epochs = 0;          // epochs with a tracked estimate
  int skipped_epochs = 0;  // fewer than three usable RRHs
  int reinitializations = 0;
  int numerical_failures = 0;
};

struct PositioningResult {
  MetricSeries position_error_m{"position_error_m"};
  MetricSeries velocity_error_mps{"velocity_error_mps"};
  MetricSeries beam_error_deg{"beam_error_deg"};
  // Signed estimate errors, in epoch order; feeds the link campaign.
  std::vector<link::StateError> state_errors;
  std::vector<ReplicationLog> replications;
};

// Worker count 0 means one per hardware thread.
PositioningResult run_positioning_campaign(const CampaignConfig& config, unsigned workers = 0);
// Writes <metric>.csv for each series plus positioning.gp.
void write_positioning_outputs(const PositioningResult& result, const std::filesystem::path& dir);

struct LinkPoint {
  double distance_m = 0.0;
  double snr_db = 0.0;
  link::CompensationMode mode = link::CompensationMode::kIdeal;
  double mean_gbps = 0.0;
  double stderr_gbps = 0.0;
};

struct LinkResult {
  int mcs = 24;
  int realizations = 0;
  std::vector<LinkPoint> points;  // distance-major, then SNR, then mode
  int ici_fallbacks = 0;
  int skew_exceeds_cp = 0;

  const LinkPoint& at(double distance_m, double snr_db, link::CompensationMode mode) const;
};

// Error source for the link campaign. "campaign" draws from `positioning`,
// which must then be non-null and non-empty.
link::ErrorStatistics error_statistics(const CampaignConfig& config, const PositioningResult* positioning);

// The ideal reference mode is always simulated, even when not listed.
LinkResult run_link_campaign(const CampaignConfig& config, const link::ErrorStatistics& errors, unsigned workers = 0);
std::string link_csv_text(const LinkResult& result);
// Writes throughput.csv plus throughput.gp.
void write_link_outputs(const LinkResult& result, const std::filesystem::path& dir);

}  // namespace hst::harness
