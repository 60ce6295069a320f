// SPDX-License-Identifier: Apache-2.0
// hstsim: command-line front end for the positioning and link campaigns.
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hst/common/errors.hpp"
#include "hst/common/geometry.hpp"
#include "hst/harness/campaign.hpp"
#include "hst/harness/config.hpp"
#include "hst/measurements/srs.hpp"
#include "hst/measurements/toa_estimator.hpp"

namespace {

using namespace hst;
using namespace hst::harness;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> replications;
  std::vector<std::string> overrides;
  unsigned workers = 0;
};

CampaignConfig resolve(const Common& o) {
  std::vector<std::string> ov = o.overrides;
  if (o.seed) ov.push_back("seed=" + std::to_string(*o.seed));
  if (o.replications) ov.push_back("replications=" + std::to_string(*o.replications));
  if (o.out) ov.push_back("output_dir=" + nlohmann::json(*o.out).dump());
  if (o.config_path.empty()) return parse_config("", ov);
  return load_config(o.config_path, ov);
}

void print_positioning(const PositioningResult& r) {
  std::printf("tracked epochs: %zu\n", r.position_error_m.count());
  for (const auto& rep : r.replications) {
    if (rep.reinitializations > 0 || rep.numerical_failures > 0) {
      std::printf("replication %d: %d re-initializations, %d numerical failures\n", rep.replication,
                  rep.reinitializations, rep.numerical_failures);
    }
  }
  for (const auto* s : {&r.position_error_m, &r.velocity_error_mps, &r.beam_error_deg}) {
    if (s->empty()) continue;
    std::printf("%-20s p50 %.4g  p95 %.4g  p99 %.4g\n", s->name().c_str(), s->percentile(50), s->percentile(95),
                s->percentile(99));
  }
}

int simulate_pos(const Common& o) {
  const CampaignConfig c = resolve(o);
  const PositioningResult r = run_positioning_campaign(c, o.workers);
  write_positioning_outputs(r, c.output_dir);
  print_positioning(r);
  return 0;
}

int simulate_link(const Common& o) {
  const CampaignConfig c = resolve(o);
  std::optional<PositioningResult> pos;
  if (c.link.errors.source == "campaign") {
    std::printf("running positioning campaign for the error statistics\n");
    pos = run_positioning_campaign(c, o.workers);
    print_positioning(*pos);
  }
  const LinkResult r = run_link_campaign(c, error_statistics(c, pos ? &*pos : nullptr), o.workers);
  write_link_outputs(r, c.output_dir);
  std::fputs(link_csv_text(r).c_str(), stdout);
  if (r.ici_fallbacks > 0) std::printf("ICI estimator fell back to CPE on %d slots\n", r.ici_fallbacks);
  if (r.skew_exceeds_cp > 0) std::printf("%d realizations had SFN delay skew beyond the CP\n", r.skew_exceeds_cp);
  return 0;
}

int validate_crlb_cmd(double bandwidth, const std::vector<double>& snrs, int trials, std::uint64_t seed) {
  std::printf("snr_db,crlb_ns,empirical_ns,ratio\n");
  for (double snr : snrs) {
    const auto t = measurements::validate_crlb(bandwidth, snr, trials, seed);
    std::printf("%g,%.5g,%.5g,%.4g\n", snr, t.crlb_std_s * 1e9, t.empirical_std_s * 1e9,
                t.empirical_std_s / t.crlb_std_s);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-speed train positioning and SFN link simulator"};
  app.require_subcommand(1);

  Common opts;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", opts.config_path, "JSON configuration file (defaults when omitted)");
    cmd->add_option("--seed", opts.seed, "Master seed");
    cmd->add_option("--out", opts.out, "Output directory");
    cmd->add_option("--replications", opts.replications, "Journey replications");
    cmd->add_option("--override", opts.overrides, "key=value, e.g. measurement.bandwidth_hz=200e6");
    cmd->add_option("--workers", opts.workers, "Worker threads (0 = all cores)");
  };

  auto* simulate = app.add_subcommand("simulate", "Run a campaign");
  simulate->require_subcommand(1);
  auto* pos = simulate->add_subcommand("pos", "Positioning campaign");
  auto* link = simulate->add_subcommand("link", "Link-level throughput campaign");
  add_common(pos);
  add_common(link);

  auto* validate = app.add_subcommand("validate", "Estimator checks");
  validate->require_subcommand(1);
  auto* crlb = validate->add_subcommand("crlb", "Cross-correlation TOA estimator against the CRLB");
  double crlb_bw = 400e6;
  std::vector<double> crlb_snr{10, 20, 30};
  int crlb_trials = 2000;
  std::uint64_t crlb_seed = 1;
  crlb->add_option("--bandwidth", crlb_bw, "Signal bandwidth in Hz");
  crlb->add_option("--snr", crlb_snr, "SNR points in dB");
  crlb->add_option("--trials", crlb_trials, "Trials per SNR point");
  crlb->add_option("--seed", crlb_seed, "Seed");

  auto* defaults = app.add_subcommand("print-defaults", "Print the default configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (pos->parsed()) return simulate_pos(opts);
    if (link->parsed()) return simulate_link(opts);
    if (crlb->parsed()) return validate_crlb_cmd(crlb_bw, crlb_snr, crlb_trials, crlb_seed);
    if (defaults->parsed()) {
      std::fputs(to_json_text(CampaignConfig{}).c_str(), stdout);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
