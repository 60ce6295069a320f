// SPDX-License-Identifier: Apache-2.0
#include "hst/harness/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hst/common/errors.hpp"
#include "hst/link/compensation.hpp"
#include "hst/link/numerology.hpp"
#include "hst/link/throughput.hpp"

namespace hst::harness {
namespace {

using nlohmann::json;

json array_json(const scenario::ArrayGeometry& a) {
  return {{"horizontal", a.horizontal}, {"vertical", a.vertical}, {"spacing", a.spacing}};
}

json to_json(const CampaignConfig& c) {
  const auto& s = c.scenario;
  const auto& ch = c.channel;
  const auto& m = c.measurement;
  const auto& l = c.link;
  return {
      {"scenario",
       {{"track_length_m", s.track_length_m},
        {"track_seed", s.track_seed},
        {"curvature", s.curvature},
        {"max_curvature", s.max_curvature},
        {"curvature_correlation_m", s.curvature_correlation_m},
        {"inter_site_distance_m", s.inter_site_distance_m},
        {"lateral_offset_m", s.lateral_offset_m},
        {"rrh_array", array_json(s.rrh_array)},
        {"train_array", array_json(s.train_array)},
        {"max_speed_kmh", s.max_speed_kmh},
        {"slow_speed_kmh", s.slow_speed_kmh},
        {"acceleration_mps2", s.acceleration_mps2},
        {"cruise_s", s.cruise_s},
        {"reference_length_m", s.reference_length_m}}},
      {"channel",
       {{"carrier_hz", ch.carrier_hz},
        {"tx_power_dbm", ch.tx_power_dbm},
        {"rrh_noise_figure_db", ch.rrh_noise_figure_db},
        {"shadowing_sigma_db", ch.shadowing_sigma_db},
        {"shadowing_decorrelation_m", ch.shadowing_decorrelation_m},
        {"shadowing_enabled", ch.shadowing_enabled},
        {"k_factor_db", ch.k_factor_db},
        {"delay_spread_s", ch.delay_spread_s}}},
      {"measurement",
       {{"bandwidth_hz", m.bandwidth_hz},
        {"srs_interval_s", m.srs_interval_s},
        {"rrh_count", m.rrh_count},
        {"snr_floor_db", m.snr_floor_db},
        {"snr_estimate_error_db", m.snr_estimate_error_db},
        {"noise_enabled", m.noise_enabled},
        {"clock_walk_s_per_sqrt_s", m.clock_walk_s_per_sqrt_s}}},
      {"tracking",
       {{"q", c.tracking.q}, {"gate_probability", c.tracking.gate_probability}, {"reinit_after", c.tracking.reinit_after}}},
      {"beam", {{"train_mode", c.beam.train_mode}, {"sweep_span_deg", c.beam.sweep_span_deg}}},
      {"link",
       {{"mcs", l.mcs},
        {"prbs", l.prbs},
        {"snr_db", l.snr_db},
        {"distances_m", l.distances_m},
        {"modes", l.modes},
        {"realizations", l.realizations},
        {"ici_half_width", l.ici_half_width},
        {"speed_kmh", l.speed_kmh},
        {"phase_noise",
         {{"enabled", l.phase_noise_enabled},
          {"level_dbc_hz", l.phase_noise.level_dbc_hz},
          {"zeros_hz", l.phase_noise.zeros_hz},
          {"poles_hz", l.phase_noise.poles_hz}}},
        {"errors",
         {{"source", l.errors.source},
          {"position_sigma_m", l.errors.position_sigma_m},
          {"velocity_sigma_mps", l.errors.velocity_sigma_mps}}}}},
      {"replications", c.replications},
      {"seed", c.seed},
      {"output_dir", c.output_dir},
  };
}

bool same_kind(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) {
    // Integers in the defaults must stay integers.
    return !(a.is_number_integer() && !b.is_number_integer());
  }
  return a.type() == b.type();
}

// Overlays `user` onto `base`, rejecting keys base does not have.
void merge(json& base, const json& user, const std::string& path) {
  if (!user.is_object()) throw ConfigError("expected an object at '" + path + "'");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = path.empty() ? it.key() : path + "." + it.key();
    if (!base.contains(it.key())) throw ConfigError("unknown configuration key '" + key + "'");
    json& slot = base[it.key()];
    if (slot.is_object()) {
      merge(slot, it.value(), key);
    } else if (!same_kind(slot, it.value())) {
      throw ConfigError("type mismatch for '" + key + "'");
    } else {
      slot = it.value();
    }
  }
}

void apply_override(json& tree, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override must look like key=value: '" + std::string(assignment) + "'");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  // Build {"a": {"b": value}} and merge it so the same checks apply.
  json patch = value;
  std::string rest = key;
  std::vector<std::string> parts;
  for (std::size_t pos; (pos = rest.find('.')) != std::string::npos; rest = rest.substr(pos + 1)) {
    parts.push_back(rest.substr(0, pos));
  }
  parts.push_back(rest);
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) patch = json{{*it, patch}};
  merge(tree, patch, "");
}

template <typename T>
T get(const json& j, const char* key) {
  return j.at(key).get<T>();
}

scenario::ArrayGeometry array_from(const json& j) {
  return {get<int>(j, "horizontal"), get<int>(j, "vertical"), get<double>(j, "spacing")};
}

CampaignConfig from_json(const json& j) {
  CampaignConfig c;
  const json& s = j.at("scenario");
  c.scenario.track_length_m = get<double>(s, "track_length_m");
  c.scenario.track_seed = get<std::uint64_t>(s, "track_seed");
  c.scenario.curvature = get<std::string>(s, "curvature");
  c.scenario.max_curvature = get<double>(s, "max_curvature");
  c.scenario.curvature_correlation_m = get<double>(s, "curvature_correlation_m");
  c.scenario.inter_site_distance_m = get<double>(s, "inter_site_distance_m");
  c.scenario.lateral_offset_m = get<double>(s, "lateral_offset_m");
  c.scenario.rrh_array = array_from(s.at("rrh_array"));
  c.scenario.train_array = array_from(s.at("train_array"));
  c.scenario.max_speed_kmh = get<double>(s, "max_speed_kmh");
  c.scenario.slow_speed_kmh = get<double>(s, "slow_speed_kmh");
  c.scenario.acceleration_mps2 = get<double>(s, "acceleration_mps2");
  c.scenario.cruise_s = get<double>(s, "cruise_s");
  c.scenario.reference_length_m = get<double>(s, "reference_length_m");

  const json& ch = j.at("channel");
  c.channel.carrier_hz = get<double>(ch, "carrier_hz");
  c.channel.tx_power_dbm = get<double>(ch, "tx_power_dbm");
  c.channel.rrh_noise_figure_db = get<double>(ch, "rrh_noise_figure_db");
  c.channel.shadowing_sigma_db = get<double>(ch, "shadowing_sigma_db");
  c.channel.shadowing_decorrelation_m = get<double>(ch, "shadowing_decorrelation_m");
  c.channel.shadowing_enabled = get<bool>(ch, "shadowing_enabled");
  c.channel.k_factor_db = get<double>(ch, "k_factor_db");
  c.channel.delay_spread_s = get<double>(ch, "delay_spread_s");

  const json& m = j.at("measurement");
  c.measurement.bandwidth_hz = get<double>(m, "bandwidth_hz");
  c.measurement.srs_interval_s = get<double>(m, "srs_interval_s");
  c.measurement.rrh_count = get<int>(m, "rrh_count");
  c.measurement.snr_floor_db = get<double>(m, "snr_floor_db");
  c.measurement.snr_estimate_error_db = get<double>(m, "snr_estimate_error_db");
  c.measurement.noise_enabled = get<bool>(m, "noise_enabled");
  c.measurement.clock_walk_s_per_sqrt_s = get<double>(m, "clock_walk_s_per_sqrt_s");

  const json& t = j.at("tracking");
  c.tracking.q = get<double>(t, "q");
  c.tracking.gate_probability = get<double>(t, "gate_probability");
  c.tracking.reinit_after = get<int>(t, "reinit_after");

  const json& b = j.at("beam");
  c.beam.train_mode = get<std::string>(b, "train_mode");
  c.beam.sweep_span_deg = get<double>(b, "sweep_span_deg");

  const json& l = j.at("link");
  c.link.mcs = get<int>(l, "mcs");
  c.link.prbs = get<int>(l, "prbs");
  c.link.snr_db = get<std::vector<double>>(l, "snr_db");
  c.link.distances_m = get<std::vector<double>>(l, "distances_m");
  c.link.modes = get<std::vector<std::string>>(l, "modes");
  c.link.realizations = get<int>(l, "realizations");
  c.link.ici_half_width = get<int>(l, "ici_half_width");
  c.link.speed_kmh = get<double>(l, "speed_kmh");
  const json& pn = l.at("phase_noise");
  c.link.phase_noise_enabled = get<bool>(pn, "enabled");
  c.link.phase_noise.level_dbc_hz = get<double>(pn, "level_dbc_hz");
  c.link.phase_noise.zeros_hz = get<std::vector<double>>(pn, "zeros_hz");
  c.link.phase_noise.poles_hz = get<std::vector<double>>(pn, "poles_hz");
  const json& e = l.at("errors");
  c.link.errors.source = get<std::string>(e, "source");
  c.link.errors.position_sigma_m = get<double>(e, "position_sigma_m");
  c.link.errors.velocity_sigma_mps = get<double>(e, "velocity_sigma_mps");

  c.replications = get<int>(j, "replications");
  c.seed = get<std::uint64_t>(j, "seed");
  c.output_dir = get<std::string>(j, "output_dir");
  return c;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

CampaignConfig parse_config(std::string_view text, std::span<const std::string> overrides) {
  json tree = to_json(CampaignConfig{});
  if (!text.empty()) {
    const json user = json::parse(text, nullptr, false);
    if (user.is_discarded()) throw ConfigError("configuration is not valid JSON");
    merge(tree, user, "");
  }
  for (const auto& o : overrides) apply_override(tree, o);
  CampaignConfig c;
  try {
    c = from_json(tree);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad configuration value: ") + e.what());
  }
  validate(c);
  return c;
}

CampaignConfig load_config(const std::filesystem::path& path, std::span<const std::string> overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

CampaignConfig with_overrides(const CampaignConfig& config, std::span<const std::string> overrides) {
  json tree = to_json(config);
  for (const auto& o : overrides) apply_override(tree, o);
  CampaignConfig c = from_json(tree);
  validate(c);
  return c;
}

std::string to_json_text(const CampaignConfig& config) { return to_json(config).dump(2) + "\n"; }

void validate(const CampaignConfig& c) {
  const auto& s = c.scenario;
  require(s.track_length_m > 0.0, "scenario.track_length_m must be positive");
  require(s.curvature == "straight" || s.curvature == "constant" || s.curvature == "random",
          "scenario.curvature must be straight, constant or random");
  require(std::abs(s.max_curvature) <= scenario::kMaxTrackCurvature, "scenario.max_curvature is too large");
  require(s.inter_site_distance_m > 0.0 && s.lateral_offset_m > 0.0, "RRH spacing and offset must be positive");
  for (const auto* a : {&s.rrh_array, &s.train_array}) {
    require(a->horizontal > 0 && a->vertical > 0 && a->spacing > 0.0, "array dimensions must be positive");
  }
  require(s.max_speed_kmh > s.slow_speed_kmh && s.slow_speed_kmh > 0.0, "speeds must satisfy max > slow > 0");
  require(s.acceleration_mps2 > 0.0 && s.cruise_s >= 0.0 && s.reference_length_m > 0.0, "bad journey shape");
  require(c.channel.delay_spread_s > 0.0, "channel.delay_spread_s must be positive");
  require(c.channel.shadowing_sigma_db >= 0.0 && c.channel.shadowing_decorrelation_m > 0.0, "bad shadowing");
  const auto& m = c.measurement;
  require(m.bandwidth_hz > 0.0, "measurement.bandwidth_hz must be positive");
  require(m.srs_interval_s > 0.0, "measurement.srs_interval_s must be positive");
  require(m.rrh_count >= 3, "measurement.rrh_count must be at least 3");
  require(m.clock_walk_s_per_sqrt_s >= 0.0, "clock walk must be non-negative");
  require(c.tracking.q > 0.0, "tracking.q must be positive");
  require(c.tracking.gate_probability > 0.0 && c.tracking.gate_probability < 1.0, "gate probability out of range");
  require(c.tracking.reinit_after >= 1, "tracking.reinit_after must be at least 1");
  require(c.beam.train_mode == "sweep" || c.beam.train_mode == "fixed", "beam.train_mode must be sweep or fixed");
  require(c.beam.sweep_span_deg > 0.0 && c.beam.sweep_span_deg <= 90.0, "beam.sweep_span_deg out of range");
  const auto& l = c.link;
  (void)link::mcs_entry(l.mcs);
  (void)link::make_numerology(l.prbs);
  for (const auto& mode : l.modes) (void)link::parse_mode(mode);
  require(!l.modes.empty() && !l.snr_db.empty() && !l.distances_m.empty(), "link sweep lists must not be empty");
  for (double d : l.distances_m) require(d >= 0.0 && d <= s.inter_site_distance_m, "link distance out of range");
  require(l.realizations >= 1, "link.realizations must be at least 1");
  require(l.ici_half_width >= 0 && 2 * l.ici_half_width + 1 < link::kPtrsSubcarriers, "link.ici_half_width out of range");
  require(l.phase_noise.zeros_hz.size() == l.phase_noise.poles_hz.size(), "phase noise needs as many zeros as poles");
  require(l.errors.source == "ideal" || l.errors.source == "gaussian" || l.errors.source == "campaign",
          "link.errors.source must be ideal, gaussian or campaign");
  require(l.errors.position_sigma_m >= 0.0 && l.errors.velocity_sigma_mps >= 0.0, "error sigmas must be non-negative");
  require(c.replications >= 1, "replications must be at least 1");
}

scenario::CurvatureSpec curvature_spec(const ScenarioConfig& s) {
  if (s.curvature == "straight") return scenario::CurvatureSpec::straight();
  if (s.curvature == "constant") return scenario::CurvatureSpec::constant(s.max_curvature);
  return scenario::CurvatureSpec::random(s.max_curvature, s.curvature_correlation_m);
}

scenario::JourneyShape journey_shape(const ScenarioConfig& s) {
  scenario::JourneyShape j;
  j.max_speed = s.max_speed_kmh / 3.6;
  j.slow_speed = s.slow_speed_kmh / 3.6;
  j.acceleration = s.acceleration_mps2;
  j.cruise_s = s.cruise_s;
  j.reference_length_m = s.reference_length_m;
  return j;
}

measurements::SrsConfig srs_config(const CampaignConfig& c) {
  measurements::SrsConfig s;
  s.carrier_hz = c.channel.carrier_hz;
  s.bandwidth_hz = c.measurement.bandwidth_hz;
  s.tx_power_dbm = c.channel.tx_power_dbm;
  s.rrh_noise_figure_db = c.channel.rrh_noise_figure_db;
  s.snr_floor_db = c.measurement.snr_floor_db;
  s.snr_estimate_error_db = c.measurement.snr_estimate_error_db;
  s.noise_enabled = c.measurement.noise_enabled;
  s.shadowing.sigma_db = c.channel.shadowing_sigma_db;
  s.shadowing.decorrelation_m = c.channel.shadowing_decorrelation_m;
  s.shadowing.enabled = c.channel.shadowing_enabled;
  return s;
}

tracking::TrackerConfig tracker_config(const CampaignConfig& c) {
  tracking::TrackerConfig t;
  t.process.q = c.tracking.q;
  t.gate_probability = c.tracking.gate_probability;
  t.reinit_after = c.tracking.reinit_after;
  if (!c.measurement.noise_enabled) t.measurement_noise_scale = 1e-8;
  return t;
}

scenario::TrainCodebook train_codebook(const CampaignConfig& c) {
  if (c.beam.train_mode == "fixed") return scenario::TrainCodebook::fixed(c.scenario.train_array);
  return scenario::TrainCodebook::sweep(c.scenario.train_array, deg2rad(c.beam.sweep_span_deg));
}

link::LinkConfig link_config(const CampaignConfig& c) {
  link::LinkConfig l;
  l.mcs = c.link.mcs;
  l.prbs = c.link.prbs;
  l.snr_db = c.link.snr_db;
  l.distances_m = c.link.distances_m;
  l.modes.clear();
  for (const auto& m : c.link.modes) l.modes.push_back(link::parse_mode(m));
  l.realizations = c.link.realizations;
  l.ici_half_width = c.link.ici_half_width;
  l.phase_noise_enabled = c.link.phase_noise_enabled;
  l.phase_noise = c.link.phase_noise;
  l.carrier_hz = c.channel.carrier_hz;
  l.speed_mps = c.link.speed_kmh / 3.6;
  l.inter_site_distance = c.scenario.inter_site_distance_m;
  l.lateral_offset = c.scenario.lateral_offset_m;
  l.k_factor_db = c.channel.k_factor_db;
  l.delay_spread_s = c.channel.delay_spread_s;
  l.rrh_array = c.scenario.rrh_array;
  l.train_array = c.scenario.train_array;
  l.train_sweep_span_rad = deg2rad(c.beam.sweep_span_deg);
  return l;
}

}  // namespace hst::harness
