#include "lteu/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lteu/error.hpp"

namespace lteu {

using nlohmann::json;

double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

std::vector<double> default_load_axis() {
  constexpr int kPoints = 20;
  std::vector<double> axis;
  axis.reserve(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    const double exponent = -1.0 + 2.0 * i / (kPoints - 1);
    axis.push_back(2e6 * std::pow(10.0, exponent));
  }
  return axis;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid config: " + what);
}

template <class T>
bool strictly_increasing(const std::vector<T>& values) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i - 1] < values[i])) return false;
  }
  return true;
}

// Binds each accepted JSON key to a setter; anything else is an error.
using Setter = std::function<void(const json&)>;

template <class T>
Setter bind(T& field) {
  return [&field](const json& value) { field = value.get<T>(); };
}

void apply(const json& doc, const std::map<std::string, Setter>& setters,
           const std::string& scope) {
  if (!doc.is_object()) {
    throw ConfigError(scope + " must be a JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError("unknown config key '" + scope + key + "'");
    }
    try {
      it->second(value);
    } catch (const json::exception& e) {
      throw ConfigError("bad value for '" + scope + key + "': " + e.what());
    }
  }
}

}  // namespace

void validate(const MacParams& mac) {
  require(mac.t_success > 0, "mac.t_success must be > 0");
  require(mac.t_collision > 0, "mac.t_collision must be > 0");
  require(mac.t_idle_slot > 0, "mac.t_idle_slot must be > 0");
  require(mac.difs > 0, "mac.difs must be > 0");
  require(mac.sifs > 0, "mac.sifs must be > 0");
  require(mac.rts_bytes >= 0, "mac.rts_bytes must be >= 0");
  require(mac.cts_bytes >= 0, "mac.cts_bytes must be >= 0");
  require(mac.cw_min >= 1, "mac.cw_min must be >= 1");
  require(mac.backoff_stages >= 0, "mac.backoff_stages must be >= 0");
}

void validate(const ScenarioConfig& c) {
  require(c.n_bs >= 0 && c.n_wap >= 0 && c.n_wue >= 0,
          "node counts must be >= 0");
  require(c.n_channels >= 1 || c.n_bs + c.n_wap == 0,
          "n_channels must be >= 1 when any access point exists");
  require(c.n_channels >= 0, "n_channels must be >= 0");
  require(c.area_side > 0, "area_side must be > 0");
  require(c.tx_power_bs > 0 && c.tx_power_wap > 0, "powers must be > 0");
  require(c.noise_power > 0, "noise_power must be > 0");
  require(c.path_loss_exponent > 0, "path_loss_exponent must be > 0");
  require(c.ref_loss_db >= 0, "ref_loss_db must be >= 0");
  require(c.channel_bandwidth > 0, "channel_bandwidth must be > 0");
  validate(c.mac);
  require(c.wap_quota >= 0, "wap_quota must be >= 0");
  require(c.target_utility_fraction > 0 && c.target_utility_fraction <= 1,
          "target_utility_fraction must lie in (0, 1]");
  require(c.wue_demand >= 0, "wue_demand must be >= 0");
  require(c.bs_reference_distance > 0, "bs_reference_distance must be > 0");
  require(c.max_rounds >= 1, "max_rounds must be >= 1");
  require(c.coupled_iterations >= 0, "coupled_iterations must be >= 0");
  require(!c.load_axis.empty() && strictly_increasing(c.load_axis),
          "load_axis must be non-empty and strictly increasing");
  for (double v : c.load_axis) require(v >= 0, "load_axis values must be >= 0");
  require(!c.nwap_axis.empty() && strictly_increasing(c.nwap_axis),
          "nwap_axis must be non-empty and strictly increasing");
  for (int v : c.nwap_axis) require(v >= 0, "nwap_axis values must be >= 0");
  require(c.replications >= 1, "replications must be >= 1");
}

ScenarioConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  ScenarioConfig c;
  MacParams& m = c.mac;
  const std::map<std::string, Setter> mac_setters = {
      {"t_success", bind(m.t_success)},
      {"t_collision", bind(m.t_collision)},
      {"t_idle_slot", bind(m.t_idle_slot)},
      {"difs", bind(m.difs)},
      {"sifs", bind(m.sifs)},
      {"rts_bytes", bind(m.rts_bytes)},
      {"cts_bytes", bind(m.cts_bytes)},
      {"cw_min", bind(m.cw_min)},
      {"backoff_stages", bind(m.backoff_stages)},
  };
  const std::map<std::string, Setter> setters = {
      {"n_bs", bind(c.n_bs)},
      {"n_wap", bind(c.n_wap)},
      {"n_wue", bind(c.n_wue)},
      {"n_channels", bind(c.n_channels)},
      {"area_side", bind(c.area_side)},
      {"tx_power_bs", bind(c.tx_power_bs)},
      {"tx_power_wap", bind(c.tx_power_wap)},
      {"noise_power", bind(c.noise_power)},
      {"path_loss_exponent", bind(c.path_loss_exponent)},
      {"ref_loss_db", bind(c.ref_loss_db)},
      {"channel_bandwidth", bind(c.channel_bandwidth)},
      {"mac", [&](const json& v) { apply(v, mac_setters, "mac."); }},
      {"wap_quota", bind(c.wap_quota)},
      {"target_utility_fraction", bind(c.target_utility_fraction)},
      {"wue_demand", bind(c.wue_demand)},
      {"bs_reference_distance", bind(c.bs_reference_distance)},
      {"max_rounds", bind(c.max_rounds)},
      {"coupled_iterations", bind(c.coupled_iterations)},
      {"load_axis", bind(c.load_axis)},
      {"nwap_axis", bind(c.nwap_axis)},
      {"replications", bind(c.replications)},
      {"seed", bind(c.seed)},
  };
  apply(doc, setters, "");
  validate(c);
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string dump_config(const ScenarioConfig& c) {
  const MacParams& m = c.mac;
  json doc = {
      {"n_bs", c.n_bs},
      {"n_wap", c.n_wap},
      {"n_wue", c.n_wue},
      {"n_channels", c.n_channels},
      {"area_side", c.area_side},
      {"tx_power_bs", c.tx_power_bs},
      {"tx_power_wap", c.tx_power_wap},
      {"noise_power", c.noise_power},
      {"path_loss_exponent", c.path_loss_exponent},
      {"ref_loss_db", c.ref_loss_db},
      {"channel_bandwidth", c.channel_bandwidth},
      {"mac",
       {{"t_success", m.t_success},
        {"t_collision", m.t_collision},
        {"t_idle_slot", m.t_idle_slot},
        {"difs", m.difs},
        {"sifs", m.sifs},
        {"rts_bytes", m.rts_bytes},
        {"cts_bytes", m.cts_bytes},
        {"cw_min", m.cw_min},
        {"backoff_stages", m.backoff_stages}}},
      {"wap_quota", c.wap_quota},
      {"target_utility_fraction", c.target_utility_fraction},
      {"wue_demand", c.wue_demand},
      {"bs_reference_distance", c.bs_reference_distance},
      {"max_rounds", c.max_rounds},
      {"coupled_iterations", c.coupled_iterations},
      {"load_axis", c.load_axis},
      {"nwap_axis", c.nwap_axis},
      {"replications", c.replications},
      {"seed", c.seed},
  };
  return doc.dump(2);
}

}  // namespace lteu
