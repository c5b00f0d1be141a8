#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "lteu/wifi_mac.hpp"

namespace lteu {

/// Converts a power in dBm to watts.
double dbm_to_watts(double dbm);

/// Default load axis: 20 log-spaced per-WUE demands spanning 0.1x..10x of
/// 2 Mbit/s.
std::vector<double> default_load_axis();

/// Every tunable parameter of a scenario. Defaults reproduce the case-study
/// network (40 BSs, 30 WAPs, 150 WUEs, 10 channels, 0.5 W / 1 W).
struct ScenarioConfig {
  int n_bs = 40;
  int n_wap = 30;
  int n_wue = 150;
  int n_channels = 10;
  double area_side = 500.0;  // m
  double tx_power_bs = 1.0;  // W
  double tx_power_wap = 0.5;  // W
  double noise_power = dbm_to_watts(-101.0);  // W over one channel
  double path_loss_exponent = 3.0;
  double ref_loss_db = 40.0;  // at 1 m
  double channel_bandwidth = 20e6;  // Hz
  MacParams mac;

  int wap_quota = 8;
  double target_utility_fraction = 0.9;
  double wue_demand = 2e6;  // bits/s per matched WUE
  double bs_reference_distance = 10.0;  // m, synthetic LTE user

  int max_rounds = 100;
  // Extra passes re-solving the WAP game against the BS allocation; 0 keeps
  // the strict single pass 1 -> 2 -> 3.
  int coupled_iterations = 0;

  std::vector<double> load_axis = default_load_axis();  // bits/s per WUE
  std::vector<int> nwap_axis = {10, 20, 30, 40};
  int replications = 5;
  std::uint64_t seed = 1;
};

/// Throws ConfigError describing the first violated constraint.
void validate(const ScenarioConfig& config);

/// Parses a JSON document. Every key is optional; unknown keys are rejected.
ScenarioConfig parse_config(std::string_view json_text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Serializes every field, so the result round-trips through parse_config.
std::string dump_config(const ScenarioConfig& config);

}  // namespace lteu
