#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lteu/config.hpp"
#include "lteu/multigame.hpp"
#include "lteu/topology.hpp"

namespace lteu {

enum class SweepAxis { Load, NWap };

std::string_view to_string(SweepAxis axis);
std::optional<SweepAxis> parse_axis(std::string_view text);

struct SweepSpec {
  SweepAxis axis = SweepAxis::Load;
  std::vector<double> values;  // per-WUE demand in bits/s, or WAP counts
  std::vector<Mode> modes = {Mode::MultiGame, Mode::SingleGame, Mode::Lbt};
  int replications = 1;
};

/// Throws ConfigError unless values are non-empty and strictly increasing,
/// WAP counts are non-negative integers, modes are distinct and
/// replications >= 1.
void validate(const SweepSpec& sweep);

/// Axis values and replication count taken from the config.
SweepSpec sweep_from_config(const ScenarioConfig& config, SweepAxis axis,
                            std::vector<Mode> modes);

/// The config of one sweep point: the axis value patched in, seed replaced.
ScenarioConfig scenario_at(const ScenarioConfig& config, SweepAxis axis, double value,
                           std::uint64_t seed);

struct ResultRow {
  Mode mode = Mode::MultiGame;
  SweepAxis axis = SweepAxis::Load;
  double axis_value = 0.0;
  std::uint64_t seed = 0;
  double wap_sum_throughput = 0.0;  // bits/s
  double bs_sum_rate = 0.0;         // bits/s
  bool mgs_ok = false;
  bool converged = false;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

/// Called once per solve with everything needed to audit it. Invocations are
/// serialized but their order is unspecified.
using SweepObserver =
    std::function<void(const ResultRow&, const MultiGameOutcome&, const NetworkTopology&,
                       const ScenarioConfig&)>;

struct SweepOptions {
  std::optional<std::uint64_t> seed_base;  // defaults to config.seed
  unsigned workers = 0;                    // 0 = hardware concurrency
  SweepObserver observer;
};

/// Solves every (axis value, seed, mode) point. Rows come back axis-major,
/// then seed, then mode in the order of sweep.modes, regardless of how the
/// points were scheduled. A failing solve aborts with an Error naming the
/// point.
std::vector<ResultRow> run_sweep(const ScenarioConfig& config, const SweepSpec& sweep,
                                 const SweepOptions& options = {});

inline constexpr std::string_view kCsvHeader =
    "mode,axis,axis_value,seed,wap_sum_throughput_bps,bs_sum_rate_bps,mgs_ok,converged";

/// Header plus one line per row, decimals at 6 significant digits, '\n' line
/// ends.
std::string emit_csv(std::span<const ResultRow> rows);

/// Inverse of emit_csv (up to the printed precision).
std::vector<ResultRow> parse_csv(std::string_view text);

}  // namespace lteu
