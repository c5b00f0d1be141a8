#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "lteu/config.hpp"
#include "lteu/games.hpp"
#include "lteu/matching.hpp"
#include "lteu/topology.hpp"

namespace lteu {

enum class Mode { MultiGame, SingleGame, Lbt };

std::string_view to_string(Mode mode);
/// Accepts MULTI_GAME / SINGLE_GAME / LBT and the short forms multi / single /
/// lbt, case-insensitively.
std::optional<Mode> parse_mode(std::string_view text);
AccessPolicy access_policy(Mode mode);

/// Aggregate state of one channel in a solved outcome.
struct ChannelSummary {
  std::size_t n_active_waps = 0;
  std::size_t n_bs = 0;
  double capacity = 0.0;
  double busy_fraction = 0.0;  // saturation busy fraction of the active WAPs
  double wifi_busy = 0.0;      // share of time actually used by WiFi
  double bs_airtime_total = 0.0;
};

struct MultiGameOutcome {
  OutcomeVector outcomes;
  std::vector<double> wap_utility;  // served throughput, bits/s
  std::vector<double> bs_utility;   // airtime x reference rate, bits/s
  std::optional<std::vector<double>> targets;  // MULTI_GAME only
  Mode mode = Mode::MultiGame;
  bool converged = false;
  int rounds_used = 0;
  std::vector<ChannelSummary> channels;

  double wap_sum() const;
  double bs_sum() const;
};

struct MgsReport {
  std::vector<Deviation> wifi_violations;  // below-target WAP that could reach it
  std::vector<Deviation> lte_violations;   // BS that could strictly improve

  bool condition1_ok() const { return wifi_violations.empty(); }
  bool condition2_ok() const { return lte_violations.empty(); }
  bool ok() const { return condition1_ok() && condition2_ok(); }
};

/// o_1 by deferred acceptance (WUEs propose, WAP quota from the config).
Matching solve_wue_association(const NetworkTopology& topology, const ScenarioConfig& config);

/// Games 1 -> 2 -> 3 under WiFi priority. Game 2 is solved BS-free; BSs then
/// pick channels with their aggregate airtime capped by the WAP targets.
MultiGameOutcome solve_multigame(const NetworkTopology& topology, const ScenarioConfig& config);

/// o_1, then one joint channel game over WAPs and BSs without protection.
MultiGameOutcome solve_single_game(const NetworkTopology& topology, const ScenarioConfig& config);

/// o_1, then one joint channel game with equal listen-before-talk shares.
MultiGameOutcome solve_lbt(const NetworkTopology& topology, const ScenarioConfig& config);

MultiGameOutcome solve(Mode mode, const NetworkTopology& topology, const ScenarioConfig& config);

/// One WAP or BS put on a given channel.
struct Placement {
  bool is_bs = false;
  std::size_t index = 0;
  int channel = 0;
};

/// Utility of the player in `placement` after it moves, everything else fixed.
double utility_after_move(const MultiGameOutcome& outcome, const CoexistenceModel& model,
                          const Placement& placement);

/// Multi-game stability. Condition 1 lists below-target WAPs with a channel
/// where they would reach their target; condition 2 lists BSs with a strictly
/// better channel. Utilities before and after are both re-evaluated from the
/// allocation under the outcome's own access rule; baselines are measured
/// against the BS-free targets.
MgsReport check_mgs(const MultiGameOutcome& outcome, const NetworkTopology& topology,
                    const ScenarioConfig& config);

/// Airtime budget and WiFi protection measured on a solved outcome.
struct OutcomeAudit {
  double max_channel_budget = 0.0;  // max over channels of wifi_busy + BS airtime
  std::vector<std::size_t> waps_below_target;       // MULTI_GAME only
  std::vector<std::size_t> infeasible_targets;      // below target even BS-free

  bool budget_ok() const { return max_channel_budget <= 1.0 + 1e-9; }
  bool priority_ok() const { return waps_below_target.empty(); }
};

OutcomeAudit audit_outcome(const MultiGameOutcome& outcome, const NetworkTopology& topology,
                           const ScenarioConfig& config);

}  // namespace lteu
