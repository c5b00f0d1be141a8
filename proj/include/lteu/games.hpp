#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lteu/config.hpp"
#include "lteu/matching.hpp"
#include "lteu/topology.hpp"
#include "lteu/wifi_mac.hpp"

namespace lteu {

enum class GameId { WueWap, WapChannel, BsChannel };

/// How LTE BSs obtain airtime on a channel they share with WAPs.
///  - Priority: BSs fill the WiFi residual only up to the largest aggregate
///    airtime that keeps every resident WAP at its target; equal split.
///  - Unregulated: every BS claims the whole WiFi residual on its own; the
///    claims add up to at most the full channel.
///  - Lbt: every contending AP (active WAP or BS) gets an equal share.
enum class AccessPolicy { Priority, Unregulated, Lbt };

/// The joint outcome {o_1, o_2, o_3}; a component is empty until its game is
/// solved.
struct OutcomeVector {
  std::optional<Matching> wue_wap;
  std::optional<ChannelAllocation> wap_channel;
  std::optional<ChannelAllocation> bs_channel;  // airtime filled per BS
};

struct WuePreferences {
  PreferenceProfile wue;  // WUE -> WAPs by descending link rate
  PreferenceProfile wap;  // WAP -> WUEs by descending link rate
};

/// Complete strict preference lists for the WUE/WAP association game. Ties
/// break toward the lower index.
WuePreferences build_wue_preferences(const NetworkTopology& topology,
                                     const ScenarioConfig& config);

/// Interference-free WAP -> WUE link rate.
double wue_link_rate(std::size_t wap, std::size_t wue, const NetworkTopology& topology,
                     const ScenarioConfig& config);

/// What a WAP brings to a channel once its WUEs are associated.
struct WapDemand {
  std::size_t n_wues = 0;
  double phy_rate = 0.0;  // mean link rate over its WUEs, bits/s
  double offered = 0.0;   // sum of WUE demands capped by phy_rate, bits/s

  bool active() const { return offered > 0.0; }
};

/// Per-channel evaluation under one access policy. Vectors are aligned with
/// the WAP and BS lists passed to CoexistenceModel::evaluate.
struct ChannelState {
  ChannelContention contention;  // among the active resident WAPs
  double bs_airtime_total = 0.0;
  double wifi_busy = 0.0;  // busy_fraction scaled by served / capacity
  std::vector<double> wap_served;
  std::vector<double> bs_airtime;
  std::vector<double> bs_utility;
};

/// Radio and MAC state for one solve: WAP demands derived from o_1 and the
/// BS reference-user gains. Evaluations are pure; the attempt-probability
/// memo makes an instance unsafe to share across threads.
class CoexistenceModel {
 public:
  CoexistenceModel(const NetworkTopology& topology, const ScenarioConfig& config,
                   const Matching& wue_wap);

  const ScenarioConfig& config() const { return config_; }
  std::size_t n_wap() const { return demands_.size(); }
  std::size_t n_bs() const { return n_bs_; }
  int n_channels() const { return config_.n_channels; }
  const WapDemand& demand(std::size_t wap) const { return demands_.at(wap); }

  /// Contention among the active WAPs of `waps`; payload rate is their mean
  /// physical rate.
  ChannelContention contention(std::span<const std::size_t> waps) const;

  /// Throughput of each WAP in `waps` with no LTE airtime.
  std::vector<double> bs_free_throughput(std::span<const std::size_t> waps) const;

  /// Largest aggregate BS airtime in [0, 1] keeping every WAP in `waps` at or
  /// above targets[wap]; bisection to 1e-6, always returning a feasible value.
  double protection_cap(std::span<const std::size_t> waps,
                        std::span<const double> targets) const;

  /// Rate at the BS's reference user with the other BSs in `co_channel`
  /// transmitting (entries equal to `bs` are skipped).
  double bs_link_rate(std::size_t bs, std::span<const std::size_t> co_channel) const;

  /// Full evaluation of one channel. `targets` (indexed by WAP) is only read
  /// under the Priority policy.
  ChannelState evaluate(std::span<const std::size_t> waps,
                        std::span<const std::size_t> bss, AccessPolicy policy,
                        std::span<const double> targets = {}) const;

 private:
  ScenarioConfig config_;
  std::vector<WapDemand> demands_;
  std::size_t n_bs_ = 0;
  double bs_reference_gain_ = 0.0;
  std::vector<double> bs_gain_;  // n_bs x n_bs
  AttemptProbabilityCache tau_cache_;
};

/// Players of `alloc` sitting on `channel`, treating `player` as if it sat on
/// `channel` whatever alloc[player] says.
std::vector<std::size_t> members_on(int channel, std::span<const int> alloc,
                                    std::optional<std::size_t> player = std::nullopt);

/// Game description consumed by the solvers: u_m(a_-m, {o_i}).
struct GameDefinition {
  using Utility = std::function<double(std::size_t player, int action,
                                       std::span<const int> actions,
                                       const OutcomeVector& others)>;
  GameId id;
  std::size_t n_players = 0;
  std::vector<std::vector<int>> action_sets;
  Utility utility;
};

/// WUEs choosing WAPs; utility is the interference-free link rate.
GameDefinition make_wue_wap_game(const NetworkTopology& topology,
                                 const ScenarioConfig& config);

/// WAPs choosing channels; LTE occupancy is read from the airtimes recorded
/// in o_3 (none when o_3 is absent).
GameDefinition make_wap_channel_game(const CoexistenceModel& model);

/// BSs choosing channels given o_2. `targets` is read under Priority.
GameDefinition make_bs_channel_game(const CoexistenceModel& model,
                                    AccessPolicy policy,
                                    std::vector<double> targets = {});

/// Fixes the other games' outcomes, yielding the form the channel solvers
/// take.
ChannelUtility bind_outcomes(const GameDefinition& game, OutcomeVector others);

/// Served throughput of `wap` on `channel`. Offered load comes from its WUEs
/// in o_1; LTE airtime is the sum of airtimes recorded in `bs_alloc` for BSs
/// on `channel` (zero when absent).
double wap_channel_utility(std::size_t wap, int channel,
                           const ChannelAllocation& wap_alloc,
                           const std::optional<ChannelAllocation>& bs_alloc,
                           const Matching& o1, const NetworkTopology& topology,
                           const ScenarioConfig& config);

/// airtime x reference-user rate for `bs` on `channel` under `policy`. Under
/// Priority, `targets` defaults to the BS-free targets of wap_alloc.
double bs_channel_utility(std::size_t bs, int channel, const ChannelAllocation& bs_alloc,
                          const ChannelAllocation& wap_alloc, const Matching& o1,
                          const NetworkTopology& topology, const ScenarioConfig& config,
                          AccessPolicy policy,
                          std::optional<std::vector<double>> targets = std::nullopt);

/// target_utility_fraction x the WAP's BS-free throughput on its o_2 channel.
double wap_target_utility(std::size_t wap, const ScenarioConfig& config,
                          const NetworkTopology& topology, const Matching& o1,
                          const ChannelAllocation& o2);

/// wap_target_utility for every WAP.
std::vector<double> wap_targets(const CoexistenceModel& model,
                                const ChannelAllocation& o2);

}  // namespace lteu
