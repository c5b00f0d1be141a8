#include "lteu/multigame.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <string>

#include "lteu/error.hpp"

namespace lteu {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::MultiGame:
      return "MULTI_GAME";
    case Mode::SingleGame:
      return "SINGLE_GAME";
    case Mode::Lbt:
      return "LBT";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "multi_game" || lower == "multi") return Mode::MultiGame;
  if (lower == "single_game" || lower == "single") return Mode::SingleGame;
  if (lower == "lbt") return Mode::Lbt;
  return std::nullopt;
}

AccessPolicy access_policy(Mode mode) {
  switch (mode) {
    case Mode::MultiGame:
      return AccessPolicy::Priority;
    case Mode::SingleGame:
      return AccessPolicy::Unregulated;
    case Mode::Lbt:
      return AccessPolicy::Lbt;
  }
  return AccessPolicy::Priority;
}

double MultiGameOutcome::wap_sum() const {
  return std::accumulate(wap_utility.begin(), wap_utility.end(), 0.0);
}

double MultiGameOutcome::bs_sum() const {
  return std::accumulate(bs_utility.begin(), bs_utility.end(), 0.0);
}

namespace {

ChannelAllocation spread(std::size_t n_players, int n_channels) {
  ChannelAllocation alloc;
  alloc.channel.resize(n_players);
  for (std::size_t p = 0; p < n_players; ++p) {
    alloc.channel[p] = static_cast<int>(p % static_cast<std::size_t>(n_channels));
  }
  return alloc;
}

/// Evaluates every channel and assembles utilities, BS airtimes and summaries.
void finalize(MultiGameOutcome& out, const CoexistenceModel& model,
              std::span<const double> targets) {
  const auto& wap_ch = out.outcomes.wap_channel->channel;
  ChannelAllocation& bs_alloc = *out.outcomes.bs_channel;
  const AccessPolicy policy = access_policy(out.mode);

  out.wap_utility.assign(wap_ch.size(), 0.0);
  out.bs_utility.assign(bs_alloc.channel.size(), 0.0);
  bs_alloc.airtime.assign(bs_alloc.channel.size(), 0.0);
  out.channels.assign(static_cast<std::size_t>(model.n_channels()), {});

  for (int c = 0; c < model.n_channels(); ++c) {
    const auto waps = members_on(c, wap_ch);
    const auto bss = members_on(c, bs_alloc.channel);
    const ChannelState st = model.evaluate(waps, bss, policy, targets);
    for (std::size_t i = 0; i < waps.size(); ++i) out.wap_utility[waps[i]] = st.wap_served[i];
    for (std::size_t i = 0; i < bss.size(); ++i) {
      out.bs_utility[bss[i]] = st.bs_utility[i];
      bs_alloc.airtime[bss[i]] = st.bs_airtime[i];
    }
    ChannelSummary& s = out.channels[static_cast<std::size_t>(c)];
    s.n_active_waps = st.contention.n_waps;
    s.n_bs = bss.size();
    s.capacity = st.contention.capacity;
    s.busy_fraction = st.contention.busy_fraction;
    s.wifi_busy = st.wifi_busy;
    s.bs_airtime_total = st.bs_airtime_total;
  }
}

// Players of the joint game: WAP 0, BS 0, WAP 1, BS 1, ... then the rest.
struct JointPlayer {
  bool is_bs;
  std::size_t index;
};

std::vector<JointPlayer> interleave(std::size_t n_wap, std::size_t n_bs) {
  std::vector<JointPlayer> players;
  players.reserve(n_wap + n_bs);
  for (std::size_t i = 0; i < std::max(n_wap, n_bs); ++i) {
    if (i < n_wap) players.push_back({false, i});
    if (i < n_bs) players.push_back({true, i});
  }
  return players;
}

MultiGameOutcome solve_joint(Mode mode, const NetworkTopology& topology,
                             const ScenarioConfig& config) {
  validate(config);
  MultiGameOutcome out;
  out.mode = mode;
  out.outcomes.wue_wap = solve_wue_association(topology, config);
  const CoexistenceModel model(topology, config, *out.outcomes.wue_wap);
  const AccessPolicy policy = access_policy(mode);

  const auto players = interleave(topology.n_wap(), topology.n_bs());
  ChannelAllocation initial;
  initial.channel.reserve(players.size());
  for (const JointPlayer& p : players) {
    initial.channel.push_back(static_cast<int>(p.index % static_cast<std::size_t>(
                                                   std::max(config.n_channels, 1))));
  }

  const ChannelUtility utility = [&](std::size_t player, int channel,
                                     std::span<const int> alloc) {
    std::vector<std::size_t> waps;
    std::vector<std::size_t> bss;
    for (std::size_t q = 0; q < alloc.size(); ++q) {
      const int c = q == player ? channel : alloc[q];
      if (c != channel) continue;
      (players[q].is_bs ? bss : waps).push_back(players[q].index);
    }
    const ChannelState st = model.evaluate(waps, bss, policy);
    const JointPlayer& me = players[player];
    const auto& members = me.is_bs ? bss : waps;
    const auto pos = static_cast<std::size_t>(
        std::find(members.begin(), members.end(), me.index) - members.begin());
    return me.is_bs ? st.bs_utility[pos] : st.wap_served[pos];
  };

  const BestResponseResult joint = best_response_channel_matching(
      players.size(), config.n_channels, utility, std::move(initial), config.max_rounds);

  ChannelAllocation wap_alloc;
  ChannelAllocation bs_alloc;
  wap_alloc.channel.resize(topology.n_wap());
  bs_alloc.channel.resize(topology.n_bs());
  for (std::size_t q = 0; q < players.size(); ++q) {
    auto& target = players[q].is_bs ? bs_alloc.channel : wap_alloc.channel;
    target[players[q].index] = joint.allocation.channel[q];
  }
  out.outcomes.wap_channel = std::move(wap_alloc);
  out.outcomes.bs_channel = std::move(bs_alloc);
  out.converged = joint.converged;
  out.rounds_used = joint.rounds_used;
  finalize(out, model, {});
  return out;
}

}  // namespace

Matching solve_wue_association(const NetworkTopology& topology, const ScenarioConfig& config) {
  if (topology.n_wap() == 0) return Matching(topology.n_wue(), 0);
  const WuePreferences prefs = build_wue_preferences(topology, config);
  const std::vector<int> quotas(topology.n_wap(), config.wap_quota);
  return deferred_acceptance(prefs.wue, prefs.wap, quotas);
}

MultiGameOutcome solve_multigame(const NetworkTopology& topology, const ScenarioConfig& config) {
  validate(config);
  MultiGameOutcome out;
  out.mode = Mode::MultiGame;
  out.outcomes.wue_wap = solve_wue_association(topology, config);
  const CoexistenceModel model(topology, config, *out.outcomes.wue_wap);
  const int n_channels = std::max(config.n_channels, 1);

  // Game 2: WAPs pick channels as if no BS existed.
  OutcomeVector for_waps;
  for_waps.wue_wap = out.outcomes.wue_wap;
  BestResponseResult waps = best_response_channel_matching(
      model.n_wap(), n_channels, bind_outcomes(make_wap_channel_game(model), for_waps),
      spread(model.n_wap(), n_channels), config.max_rounds);
  std::vector<double> targets = wap_targets(model, waps.allocation);

  // Game 3: BSs respond with target-protected airtime.
  const auto solve_bs = [&](ChannelAllocation initial) {
    OutcomeVector for_bss;
    for_bss.wue_wap = out.outcomes.wue_wap;
    for_bss.wap_channel = waps.allocation;
    return best_response_channel_matching(
        model.n_bs(), n_channels,
        bind_outcomes(make_bs_channel_game(model, AccessPolicy::Priority, targets), for_bss),
        std::move(initial), config.max_rounds);
  };
  BestResponseResult bss = solve_bs(spread(model.n_bs(), n_channels));
  out.rounds_used = waps.rounds_used + bss.rounds_used;

  for (int iteration = 0; iteration < config.coupled_iterations; ++iteration) {
    out.outcomes.wap_channel = waps.allocation;
    out.outcomes.bs_channel = bss.allocation;
    finalize(out, model, targets);

    OutcomeVector given_bs = for_waps;
    given_bs.bs_channel = out.outcomes.bs_channel;
    BestResponseResult next_waps = best_response_channel_matching(
        model.n_wap(), n_channels, bind_outcomes(make_wap_channel_game(model), given_bs),
        waps.allocation, config.max_rounds);
    const bool wap_same = next_waps.allocation.channel == waps.allocation.channel;
    waps = std::move(next_waps);
    targets = wap_targets(model, waps.allocation);
    BestResponseResult next_bss = solve_bs(bss.allocation);
    const bool bs_same = next_bss.allocation.channel == bss.allocation.channel;
    bss = std::move(next_bss);
    out.rounds_used += waps.rounds_used + bss.rounds_used;
    if (wap_same && bs_same) break;
  }

  out.converged = waps.converged && bss.converged;
  out.outcomes.wap_channel = std::move(waps.allocation);
  out.outcomes.bs_channel = std::move(bss.allocation);
  finalize(out, model, targets);
  out.targets = std::move(targets);
  return out;
}

MultiGameOutcome solve_single_game(const NetworkTopology& topology,
                                   const ScenarioConfig& config) {
  return solve_joint(Mode::SingleGame, topology, config);
}

MultiGameOutcome solve_lbt(const NetworkTopology& topology, const ScenarioConfig& config) {
  return solve_joint(Mode::Lbt, topology, config);
}

MultiGameOutcome solve(Mode mode, const NetworkTopology& topology, const ScenarioConfig& config) {
  switch (mode) {
    case Mode::MultiGame:
      return solve_multigame(topology, config);
    case Mode::SingleGame:
      return solve_single_game(topology, config);
    case Mode::Lbt:
      return solve_lbt(topology, config);
  }
  throw ValidationError("unknown mode");
}

double utility_after_move(const MultiGameOutcome& outcome, const CoexistenceModel& model,
                          const Placement& placement) {
  const auto& wap_ch = outcome.outcomes.wap_channel->channel;
  const auto& bs_ch = outcome.outcomes.bs_channel->channel;
  const int c = placement.channel;
  const auto waps = placement.is_bs ? members_on(c, wap_ch)
                                    : members_on(c, wap_ch, placement.index);
  const auto bss = placement.is_bs ? members_on(c, bs_ch, placement.index)
                                   : members_on(c, bs_ch);
  std::span<const double> targets;
  if (outcome.targets) targets = *outcome.targets;
  const ChannelState st = model.evaluate(waps, bss, access_policy(outcome.mode), targets);
  const auto& members = placement.is_bs ? bss : waps;
  const auto pos = static_cast<std::size_t>(
      std::find(members.begin(), members.end(), placement.index) - members.begin());
  return placement.is_bs ? st.bs_utility[pos] : st.wap_served[pos];
}

MgsReport check_mgs(const MultiGameOutcome& outcome, const NetworkTopology& topology,
                    const ScenarioConfig& config) {
  if (!outcome.outcomes.wue_wap || !outcome.outcomes.wap_channel ||
      !outcome.outcomes.bs_channel) {
    throw ValidationError("check_mgs needs a complete outcome");
  }
  const CoexistenceModel model(topology, config, *outcome.outcomes.wue_wap);
  const std::vector<double> targets =
      outcome.targets ? *outcome.targets : wap_targets(model, *outcome.outcomes.wap_channel);
  const auto& wap_ch = outcome.outcomes.wap_channel->channel;
  const auto& bs_ch = outcome.outcomes.bs_channel->channel;

  MgsReport report;
  for (std::size_t w = 0; w < wap_ch.size(); ++w) {
    const double before = utility_after_move(outcome, model, {false, w, wap_ch[w]});
    if (before >= targets[w] - kImprovementEpsilon) continue;
    for (int c = 0; c < config.n_channels; ++c) {
      if (c == wap_ch[w]) continue;
      const double after = utility_after_move(outcome, model, {false, w, c});
      if (after >= targets[w] - kImprovementEpsilon) {
        report.wifi_violations.push_back({w, wap_ch[w], c, before, after});
      }
    }
  }
  for (std::size_t b = 0; b < bs_ch.size(); ++b) {
    const double before = utility_after_move(outcome, model, {true, b, bs_ch[b]});
    for (int c = 0; c < config.n_channels; ++c) {
      if (c == bs_ch[b]) continue;
      const double after = utility_after_move(outcome, model, {true, b, c});
      if (after > before + kImprovementEpsilon) {
        report.lte_violations.push_back({b, bs_ch[b], c, before, after});
      }
    }
  }
  return report;
}

OutcomeAudit audit_outcome(const MultiGameOutcome& outcome, const NetworkTopology& topology,
                           const ScenarioConfig& config) {
  OutcomeAudit audit;
  const auto& bs_alloc = *outcome.outcomes.bs_channel;
  for (std::size_t c = 0; c < outcome.channels.size(); ++c) {
    // BS airtime is re-summed from the allocation rather than the summary.
    double bs_airtime = 0.0;
    for (std::size_t b = 0; b < bs_alloc.channel.size(); ++b) {
      if (bs_alloc.channel[b] == static_cast<int>(c)) bs_airtime += bs_alloc.airtime[b];
    }
    audit.max_channel_budget =
        std::max(audit.max_channel_budget, outcome.channels[c].wifi_busy + bs_airtime);
  }
  if (outcome.mode != Mode::MultiGame || !outcome.targets) return audit;

  const CoexistenceModel model(topology, config, *outcome.outcomes.wue_wap);
  const auto& wap_ch = outcome.outcomes.wap_channel->channel;
  for (int c = 0; c < config.n_channels; ++c) {
    const auto waps = members_on(c, wap_ch);
    const auto free = model.bs_free_throughput(waps);
    for (std::size_t i = 0; i < waps.size(); ++i) {
      const std::size_t w = waps[i];
      const double target = (*outcome.targets)[w];
      if (outcome.wap_utility[w] >= target - 1e-9) continue;
      if (free[i] < target - 1e-9) {
        audit.infeasible_targets.push_back(w);
      } else {
        audit.waps_below_target.push_back(w);
      }
    }
  }
  return audit;
}

}  // namespace lteu
