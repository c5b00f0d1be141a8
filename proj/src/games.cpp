#include "lteu/games.hpp"

#include <algorithm>
#include <memory>
#include <numeric>

#include "lteu/error.hpp"

namespace lteu {

double wue_link_rate(std::size_t wap, std::size_t wue, const NetworkTopology& topology,
                     const ScenarioConfig& config) {
  const double snr = sinr(NodeId{NodeKind::Wue, wue}, NodeId{NodeKind::Wap, wap}, {},
                          topology, config);
  return phy_rate(snr, config);
}

namespace {

std::vector<std::size_t> ranked_by_rate(std::span<const double> rates) {
  std::vector<std::size_t> order(rates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rates[a] > rates[b]; });
  return order;
}

}  // namespace

WuePreferences build_wue_preferences(const NetworkTopology& topology,
                                     const ScenarioConfig& config) {
  if (topology.n_wap() == 0) {
    throw ValidationError("WUE/WAP preferences need at least one WAP");
  }
  const std::size_t n_wue = topology.n_wue();
  const std::size_t n_wap = topology.n_wap();
  // rate[wue][wap]
  std::vector<std::vector<double>> rate(n_wue, std::vector<double>(n_wap));
  for (std::size_t u = 0; u < n_wue; ++u) {
    for (std::size_t a = 0; a < n_wap; ++a) rate[u][a] = wue_link_rate(a, u, topology, config);
  }

  WuePreferences prefs;
  prefs.wue.reserve(n_wue);
  for (std::size_t u = 0; u < n_wue; ++u) prefs.wue.push_back(ranked_by_rate(rate[u]));

  prefs.wap.reserve(n_wap);
  std::vector<double> column(n_wue);
  for (std::size_t a = 0; a < n_wap; ++a) {
    for (std::size_t u = 0; u < n_wue; ++u) column[u] = rate[u][a];
    prefs.wap.push_back(ranked_by_rate(column));
  }
  return prefs;
}

CoexistenceModel::CoexistenceModel(const NetworkTopology& topology,
                                   const ScenarioConfig& config, const Matching& wue_wap)
    : config_(config),
      demands_(topology.n_wap()),
      n_bs_(topology.n_bs()),
      bs_reference_gain_(link_gain(config.bs_reference_distance, config)),
      bs_gain_(topology.n_bs() * topology.n_bs()),
      tau_cache_(config.mac) {
  if (wue_wap.n_acceptors() != topology.n_wap() ||
      wue_wap.n_proposers() != topology.n_wue()) {
    throw ValidationError("WUE/WAP matching does not fit the topology");
  }
  for (std::size_t a = 0; a < demands_.size(); ++a) {
    WapDemand& d = demands_[a];
    const auto wues = wue_wap.held(a);
    d.n_wues = wues.size();
    if (wues.empty()) continue;
    double rate_sum = 0.0;
    for (std::size_t u : wues) rate_sum += wue_link_rate(a, u, topology, config);
    d.phy_rate = rate_sum / static_cast<double>(wues.size());
    d.offered = std::min(static_cast<double>(wues.size()) * config.wue_demand, d.phy_rate);
  }
  for (std::size_t i = 0; i < n_bs_; ++i) {
    for (std::size_t j = 0; j < n_bs_; ++j) {
      bs_gain_[i * n_bs_ + j] =
          topology.gain(NodeId{NodeKind::Bs, i}, NodeId{NodeKind::Bs, j});
    }
  }
}

ChannelContention CoexistenceModel::contention(std::span<const std::size_t> waps) const {
  std::size_t active = 0;
  double rate_sum = 0.0;
  for (std::size_t w : waps) {
    if (!demands_[w].active()) continue;
    ++active;
    rate_sum += demands_[w].phy_rate;
  }
  const double payload_rate = active == 0 ? 0.0 : rate_sum / static_cast<double>(active);
  return contention_profile(active, tau_cache_, payload_rate);
}

namespace {

std::vector<double> offered_of(std::span<const std::size_t> waps,
                               const CoexistenceModel& model) {
  std::vector<double> offered;
  offered.reserve(waps.size());
  for (std::size_t w : waps) offered.push_back(model.demand(w).offered);
  return offered;
}

}  // namespace

std::vector<double> CoexistenceModel::bs_free_throughput(
    std::span<const std::size_t> waps) const {
  return served_throughput(offered_of(waps, *this), contention(waps), 0.0);
}

double CoexistenceModel::protection_cap(std::span<const std::size_t> waps,
                                        std::span<const double> targets) const {
  constexpr double kTolerance = 1e-6;
  const ChannelContention cont = contention(waps);
  const std::vector<double> offered = offered_of(waps, *this);
  const auto feasible = [&](double airtime) {
    const std::vector<double> served = served_throughput(offered, cont, airtime);
    for (std::size_t i = 0; i < waps.size(); ++i) {
      if (served[i] < targets[waps[i]]) return false;
    }
    return true;
  };
  if (feasible(1.0)) return 1.0;
  if (!feasible(0.0)) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > kTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double CoexistenceModel::bs_link_rate(std::size_t bs,
                                      std::span<const std::size_t> co_channel) const {
  // Interference at the reference user is approximated by the BS-to-BS gain.
  const double power = config_.tx_power_bs;
  double interference = 0.0;
  for (std::size_t j : co_channel) {
    if (j != bs) interference += power * bs_gain_[j * n_bs_ + bs];
  }
  const double signal = power * bs_reference_gain_;
  return phy_rate(signal / (config_.noise_power + interference), config_);
}

ChannelState CoexistenceModel::evaluate(std::span<const std::size_t> waps,
                                        std::span<const std::size_t> bss,
                                        AccessPolicy policy,
                                        std::span<const double> targets) const {
  ChannelState st;
  st.contention = contention(waps);
  const std::vector<double> offered = offered_of(waps, *this);
  const std::size_t k = bss.size();
  const double residual = 1.0 - st.contention.busy_fraction;
  double per_bs = 0.0;

  switch (policy) {
    case AccessPolicy::Priority: {
      if (k == 0) break;
      std::vector<double> own_targets;
      if (targets.empty()) {
        own_targets.assign(n_wap(), 0.0);
        const std::vector<double> free = bs_free_throughput(waps);
        for (std::size_t i = 0; i < waps.size(); ++i) {
          own_targets[waps[i]] = config_.target_utility_fraction * free[i];
        }
        targets = own_targets;
      }
      st.bs_airtime_total = std::min(residual, protection_cap(waps, targets));
      per_bs = st.bs_airtime_total / static_cast<double>(k);
      break;
    }
    case AccessPolicy::Unregulated: {
      if (k == 0) break;
      st.bs_airtime_total = std::min(1.0, static_cast<double>(k) * residual);
      per_bs = st.bs_airtime_total / static_cast<double>(k);
      break;
    }
    case AccessPolicy::Lbt: {
      per_bs = lbt_airtime_share(st.contention.n_waps, k);
      st.bs_airtime_total = per_bs * static_cast<double>(k);
      break;
    }
  }

  if (policy == AccessPolicy::Lbt) {
    const double cap = lbt_airtime_share(st.contention.n_waps, k) * st.contention.capacity;
    st.wap_served.reserve(waps.size());
    for (double o : offered) st.wap_served.push_back(std::min(o, cap));
  } else {
    st.wap_served = served_throughput(offered, st.contention, st.bs_airtime_total);
  }

  st.bs_airtime.assign(k, per_bs);
  st.bs_utility.reserve(k);
  for (std::size_t b : bss) st.bs_utility.push_back(per_bs * bs_link_rate(b, bss));

  if (st.contention.capacity > 0.0) {
    const double served = std::accumulate(st.wap_served.begin(), st.wap_served.end(), 0.0);
    st.wifi_busy = st.contention.busy_fraction * served / st.contention.capacity;
  }
  return st;
}

std::vector<std::size_t> members_on(int channel, std::span<const int> alloc,
                                    std::optional<std::size_t> player) {
  std::vector<std::size_t> members;
  for (std::size_t p = 0; p < alloc.size(); ++p) {
    const int c = (player && *player == p) ? channel : alloc[p];
    if (c == channel) members.push_back(p);
  }
  return members;
}

namespace {

std::size_t position_of(std::size_t player, std::span<const std::size_t> members) {
  return static_cast<std::size_t>(
      std::find(members.begin(), members.end(), player) - members.begin());
}

double recorded_bs_airtime(int channel, const std::optional<ChannelAllocation>& bs_alloc) {
  if (!bs_alloc) return 0.0;
  double total = 0.0;
  for (std::size_t b = 0; b < bs_alloc->channel.size(); ++b) {
    if (bs_alloc->channel[b] == channel && b < bs_alloc->airtime.size()) {
      total += bs_alloc->airtime[b];
    }
  }
  return total;
}

std::vector<std::vector<int>> channel_actions(std::size_t n_players, int n_channels) {
  std::vector<int> channels(static_cast<std::size_t>(std::max(n_channels, 0)));
  std::iota(channels.begin(), channels.end(), 0);
  return std::vector<std::vector<int>>(n_players, channels);
}

}  // namespace

GameDefinition make_wue_wap_game(const NetworkTopology& topology,
                                 const ScenarioConfig& config) {
  std::vector<int> waps(topology.n_wap());
  std::iota(waps.begin(), waps.end(), 0);
  GameDefinition game;
  game.id = GameId::WueWap;
  game.n_players = topology.n_wue();
  game.action_sets.assign(topology.n_wue(), waps);
  game.utility = [&topology, config](std::size_t wue, int wap, std::span<const int>,
                                     const OutcomeVector&) {
    return wue_link_rate(static_cast<std::size_t>(wap), wue, topology, config);
  };
  return game;
}

GameDefinition make_wap_channel_game(const CoexistenceModel& model) {
  GameDefinition game;
  game.id = GameId::WapChannel;
  game.n_players = model.n_wap();
  game.action_sets = channel_actions(model.n_wap(), model.n_channels());
  game.utility = [&model](std::size_t wap, int channel, std::span<const int> actions,
                          const OutcomeVector& others) {
    const auto waps = members_on(channel, actions, wap);
    const auto offered = offered_of(waps, model);
    const auto served = served_throughput(offered, model.contention(waps),
                                          recorded_bs_airtime(channel, others.bs_channel));
    return served[position_of(wap, waps)];
  };
  return game;
}

GameDefinition make_bs_channel_game(const CoexistenceModel& model, AccessPolicy policy,
                                    std::vector<double> targets) {
  GameDefinition game;
  game.id = GameId::BsChannel;
  game.n_players = model.n_bs();
  game.action_sets = channel_actions(model.n_bs(), model.n_channels());
  game.utility = [&model, policy, targets = std::move(targets)](
                     std::size_t bs, int channel, std::span<const int> actions,
                     const OutcomeVector& others) {
    if (!others.wap_channel) {
      throw ValidationError("BS channel game needs the WAP channel allocation");
    }
    const auto waps = members_on(channel, others.wap_channel->channel);
    const auto bss = members_on(channel, actions, bs);
    const ChannelState st = model.evaluate(waps, bss, policy, targets);
    return st.bs_utility[position_of(bs, bss)];
  };
  return game;
}

ChannelUtility bind_outcomes(const GameDefinition& game, OutcomeVector others) {
  auto fixed = std::make_shared<const OutcomeVector>(std::move(others));
  return [utility = game.utility, fixed](std::size_t player, int channel,
                                         std::span<const int> alloc) {
    return utility(player, channel, alloc, *fixed);
  };
}

double wap_channel_utility(std::size_t wap, int channel,
                           const ChannelAllocation& wap_alloc,
                           const std::optional<ChannelAllocation>& bs_alloc,
                           const Matching& o1, const NetworkTopology& topology,
                           const ScenarioConfig& config) {
  const CoexistenceModel model(topology, config, o1);
  OutcomeVector others;
  others.bs_channel = bs_alloc;
  return make_wap_channel_game(model).utility(wap, channel, wap_alloc.channel, others);
}

double bs_channel_utility(std::size_t bs, int channel, const ChannelAllocation& bs_alloc,
                          const ChannelAllocation& wap_alloc, const Matching& o1,
                          const NetworkTopology& topology, const ScenarioConfig& config,
                          AccessPolicy policy, std::optional<std::vector<double>> targets) {
  const CoexistenceModel model(topology, config, o1);
  std::vector<double> t;
  if (policy == AccessPolicy::Priority) {
    t = targets ? std::move(*targets) : wap_targets(model, wap_alloc);
  }
  OutcomeVector others;
  others.wap_channel = wap_alloc;
  return make_bs_channel_game(model, policy, std::move(t))
      .utility(bs, channel, bs_alloc.channel, others);
}

std::vector<double> wap_targets(const CoexistenceModel& model,
                                const ChannelAllocation& o2) {
  std::vector<double> targets(model.n_wap(), 0.0);
  for (int c = 0; c < model.n_channels(); ++c) {
    const auto waps = members_on(c, o2.channel);
    if (waps.empty()) continue;
    const auto free = model.bs_free_throughput(waps);
    for (std::size_t i = 0; i < waps.size(); ++i) {
      targets[waps[i]] = model.config().target_utility_fraction * free[i];
    }
  }
  return targets;
}

double wap_target_utility(std::size_t wap, const ScenarioConfig& config,
                          const NetworkTopology& topology, const Matching& o1,
                          const ChannelAllocation& o2) {
  const CoexistenceModel model(topology, config, o1);
  return wap_targets(model, o2).at(wap);
}

}  // namespace lteu
