#include "lteu/matching.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <string>

#include "lteu/error.hpp"

namespace lteu {

Matching::Matching(std::size_t n_proposers, std::size_t n_acceptors)
    : partner_(n_proposers, kUnmatched), held_(n_acceptors) {}

void Matching::assign(std::size_t proposer, std::size_t acceptor) {
  unassign(proposer);
  auto& list = held_.at(acceptor);
  list.insert(std::lower_bound(list.begin(), list.end(), proposer), proposer);
  partner_.at(proposer) = static_cast<int>(acceptor);
}

void Matching::unassign(std::size_t proposer) {
  const int current = partner_.at(proposer);
  if (current == kUnmatched) return;
  auto& list = held_[static_cast<std::size_t>(current)];
  list.erase(std::lower_bound(list.begin(), list.end(), proposer));
  partner_[proposer] = kUnmatched;
}

namespace {

bool is_permutation_of_range(const std::vector<std::size_t>& list, std::size_t n) {
  if (list.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (std::size_t v : list) {
    if (v >= n || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

// rank[i][j] = position of candidate j in i's list.
std::vector<std::vector<std::size_t>> rank_table(const PreferenceProfile& prefs,
                                                 std::size_t n_candidates) {
  std::vector<std::vector<std::size_t>> rank(prefs.size(),
                                             std::vector<std::size_t>(n_candidates));
  for (std::size_t i = 0; i < prefs.size(); ++i) {
    for (std::size_t pos = 0; pos < prefs[i].size(); ++pos) {
      rank[i][prefs[i][pos]] = pos;
    }
  }
  return rank;
}

}  // namespace

void validate_preferences(const PreferenceProfile& proposer_prefs,
                          const PreferenceProfile& acceptor_prefs,
                          std::span<const int> quotas) {
  const std::size_t n_prop = proposer_prefs.size();
  const std::size_t n_acc = acceptor_prefs.size();
  if (quotas.size() != n_acc) {
    throw ValidationError("expected one quota per acceptor");
  }
  for (int q : quotas) {
    if (q < 0) throw ValidationError("quotas must be >= 0");
  }
  for (std::size_t i = 0; i < n_prop; ++i) {
    if (!is_permutation_of_range(proposer_prefs[i], n_acc)) {
      throw ValidationError("proposer " + std::to_string(i) +
                            " preference list is not a permutation of the acceptors");
    }
  }
  for (std::size_t a = 0; a < n_acc; ++a) {
    if (!is_permutation_of_range(acceptor_prefs[a], n_prop)) {
      throw ValidationError("acceptor " + std::to_string(a) +
                            " preference list is not a permutation of the proposers");
    }
  }
}

Matching deferred_acceptance(const PreferenceProfile& proposer_prefs,
                             const PreferenceProfile& acceptor_prefs,
                             std::span<const int> quotas) {
  validate_preferences(proposer_prefs, acceptor_prefs, quotas);
  const std::size_t n_prop = proposer_prefs.size();
  const std::size_t n_acc = acceptor_prefs.size();
  const auto acceptor_rank = rank_table(acceptor_prefs, n_prop);

  Matching matching(n_prop, n_acc);
  std::vector<std::size_t> next_choice(n_prop, 0);
  std::deque<std::size_t> free;
  for (std::size_t w = 0; w < n_prop; ++w) free.push_back(w);

  while (!free.empty()) {
    const std::size_t w = free.front();
    free.pop_front();
    if (next_choice[w] >= n_acc) continue;  // exhausted its list
    const std::size_t a = proposer_prefs[w][next_choice[w]++];
    const auto quota = static_cast<std::size_t>(quotas[a]);
    const auto held = matching.held(a);

    if (held.size() < quota) {
      matching.assign(w, a);
      continue;
    }
    if (quota == 0) {
      free.push_back(w);
      continue;
    }
    const std::size_t worst = *std::max_element(
        held.begin(), held.end(), [&](std::size_t x, std::size_t y) {
          return acceptor_rank[a][x] < acceptor_rank[a][y];
        });
    if (acceptor_rank[a][w] < acceptor_rank[a][worst]) {
      matching.unassign(worst);
      matching.assign(w, a);
      free.push_back(worst);
    } else {
      free.push_back(w);
    }
  }
  return matching;
}

StabilityReport<BlockingPair> find_blocking_pairs(
    const Matching& matching, const PreferenceProfile& proposer_prefs,
    const PreferenceProfile& acceptor_prefs, std::span<const int> quotas) {
  const std::size_t n_prop = proposer_prefs.size();
  const auto acceptor_rank = rank_table(acceptor_prefs, n_prop);

  StabilityReport<BlockingPair> report;
  for (std::size_t w = 0; w < n_prop; ++w) {
    const int current = matching.partner(w);
    for (std::size_t a : proposer_prefs[w]) {
      if (static_cast<int>(a) == current) break;  // the rest are worse
      const auto held = matching.held(a);
      bool wants = held.size() < static_cast<std::size_t>(quotas[a]);
      for (std::size_t other : held) {
        if (acceptor_rank[a][w] < acceptor_rank[a][other]) wants = true;
      }
      if (wants) report.violations.push_back({w, a});
    }
  }
  return report;
}

namespace {

void check_allocation(const ChannelAllocation& alloc, std::size_t n_players,
                      int n_channels) {
  if (alloc.channel.size() != n_players) {
    throw ValidationError("allocation size does not match the player count");
  }
  for (int c : alloc.channel) {
    if (c < 0 || c >= n_channels) {
      throw ValidationError("allocation channel out of range");
    }
  }
}

}  // namespace

BestResponseResult best_response_channel_matching(
    std::size_t n_players, int n_channels, const ChannelUtility& utility,
    ChannelAllocation initial, int max_rounds) {
  check_allocation(initial, n_players, n_channels);
  BestResponseResult result{std::move(initial), n_players == 0, 0};
  if (result.converged) return result;

  std::vector<int>& alloc = result.allocation.channel;
  // Players checked since the last move; a mover sits at its best response.
  std::size_t settled = 0;
  for (int round = 1; round <= max_rounds && !result.converged; ++round) {
    result.rounds_used = round;
    for (std::size_t p = 0; p < n_players; ++p) {
      const int current = alloc[p];
      const double current_utility = utility(p, current, alloc);
      int best = current;
      double best_utility = -std::numeric_limits<double>::infinity();
      for (int c = 0; c < n_channels; ++c) {
        if (c == current) continue;
        const double u = utility(p, c, alloc);
        if (u > best_utility) {
          best_utility = u;
          best = c;
        }
      }
      if (best != current && best_utility > current_utility + kImprovementEpsilon) {
        alloc[p] = best;
        settled = 1;
      } else {
        ++settled;
      }
      if (settled >= n_players) {
        result.converged = true;
        break;
      }
    }
  }
  return result;
}

StabilityReport<Deviation> check_unilateral_stability(
    const ChannelAllocation& alloc, int n_channels, const ChannelUtility& utility) {
  check_allocation(alloc, alloc.channel.size(), n_channels);
  StabilityReport<Deviation> report;
  for (std::size_t p = 0; p < alloc.channel.size(); ++p) {
    const int current = alloc.channel[p];
    const double before = utility(p, current, alloc.channel);
    for (int c = 0; c < n_channels; ++c) {
      if (c == current) continue;
      const double after = utility(p, c, alloc.channel);
      if (after > before + kImprovementEpsilon) {
        report.violations.push_back({p, current, c, before, after});
      }
    }
  }
  return report;
}

std::vector<ChannelAllocation> brute_force_stable_allocations(
    std::size_t n_players, int n_channels, const ChannelUtility& utility) {
  constexpr std::size_t kMaxAssignments = 100'000;
  if (n_channels < 1) throw SizeError("brute force needs at least one channel");
  std::size_t total = 1;
  for (std::size_t i = 0; i < n_players; ++i) {
    total *= static_cast<std::size_t>(n_channels);
    if (total > kMaxAssignments) {
      throw SizeError("instance has more than 100000 assignments");
    }
  }

  std::vector<ChannelAllocation> stable;
  ChannelAllocation alloc{std::vector<int>(n_players, 0), {}};
  for (std::size_t index = 0; index < total; ++index) {
    std::size_t rest = index;
    for (std::size_t p = n_players; p-- > 0;) {
      alloc.channel[p] = static_cast<int>(rest % static_cast<std::size_t>(n_channels));
      rest /= static_cast<std::size_t>(n_channels);
    }
    if (check_unilateral_stability(alloc, n_channels, utility).stable()) {
      stable.push_back(alloc);
    }
  }
  return stable;
}

}  // namespace lteu
