#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace lteu {

/// Preference lists: prefs[i] ranks every candidate, most preferred first.
using PreferenceProfile = std::vector<std::vector<std::size_t>>;

inline constexpr int kUnmatched = -1;

/// Many-to-one assignment of proposers (WUEs) to acceptors (WAPs).
class Matching {
 public:
  Matching(std::size_t n_proposers, std::size_t n_acceptors);

  std::size_t n_proposers() const { return partner_.size(); }
  std::size_t n_acceptors() const { return held_.size(); }

  /// Acceptor index or kUnmatched.
  int partner(std::size_t proposer) const { return partner_.at(proposer); }
  std::span<const std::size_t> held(std::size_t acceptor) const {
    return held_.at(acceptor);
  }

  void assign(std::size_t proposer, std::size_t acceptor);
  void unassign(std::size_t proposer);

  friend bool operator==(const Matching&, const Matching&) = default;

 private:
  std::vector<int> partner_;
  std::vector<std::vector<std::size_t>> held_;  // ascending proposer index
};

/// Assignment of players to channels, with an airtime share per player when
/// the players are LTE BSs.
struct ChannelAllocation {
  std::vector<int> channel;
  std::vector<double> airtime;  // empty, or one entry per player

  std::size_t size() const { return channel.size(); }
  friend bool operator==(const ChannelAllocation&, const ChannelAllocation&) = default;
};

struct BlockingPair {
  std::size_t proposer;
  std::size_t acceptor;
  friend bool operator==(const BlockingPair&, const BlockingPair&) = default;
};

/// A unilateral channel switch and the utilities before and after it.
struct Deviation {
  std::size_t player;
  int from;
  int to;
  double before;
  double after;
  friend bool operator==(const Deviation&, const Deviation&) = default;
};

template <class Violation>
struct StabilityReport {
  std::vector<Violation> violations;
  bool stable() const { return violations.empty(); }
};

/// Improvements must exceed this margin (bits/s) to count.
inline constexpr double kImprovementEpsilon = 1e-9;

/// Utility of `player` on `channel` when every other player sits where
/// `alloc` puts them (alloc[player] is ignored by well-formed evaluators).
using ChannelUtility =
    std::function<double(std::size_t player, int channel, std::span<const int> alloc)>;

/// Throws ValidationError unless every list is a permutation of the other side.
void validate_preferences(const PreferenceProfile& proposer_prefs,
                          const PreferenceProfile& acceptor_prefs,
                          std::span<const int> quotas);

/// Proposer-proposing deferred acceptance with acceptor quotas.
Matching deferred_acceptance(const PreferenceProfile& proposer_prefs,
                             const PreferenceProfile& acceptor_prefs,
                             std::span<const int> quotas);

StabilityReport<BlockingPair> find_blocking_pairs(
    const Matching& matching, const PreferenceProfile& proposer_prefs,
    const PreferenceProfile& acceptor_prefs, std::span<const int> quotas);

struct BestResponseResult {
  ChannelAllocation allocation;
  bool converged = false;
  int rounds_used = 0;
};

/// Round-robin best response in ascending player order. A player moves only
/// to its strictly best channel (lowest index among equals) and only when the
/// gain exceeds kImprovementEpsilon. Converged iff a full round has no move.
BestResponseResult best_response_channel_matching(
    std::size_t n_players, int n_channels, const ChannelUtility& utility,
    ChannelAllocation initial, int max_rounds);

/// Every (player, alternative channel) whose utility gain exceeds
/// kImprovementEpsilon, in player-major, channel-ascending order.
StabilityReport<Deviation> check_unilateral_stability(
    const ChannelAllocation& alloc, int n_channels, const ChannelUtility& utility);

/// All allocations without an improving unilateral deviation, in
/// lexicographic order of the channel vector. Throws SizeError when
/// n_channels^n_players exceeds 100 000.
std::vector<ChannelAllocation> brute_force_stable_allocations(
    std::size_t n_players, int n_channels, const ChannelUtility& utility);

}  // namespace lteu
