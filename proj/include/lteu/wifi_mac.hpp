#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lteu {

/// 802.11 DCF timing used by the saturation model. Times are in seconds.
struct MacParams {
  double t_success = 5e-6;
  double t_collision = 1e-6;
  double t_idle_slot = 3e-6;
  double difs = 34e-6;
  double sifs = 16e-6;
  double rts_bytes = 20.0;
  double cts_bytes = 14.0;
  int cw_min = 16;
  int backoff_stages = 6;
};

void validate(const MacParams& mac);

/// Per-channel outcome of the saturation model for `n_waps` contending WAPs.
struct ChannelContention {
  std::size_t n_waps = 0;
  double tau = 0.0;
  double p_tr = 0.0;
  double p_s = 0.0;
  double capacity = 0.0;       // bits/s
  double busy_fraction = 0.0;  // share of time carrying frames or collisions
  double idle_fraction = 0.0;  // 1 - busy_fraction
};

/// Conditional collision probability seen by one station when the other
/// `n_waps - 1` each transmit with probability `tau`.
double collision_probability(double tau, std::size_t n_waps);

/// Attempt probability implied by the backoff chain for collision
/// probability `p`.
double backoff_attempt_probability(double p, const MacParams& mac);

/// Solves the coupled attempt/collision fixed point by bisection on tau.
/// Throws NumericalError if the bracket does not shrink to 1e-10 within 200
/// steps.
double attempt_probability(std::size_t n_waps, const MacParams& mac);

ChannelContention contention_profile(std::size_t n_waps, const MacParams& mac,
                                     double payload_rate);

/// Proportional truncation of offered loads against the capacity left after
/// LTE occupancy: served_i = offered_i * min(1, C / sum(offered)).
std::vector<double> served_throughput(std::span<const double> offered_loads,
                                      const ChannelContention& contention,
                                      double bs_airtime);

/// Equal-priority airtime share under listen-before-talk.
double lbt_airtime_share(std::size_t n_waps, std::size_t n_bs);

/// Memoizes attempt_probability by contender count for one MacParams.
class AttemptProbabilityCache {
 public:
  explicit AttemptProbabilityCache(MacParams mac) : mac_(mac) {}

  double operator()(std::size_t n_waps) const;
  const MacParams& mac() const { return mac_; }

 private:
  MacParams mac_;
  mutable std::vector<double> tau_;  // index n-1; NaN = not yet computed
};

/// contention_profile with tau taken from a cache.
ChannelContention contention_profile(std::size_t n_waps,
                                     const AttemptProbabilityCache& cache,
                                     double payload_rate);

}  // namespace lteu
