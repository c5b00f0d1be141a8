#include "lteu/wifi_mac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lteu/error.hpp"

namespace lteu {

double collision_probability(double tau, std::size_t n_waps) {
  if (n_waps <= 1) return 0.0;
  return 1.0 - std::pow(1.0 - tau, static_cast<double>(n_waps - 1));
}

double backoff_attempt_probability(double p, const MacParams& mac) {
  // 2(1-2p) / ((1-2p)(W+1) + pW(1-(2p)^m)) with the common factor (1-2p)
  // divided out; the ratio is finite at p = 1/2.
  const double w = mac.cw_min;
  double geometric = 0.0;
  double term = 1.0;
  for (int k = 0; k < mac.backoff_stages; ++k) {
    geometric += term;
    term *= 2.0 * p;
  }
  return 2.0 / (w + 1.0 + p * w * geometric);
}

double attempt_probability(std::size_t n_waps, const MacParams& mac) {
  constexpr double kTolerance = 1e-10;
  constexpr int kMaxSteps = 200;
  // residual(tau) = tau - f(p(tau)) is increasing in tau.
  const auto residual = [&](double tau) {
    return tau - backoff_attempt_probability(collision_probability(tau, n_waps), mac);
  };
  double lo = 1e-12;
  double hi = 1.0 - 1e-12;
  for (int step = 0; step < kMaxSteps; ++step) {
    if (hi - lo < kTolerance) return 0.5 * (lo + hi);
    const double mid = 0.5 * (lo + hi);
    if (residual(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  throw NumericalError("attempt probability bisection did not converge");
}

namespace {

ChannelContention profile_with_tau(std::size_t n_waps, double tau,
                                   const MacParams& mac, double payload_rate) {
  ChannelContention out;
  out.n_waps = n_waps;
  if (n_waps == 0) {
    out.idle_fraction = 1.0;
    return out;
  }
  const double n = static_cast<double>(n_waps);
  out.tau = tau;
  out.p_tr = 1.0 - std::pow(1.0 - tau, n);
  out.p_s = n * tau * std::pow(1.0 - tau, n - 1.0) / out.p_tr;

  // RTS/CTS are sent at the payload rate; a zero rate carries no payload and
  // no control overhead.
  const double bit_time = payload_rate > 0 ? 1.0 / payload_rate : 0.0;
  const double t_idle = mac.t_idle_slot;
  const double t_succ = mac.t_success + mac.difs + mac.sifs +
                        8.0 * (mac.rts_bytes + mac.cts_bytes) * bit_time;
  const double t_coll = mac.t_collision + mac.difs + 8.0 * mac.rts_bytes * bit_time;

  const double idle = (1.0 - out.p_tr) * t_idle;
  const double success = out.p_tr * out.p_s * t_succ;
  const double collision = out.p_tr * (1.0 - out.p_s) * t_coll;
  const double slot = idle + success + collision;

  const double payload_bits = std::max(payload_rate, 0.0) * mac.t_success;
  out.capacity = out.p_tr * out.p_s * payload_bits / slot;
  out.busy_fraction = (success + collision) / slot;
  out.idle_fraction = idle / slot;
  return out;
}

}  // namespace

ChannelContention contention_profile(std::size_t n_waps, const MacParams& mac,
                                     double payload_rate) {
  const double tau = n_waps == 0 ? 0.0 : attempt_probability(n_waps, mac);
  return profile_with_tau(n_waps, tau, mac, payload_rate);
}

ChannelContention contention_profile(std::size_t n_waps,
                                     const AttemptProbabilityCache& cache,
                                     double payload_rate) {
  const double tau = n_waps == 0 ? 0.0 : cache(n_waps);
  return profile_with_tau(n_waps, tau, cache.mac(), payload_rate);
}

double AttemptProbabilityCache::operator()(std::size_t n_waps) const {
  if (n_waps == 0) return 0.0;
  if (tau_.size() < n_waps) {
    tau_.resize(n_waps, std::numeric_limits<double>::quiet_NaN());
  }
  double& slot = tau_[n_waps - 1];
  if (std::isnan(slot)) slot = attempt_probability(n_waps, mac_);
  return slot;
}

std::vector<double> served_throughput(std::span<const double> offered_loads,
                                      const ChannelContention& contention,
                                      double bs_airtime) {
  const double available = contention.capacity * (1.0 - bs_airtime);
  const double total = std::accumulate(offered_loads.begin(), offered_loads.end(), 0.0);
  const double factor =
      total > available ? std::max(available, 0.0) / total : 1.0;
  std::vector<double> served;
  served.reserve(offered_loads.size());
  for (double offered : offered_loads) served.push_back(offered * factor);
  return served;
}

double lbt_airtime_share(std::size_t n_waps, std::size_t n_bs) {
  const std::size_t contenders = n_waps + n_bs;
  return contenders == 0 ? 0.0 : 1.0 / static_cast<double>(contenders);
}

}  // namespace lteu
