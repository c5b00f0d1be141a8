#include "lteu/topology.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "lteu/error.hpp"

namespace lteu {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double path_loss_db(double distance_m, const ScenarioConfig& config) {
  const double d = std::max(distance_m, 1.0);
  return config.ref_loss_db + 10.0 * config.path_loss_exponent * std::log10(d);
}

double link_gain(double distance_m, const ScenarioConfig& config) {
  return std::pow(10.0, -path_loss_db(distance_m, config) / 10.0);
}

double tx_power(NodeKind kind, const ScenarioConfig& config) {
  switch (kind) {
    case NodeKind::Bs:
      return config.tx_power_bs;
    case NodeKind::Wap:
      return config.tx_power_wap;
    case NodeKind::Wue:
      // Uplink is not modeled; WUEs transmit at WAP power if ever asked.
      return config.tx_power_wap;
  }
  return 0.0;
}

NetworkTopology::NetworkTopology(const ScenarioConfig& config,
                                 std::vector<Point> bs, std::vector<Point> wap,
                                 std::vector<Point> wue)
    : bs_(std::move(bs)), wap_(std::move(wap)), wue_(std::move(wue)) {
  const auto check = [&](const std::vector<Point>& points, const char* kind) {
    for (const Point& p : points) {
      if (!(p.x >= 0 && p.x <= config.area_side && p.y >= 0 &&
            p.y <= config.area_side)) {
        throw ConfigError(std::string(kind) + " position outside the area");
      }
    }
  };
  check(bs_, "BS");
  check(wap_, "WAP");
  check(wue_, "WUE");

  std::vector<Point> all;
  all.reserve(node_count());
  all.insert(all.end(), bs_.begin(), bs_.end());
  all.insert(all.end(), wap_.begin(), wap_.end());
  all.insert(all.end(), wue_.begin(), wue_.end());

  const std::size_t n = all.size();
  gains_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double g = link_gain(distance(all[i], all[j]), config);
      gains_[i * n + j] = g;
      gains_[j * n + i] = g;
    }
  }
}

std::size_t NetworkTopology::flat_index(NodeId node) const {
  switch (node.kind) {
    case NodeKind::Bs:
      return node.index;
    case NodeKind::Wap:
      return bs_.size() + node.index;
    case NodeKind::Wue:
      return bs_.size() + wap_.size() + node.index;
  }
  return 0;
}

Point NetworkTopology::position(NodeId node) const {
  switch (node.kind) {
    case NodeKind::Bs:
      return bs_.at(node.index);
    case NodeKind::Wap:
      return wap_.at(node.index);
    case NodeKind::Wue:
      return wue_.at(node.index);
  }
  return {};
}

double NetworkTopology::gain(NodeId tx, NodeId rx) const {
  return gains_[flat_index(tx) * node_count() + flat_index(rx)];
}

NetworkTopology generate_topology(const ScenarioConfig& config) {
  validate(config);
  const auto place = [&](int count, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                      static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> coord(0.0, config.area_side);
    std::vector<Point> points;
    points.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      const double x = coord(rng);
      const double y = coord(rng);
      points.push_back({x, y});
    }
    return points;
  };
  return NetworkTopology(config, place(config.n_bs, 1), place(config.n_wap, 2),
                         place(config.n_wue, 3));
}

double sinr(double signal_w, std::span<const double> interference_w,
            double noise_w) {
  double denominator = noise_w;
  for (double i : interference_w) denominator += i;
  return signal_w / denominator;
}

double sinr(NodeId rx, NodeId tx, std::span<const NodeId> interferers,
            const NetworkTopology& topology, const ScenarioConfig& config) {
  std::vector<double> interference;
  interference.reserve(interferers.size());
  for (const NodeId& j : interferers) {
    interference.push_back(tx_power(j.kind, config) * topology.gain(j, rx));
  }
  return sinr(tx_power(tx.kind, config) * topology.gain(tx, rx), interference,
              config.noise_power);
}

double phy_rate(double sinr_linear, const ScenarioConfig& config) {
  return config.channel_bandwidth * std::log2(1.0 + sinr_linear);
}

}  // namespace lteu
