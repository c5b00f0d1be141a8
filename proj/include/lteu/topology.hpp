#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lteu/config.hpp"

namespace lteu {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(Point a, Point b);

enum class NodeKind { Bs, Wap, Wue };

struct NodeId {
  NodeKind kind;
  std::size_t index;

  friend bool operator==(const NodeId&, const NodeId&) = default;
};

/// Placed BSs, WAPs and WUEs plus the pairwise linear power gains implied by
/// the log-distance model. Immutable once built.
class NetworkTopology {
 public:
  /// Builds a topology from explicit coordinates. Throws ConfigError if a
  /// point lies outside [0, area_side]^2.
  NetworkTopology(const ScenarioConfig& config, std::vector<Point> bs,
                  std::vector<Point> wap, std::vector<Point> wue);

  std::span<const Point> bs_positions() const { return bs_; }
  std::span<const Point> wap_positions() const { return wap_; }
  std::span<const Point> wue_positions() const { return wue_; }

  std::size_t n_bs() const { return bs_.size(); }
  std::size_t n_wap() const { return wap_.size(); }
  std::size_t n_wue() const { return wue_.size(); }
  std::size_t node_count() const { return bs_.size() + wap_.size() + wue_.size(); }

  Point position(NodeId node) const;

  /// Linear power gain of the link; symmetric in its arguments.
  double gain(NodeId tx, NodeId rx) const;

  friend bool operator==(const NetworkTopology&, const NetworkTopology&) = default;

 private:
  std::size_t flat_index(NodeId node) const;

  std::vector<Point> bs_;
  std::vector<Point> wap_;
  std::vector<Point> wue_;
  std::vector<double> gains_;  // row-major node_count x node_count
};

/// i.i.d. uniform placement over the square. BS, WAP and WUE coordinates are
/// drawn from separate streams so changing one count leaves the other kinds
/// in place and a larger WAP count extends a smaller one.
NetworkTopology generate_topology(const ScenarioConfig& config);

/// Log-distance path loss with distances below 1 m clamped to 1 m.
double path_loss_db(double distance_m, const ScenarioConfig& config);

/// 10^(-path_loss_db / 10).
double link_gain(double distance_m, const ScenarioConfig& config);

double tx_power(NodeKind kind, const ScenarioConfig& config);

/// Signal over noise plus summed interference, all in watts.
double sinr(double signal_w, std::span<const double> interference_w,
            double noise_w);

/// SINR at `rx` for a transmission from `tx` while every node in
/// `interferers` transmits on the same channel.
double sinr(NodeId rx, NodeId tx, std::span<const NodeId> interferers,
            const NetworkTopology& topology, const ScenarioConfig& config);

/// Shannon rate over one channel, bits/s.
double phy_rate(double sinr_linear, const ScenarioConfig& config);

}  // namespace lteu
