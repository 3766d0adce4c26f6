#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hjnet/hjnet.hpp"

namespace hjtest {

inline std::string data_file(const std::string& name) { return std::string(HJNET_DATA_DIR) + "/" + name; }

inline hjnet::Network load(const std::string& name) { return hjnet::io::load_network(data_file(name)); }

inline const std::vector<std::string>& bundled() {
  static const std::vector<std::string> names = {"single_arc.json", "y_network.json", "test1.json",
                                                 "test2.json",      "test3.json",     "test4.json"};
  return names;
}

inline hjnet::CostSpec constant_cost(double f = 1.0) { return {hjnet::ConstantCost{f}, f}; }

/// Segment (0,0)-(len,0) with both ends on the boundary.
inline hjnet::Network single_arc(double len = 1.0, double g0 = 0.0, double g1 = 0.0,
                                 hjnet::CostSpec cost = constant_cost()) {
  return hjnet::Network({{0, {0.0, 0.0}}, {1, {len, 0.0}}},
                        {{0, 0, 1, hjnet::Segment{{0.0, 0.0}, {len, 0.0}}}},
                        {{0, g0}, {1, g1}}, std::move(cost));
}

/// Three unit legs from a centre vertex 0; leaves 1..3 carry the given g.
inline hjnet::Network y_network(double g1, double g2, double g3,
                                hjnet::CostSpec cost = constant_cost()) {
  const double c = 0.5, s = std::sqrt(3.0) / 2.0;
  std::vector<hjnet::Vertex> v = {{0, {0.0, 0.0}}, {1, {1.0, 0.0}}, {2, {-c, s}}, {3, {-c, -s}}};
  std::vector<hjnet::Arc> a;
  for (int k = 1; k <= 3; ++k) a.push_back({k - 1, 0, k, hjnet::Segment{v[0].position, v[static_cast<std::size_t>(k)].position}});
  return hjnet::Network(v, a, {{1, g1}, {2, g2}, {3, g3}}, std::move(cost));
}

/// Small random connected planar network: a path of vertices plus a few chords, all leaves and
/// one interior vertex on the boundary with g = 0.
inline hjnet::Network random_network(std::mt19937& rng, int n_vertices = 5) {
  std::uniform_real_distribution<double> jitter(-0.2, 0.2);
  std::vector<hjnet::Vertex> v;
  for (int i = 0; i < n_vertices; ++i) {
    v.push_back({i, {static_cast<double>(i) + jitter(rng), (i % 2 ? 0.7 : 0.0) + jitter(rng)}});
  }
  std::vector<hjnet::Arc> a;
  auto add = [&](int s, int e) {
    a.push_back({static_cast<int>(a.size()), s, e,
                 hjnet::Segment{v[static_cast<std::size_t>(s)].position, v[static_cast<std::size_t>(e)].position}});
  };
  for (int i = 0; i + 1 < n_vertices; ++i) add(i, i + 1);
  for (int i = 0; i + 2 < n_vertices; i += 2) add(i, i + 2);
  std::uniform_real_distribution<double> amp(0.2, 0.8);
  hjnet::CostSpec cost{hjnet::SinusoidalCost{1.5, amp(rng), 2.0, amp(rng) * 0.5, 3.0}, 0.05};
  return hjnet::Network(v, a, {{0, 0.0}, {n_vertices - 1, 0.0}}, cost);
}

inline constexpr double kTest1SineLength = 4.18827520369843392;

}  // namespace hjtest
