#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "hjnet/network.hpp"

namespace hjnet {

/// A point on the network addressed by arc id and arc-length parameter.
struct NetworkPoint {
  int arc = 0;
  double t = 0.0;
};

inline NetworkPoint vertex_point(const Network& net, int vertex) {
  const auto& inc = net.incident(vertex);
  if (inc.empty()) {
    throw Error(ErrorKind::InvalidInput, "vertex " + std::to_string(vertex) + " has no arcs");
  }
  return {inc.front().arc, net.vertex_parameter(inc.front().arc, vertex)};
}

inline Point embed(const Network& net, const NetworkPoint& p) { return net.param(p.arc).eval(p.t); }

namespace detail {

/// Dijkstra over the vertex graph with arc lengths as weights; `seeds` are (vertex, initial
/// distance) pairs.
inline std::vector<double> vertex_dijkstra(const Network& net,
                                           const std::vector<std::pair<int, double>>& seeds) {
  std::vector<double> dist(net.vertex_count(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (const auto& [v, d] : seeds) {
    if (d < dist[static_cast<std::size_t>(v)]) {
      dist[static_cast<std::size_t>(v)] = d;
      heap.push({d, v});
    }
  }
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[static_cast<std::size_t>(v)]) continue;
    for (const auto& inc : net.incident(v)) {
      const auto& a = net.arc(inc.arc);
      const int w = a.start == v ? a.end : a.start;
      const double nd = d + net.length(inc.arc);
      if (nd < dist[static_cast<std::size_t>(w)]) {
        dist[static_cast<std::size_t>(w)] = nd;
        heap.push({nd, w});
      }
    }
  }
  return dist;
}

}  // namespace detail

/// Intrinsic shortest-path length between two network points. x and y are spliced into the
/// vertex graph as temporary nodes on their arcs.
inline double path_distance(const Network& net, const NetworkPoint& x, const NetworkPoint& y) {
  for (const auto* p : {&x, &y}) {
    if (p->arc < 0 || p->arc >= static_cast<int>(net.arc_count()) || p->t < -1e-12 ||
        p->t > net.length(p->arc) + 1e-12) {
      throw Error(ErrorKind::OutOfRange, "network point off the network");
    }
  }
  const auto& ax = net.arc(x.arc);
  const auto& ay = net.arc(y.arc);
  const double lx = net.length(x.arc);
  const double ly = net.length(y.arc);
  const auto dist = detail::vertex_dijkstra(net, {{ax.start, x.t}, {ax.end, lx - x.t}});
  double best = std::min(dist[static_cast<std::size_t>(ay.start)] + y.t,
                         dist[static_cast<std::size_t>(ay.end)] + (ly - y.t));
  if (x.arc == y.arc) best = std::min(best, std::abs(x.t - y.t));
  return best;
}

/// Distance from every vertex to the point x.
inline std::vector<double> vertex_distances(const Network& net, const NetworkPoint& x) {
  const auto& a = net.arc(x.arc);
  return detail::vertex_dijkstra(net, {{a.start, x.t}, {a.end, net.length(x.arc) - x.t}});
}

}  // namespace hjnet
