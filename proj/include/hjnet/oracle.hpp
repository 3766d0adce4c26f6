#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <utility>
#include <vector>

#include "hjnet/grid.hpp"
#include "hjnet/network.hpp"
#include "hjnet/quadrature.hpp"

namespace hjnet::oracle {

/// Values on a fine grid, evaluated elsewhere by piecewise-linear interpolation.
struct FineField {
  Grid grid;
  NodeField values;

  double operator()(int arc, double t) const { return interpolate(grid, values, arc, t); }
};

namespace detail {

/// Multi-source Dijkstra on the fine-grid graph: adjacent nodes on an arc are joined with the
/// trapezoid rule of f over the cell, copies of one vertex with weight zero.
inline NodeField grid_dijkstra(const Network& net, const Grid& grid,
                               const std::vector<std::pair<std::size_t, double>>& seeds) {
  NodeField dist(grid.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (const auto& [node, d] : seeds) {
    if (d < dist[node]) {
      dist[node] = d;
      heap.push({d, node});
    }
  }
  auto relax = [&](std::size_t to, double nd) {
    if (nd < dist[to]) {
      dist[to] = nd;
      heap.push({nd, to});
    }
  };
  while (!heap.empty()) {
    const auto [d, node] = heap.top();
    heap.pop();
    if (d > dist[node]) continue;
    const int arc = grid.arc_of(node);
    const std::size_t m = grid.index_of(node);
    if (m > 0) {
      const std::size_t prev = node - 1;
      relax(prev, d + 0.5 * (grid.t(node) - grid.t(prev)) * (grid.cost(node) + grid.cost(prev)));
    }
    if (m + 1 < grid.node_count(arc)) {
      const std::size_t next = node + 1;
      relax(next, d + 0.5 * (grid.t(next) - grid.t(node)) * (grid.cost(node) + grid.cost(next)));
    }
    if (const int v = grid.vertex_of(node); v >= 0) {
      for (auto c : grid.copies(v)) relax(c, d);
    }
  }
  (void)net;
  return dist;
}

}  // namespace detail

/// Approximates S(y, .), the minimal running cost from boundary vertex y, on a grid of step
/// `refinement`. Compare against grids at least four times coarser.
inline FineField brute_distance(const Network& net, int y, double refinement) {
  Grid grid(net, refinement);
  std::vector<std::pair<std::size_t, double>> seeds;
  for (auto c : grid.copies(y)) seeds.emplace_back(c, 0.0);
  NodeField values = detail::grid_dijkstra(net, grid, seeds);
  return FineField{std::move(grid), std::move(values)};
}

/// u(x) = min over boundary y of g(y) + S(y, x), from one brute_distance field per boundary
/// vertex (in the order of net.boundary()). All fields must share one grid step.
inline FineField representation_solution(const Network& net, const std::vector<FineField>& fields) {
  if (fields.size() != net.boundary().size() || fields.empty()) {
    throw Error(ErrorKind::InvalidInput, "one distance field per boundary vertex is required");
  }
  FineField out{fields.front().grid, NodeField(fields.front().values.size(),
                                                std::numeric_limits<double>::infinity())};
  for (std::size_t b = 0; b < fields.size(); ++b) {
    const double g = net.dirichlet(net.boundary()[b].vertex);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      out.values[i] = std::min(out.values[i], g + fields[b].values[i]);
    }
  }
  return out;
}

inline FineField representation_solution(const Network& net, double refinement) {
  std::vector<FineField> fields;
  for (const auto& b : net.boundary()) fields.push_back(brute_distance(net, b.vertex, refinement));
  return representation_solution(net, fields);
}

/// Cost distance S(y, x) between two vertices, from a brute_distance field rooted at y.
inline double vertex_cost_distance(const Network& net, const FineField& from_y, int x) {
  (void)net;
  return from_y.values[from_y.grid.copies(x).front()];
}

inline double test1_sine_integral(double x1) {
  auto integrand = [](double t) {
    const double d = 2.0 * std::numbers::pi * std::cos(2.0 * std::numbers::pi * t);
    return std::sqrt(1.0 + d * d);
  };
  return quadrature::adaptive_simpson(integrand, 0.0, std::abs(x1), 1e-12);
}

/// Exact solution on the Test-1 network: boundary knot at the origin with g = 0, f = 1,
/// vertical segments to (0, +-1) and sine arcs x2 = sin(2 pi x1), |x1| <= 1.
inline double test1_exact(std::span<const double> x) {
  if (x.size() != 2) throw Error(ErrorKind::PointOffNetwork, "test1 points are planar");
  constexpr double tol = 1e-7;
  if (std::abs(x[0]) <= tol && std::abs(x[1]) <= 1.0 + tol) return std::abs(x[1]);
  if (std::abs(x[0]) <= 1.0 + tol &&
      std::abs(x[1] - std::sin(2.0 * std::numbers::pi * x[0])) <= tol) {
    return test1_sine_integral(std::min(std::abs(x[0]), 1.0));
  }
  throw Error(ErrorKind::PointOffNetwork, "point is not on the test1 network");
}

}  // namespace hjnet::oracle
