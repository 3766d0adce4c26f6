#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "hjnet/distance.hpp"
#include "hjnet/grid.hpp"
#include "hjnet/io.hpp"
#include "hjnet/solver.hpp"

namespace hjnet {

struct PathPoint {
  std::size_t node = 0;
  int arc = 0;
  double t = 0.0;
  double cumulative_cost = 0.0;
};

/// Discrete trajectory from a start node to the boundary. total_cost sums h f |q| over the steps
/// and excludes the terminal g.
struct NetworkPath {
  std::vector<PathPoint> points;
  double total_cost = 0.0;
  int terminal_vertex = -1;
  double terminal_value = 0.0;
};

/// Follows the recorded controls from the grid node nearest to `start` until a boundary vertex
/// is reached. Each foot point is snapped to its nearest node before the next step.
inline NetworkPath extract_path(const Network& net, const Grid& grid, const SolveResult& result,
                                const NetworkPoint& start, double h, long max_steps = 100000) {
  if (result.controls.size() != grid.size()) {
    throw Error(ErrorKind::InvalidInput, "path extraction needs a result with recorded controls");
  }
  if (start.arc < 0 || start.arc >= static_cast<int>(net.arc_count()) || start.t < -1e-12 ||
      start.t > net.length(start.arc) + 1e-12) {
    throw Error(ErrorKind::OutOfRange, "path start is off the network");
  }
  NetworkPath path;
  std::size_t node = grid.nearest(start.arc, start.t);
  path.points.push_back({node, grid.arc_of(node), grid.t(node), 0.0});
  for (long step = 0;; ++step) {
    const int v = grid.vertex_of(node);
    if (v >= 0 && net.is_boundary(v)) {
      path.terminal_vertex = v;
      path.terminal_value = net.dirichlet(v);
      return path;
    }
    if (step >= max_steps) {
      throw Error(ErrorKind::MaxStepsExceeded,
                  "no boundary vertex reached after " + std::to_string(max_steps) + " steps");
    }
    const Control c = result.controls[node];
    if (c.arc < 0 || c.q == 0.0) {
      throw Error(ErrorKind::PathStalled, "zero control at node " + std::to_string(node) +
                                              " (arc " + std::to_string(grid.arc_of(node)) +
                                              ", t = " + io::fmt(grid.t(node)) + ")");
    }
    const double t0 = v >= 0 ? net.vertex_parameter(c.arc, v) : grid.t(node);
    const double foot = std::clamp(t0 - h * c.q, 0.0, net.length(c.arc));
    path.total_cost += h * grid.cost(node) * std::abs(c.q);
    node = grid.nearest(c.arc, foot);
    path.points.push_back({node, c.arc, grid.t(node), path.total_cost});
  }
}

inline void write_path_csv(std::ostream& os, const Network& net, const Grid& grid,
                           const NetworkPath& path) {
  os << "step,arc_id,t";
  for (std::size_t i = 1; i <= net.dim(); ++i) os << ",x" << i;
  os << ",cumulative_cost\n";
  for (std::size_t k = 0; k < path.points.size(); ++k) {
    const auto& p = path.points[k];
    os << k << ',' << p.arc << ',' << io::fmt(p.t);
    for (double x : grid.coords(p.node)) os << ',' << io::fmt(x);
    os << ',' << io::fmt(p.cumulative_cost) << '\n';
  }
}

}  // namespace hjnet
