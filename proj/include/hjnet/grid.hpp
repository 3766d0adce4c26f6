#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "hjnet/network.hpp"

namespace hjnet {

/// One value per global grid node.
using NodeField = std::vector<double>;

/// Per-arc partitions P^j with global node numbering.
///
/// Node copies of a vertex are distinct slots, one per incident arc. Nodes are numbered arc by
/// arc in ascending arc id, ascending parameter within an arc.
class Grid {
 public:
  Grid(const Network& net, double step) : step_(step) {
    if (!(step > 0.0)) throw Error(ErrorKind::StepTooLarge, "grid step must be positive");
    double min_len = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < net.arc_count(); ++j) min_len = std::min(min_len, net.length(static_cast<int>(j)));
    if (!(step < min_len)) {
      throw Error(ErrorKind::StepTooLarge, "grid step " + std::to_string(step) +
                                               " must be below the shortest arc length " +
                                               std::to_string(min_len));
    }
    const std::size_t na = net.arc_count();
    params_.resize(na);
    offset_.resize(na + 1, 0);
    arc_dx_.resize(na, 0.0);
    for (std::size_t j = 0; j < na; ++j) {
      params_[j] = partition(net.length(static_cast<int>(j)), step);
      offset_[j + 1] = offset_[j] + params_[j].size();
      for (std::size_t m = 1; m < params_[j].size(); ++m) {
        arc_dx_[j] = std::max(arc_dx_[j], params_[j][m] - params_[j][m - 1]);
      }
      dx_ = std::max(dx_, arc_dx_[j]);
    }
    const std::size_t n = offset_.back();
    node_arc_.resize(n);
    node_index_.resize(n);
    node_vertex_.assign(n, -1);
    coords_.resize(n);
    cost_.resize(n);
    copies_.resize(net.vertex_count());
    for (std::size_t j = 0; j < na; ++j) {
      const auto& p = net.param(static_cast<int>(j));
      const auto& arc = net.arc(static_cast<int>(j));
      for (std::size_t m = 0; m < params_[j].size(); ++m) {
        const std::size_t g = offset_[j] + m;
        node_arc_[g] = static_cast<int>(j);
        node_index_[g] = m;
        coords_[g] = p.eval(params_[j][m]);
        cost_[g] = net.cost()(coords_[g]);
      }
      const std::size_t first = offset_[j];
      const std::size_t last = offset_[j + 1] - 1;
      node_vertex_[first] = arc.start;
      node_vertex_[last] = arc.end;
      copies_[static_cast<std::size_t>(arc.start)].push_back(first);
      copies_[static_cast<std::size_t>(arc.end)].push_back(last);
    }
  }

  /// Uniform nodes k*step with a closing node exactly at `length`.
  static std::vector<double> partition(double length, double step) {
    const auto whole = static_cast<std::size_t>(std::floor(length / step));
    std::vector<double> t;
    t.reserve(whole + 2);
    for (std::size_t k = 0; k <= whole; ++k) t.push_back(static_cast<double>(k) * step);
    // drop a sliver cell produced by rounding in length/step
    if (length - t.back() <= 1e-9 * step) t.pop_back();
    t.push_back(length);
    return t;
  }

  double step() const { return step_; }
  /// max_j max_m (t_m - t_{m-1})
  double dx() const { return dx_; }
  double dx(int arc) const { return arc_dx_[static_cast<std::size_t>(arc)]; }

  std::size_t size() const { return offset_.back(); }
  std::size_t arc_count() const { return params_.size(); }

  std::span<const double> params(int arc) const { return params_[static_cast<std::size_t>(arc)]; }
  std::size_t node_count(int arc) const { return params_[static_cast<std::size_t>(arc)].size(); }
  std::size_t global(int arc, std::size_t m) const { return offset_[static_cast<std::size_t>(arc)] + m; }
  std::size_t first(int arc) const { return offset_[static_cast<std::size_t>(arc)]; }
  std::size_t last(int arc) const { return offset_[static_cast<std::size_t>(arc) + 1] - 1; }

  int arc_of(std::size_t node) const { return node_arc_[node]; }
  std::size_t index_of(std::size_t node) const { return node_index_[node]; }
  double t(std::size_t node) const { return params_[static_cast<std::size_t>(node_arc_[node])][node_index_[node]]; }
  /// Vertex id of the node, or -1 for nodes strictly inside an arc.
  int vertex_of(std::size_t node) const { return node_vertex_[node]; }
  const Point& coords(std::size_t node) const { return coords_[node]; }
  /// f at the node's embedded position.
  double cost(std::size_t node) const { return cost_[node]; }
  const std::vector<std::size_t>& copies(int vertex) const { return copies_[static_cast<std::size_t>(vertex)]; }

  /// Node on `arc` closest in parameter to t.
  std::size_t nearest(int arc, double t) const {
    const auto p = params(arc);
    auto it = std::lower_bound(p.begin(), p.end(), t);
    std::size_t m = static_cast<std::size_t>(it - p.begin());
    if (m == p.size()) m = p.size() - 1;
    if (m > 0 && std::abs(p[m - 1] - t) <= std::abs(p[m] - t)) --m;
    return global(arc, m);
  }

  NodeField field(double value = 0.0) const { return NodeField(size(), value); }

 private:
  double step_;
  double dx_ = 0.0;
  std::vector<std::vector<double>> params_;
  std::vector<std::size_t> offset_;
  std::vector<double> arc_dx_;
  std::vector<int> node_arc_;
  std::vector<std::size_t> node_index_;
  std::vector<int> node_vertex_;
  std::vector<Point> coords_;
  std::vector<double> cost_;
  std::vector<std::vector<std::size_t>> copies_;
};

inline Grid build_grid(const Network& net, double dx) { return Grid(net, dx); }

/// The two active basis functions at parameter t on an arc.
struct InterpolationStencil {
  std::size_t lo = 0;
  std::size_t hi = 0;
  double w_lo = 1.0;
  double w_hi = 0.0;
};

inline InterpolationStencil stencil(const Grid& grid, int arc, double t) {
  const auto p = grid.params(arc);
  const double len = p.back();
  if (t < -1e-12 || t > len + 1e-12) {
    throw Error(ErrorKind::OutOfRange, "interpolation parameter " + std::to_string(t) +
                                           " outside arc " + std::to_string(arc));
  }
  t = std::clamp(t, 0.0, len);
  auto it = std::upper_bound(p.begin(), p.end(), t);
  std::size_t m = it == p.begin() ? 0 : static_cast<std::size_t>(it - p.begin()) - 1;
  if (m >= p.size() - 1) m = p.size() - 2;
  const double w_hi = (t - p[m]) / (p[m + 1] - p[m]);
  return {grid.global(arc, m), grid.global(arc, m + 1), 1.0 - w_hi, w_hi};
}

/// Continuous piecewise-linear interpolant of W on `arc` evaluated at arc-length t.
inline double interpolate(const Grid& grid, std::span<const double> w, int arc, double t) {
  const auto s = stencil(grid, arc, t);
  if (s.w_hi == 0.0) return w[s.lo];
  if (s.w_lo == 0.0) return w[s.hi];
  return s.w_lo * w[s.lo] + s.w_hi * w[s.hi];
}

}  // namespace hjnet
