#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hjnet/grid.hpp"
#include "hjnet/network.hpp"

namespace hjnet {

enum class IterationVariable { Direct, Kruzkov };

struct SolverConfig {
  double h = 0.1;
  double dx = 0.1;
  double tolerance = 1e-9;
  long max_sweeps = 1'000'000;
  IterationVariable iteration_variable = IterationVariable::Direct;
  bool record_controls = false;
  /// Starting field in u units; must dominate the solution. Defaults to the bound in solve().
  std::optional<NodeField> initial;

  /// Non-fatal remarks about the configuration against a grid.
  std::vector<std::string> warnings(const Grid& grid) const {
    std::vector<std::string> out;
    if (grid.dx() > 0.5 * h * (1.0 + 1e-12)) {
      out.push_back("dx = " + std::to_string(grid.dx()) + " exceeds h/2 = " +
                    std::to_string(0.5 * h) +
                    "; the fully discrete scheme is only known to be well posed for dx <= h/2");
    }
    return out;
  }
};

/// Argmin record of one update: the arc the foot point lies on and the control q*.
/// arc == -1 marks a boundary node (no control).
struct Control {
  int arc = -1;
  double q = 0.0;
};

struct Update {
  double value = 0.0;
  Control control;
};

struct SolveResult {
  NodeField values;
  std::vector<Control> controls;
  long sweeps_used = 0;
  double final_residual = std::numeric_limits<double>::infinity();
  bool converged = false;
  /// Sup-norm change of the iteration variable after every sweep.
  std::vector<double> residual_history;
  /// Number of sweeps after which every node had moved off its initial value (0 if never).
  long information_sweep = 0;
  std::vector<std::string> warnings;
};

class NotConverged : public Error {
 public:
  NotConverged(SolveResult partial, const std::string& what)
      : Error(ErrorKind::NotConverged, what), result_(std::move(partial)) {}
  const SolveResult& result() const { return result_; }

 private:
  SolveResult result_;
};

namespace detail {

struct Candidate {
  double q;
  double foot;
};

/// Breakpoints of the piecewise-linear objective q -> I[W](t0 - h q) + h f |q| on one arc:
/// q = 0, the ends of the feasible interval, and every q whose foot is a grid node. Feet within
/// rounding of a node are snapped onto it.
inline void arc_candidates(const Grid& grid, int arc, double t0, double h,
                           std::vector<Candidate>& out) {
  out.clear();
  const auto p = grid.params(arc);
  const double len = p.back();
  const double snap = 1e-9 * h;
  auto snapped = [&](double foot) {
    auto it = std::lower_bound(p.begin(), p.end(), foot - snap);
    return (it != p.end() && *it <= foot + snap) ? *it : foot;
  };
  out.push_back({0.0, t0});
  // feasible q: t0 - h q in [0, len], |q| <= 1
  double back = t0;
  double ahead = t0;
  if (t0 > snap) {
    back = t0 >= h ? snapped(t0 - h) : 0.0;
    out.push_back({t0 >= h ? 1.0 : t0 / h, back});
  }
  if (len - t0 > snap) {
    ahead = len - t0 >= h ? snapped(t0 + h) : len;
    out.push_back({len - t0 >= h ? -1.0 : (t0 - len) / h, ahead});
  }
  auto lo = std::upper_bound(p.begin(), p.end(), back);
  auto hi = std::lower_bound(p.begin(), p.end(), ahead);
  for (auto it = lo; it < hi; ++it) {
    if (std::abs(*it - t0) <= snap) continue;
    out.push_back({(t0 - *it) / h, *it});
  }
}

inline double to_u(double w) { return -std::log1p(-w); }
inline double to_w(double u) { return -std::expm1(-u); }

/// In Kruzkov mode the foot value is interpolated in u and transformed back, so the iteration
/// is conjugate to the direct scheme and shares its fixed point.
inline double objective(const Grid& grid, std::span<const double> w, int arc, const Candidate& c,
                        double h, double f, IterationVariable mode) {
  const double cost = h * f * std::abs(c.q);
  if (mode == IterationVariable::Direct) return interpolate(grid, w, arc, c.foot) + cost;
  const auto s = stencil(grid, arc, c.foot);
  double foot;
  if (s.w_hi == 0.0) {
    foot = w[s.lo];
  } else if (s.w_lo == 0.0) {
    foot = w[s.hi];
  } else {
    foot = to_w(s.w_lo * to_u(w[s.lo]) + s.w_hi * to_u(w[s.hi]));
  }
  const double discount = std::exp(-cost);
  return discount * foot + 1.0 - discount;
}

/// Tracks the minimum value and, separately, the preferred moving control.
///
/// The stationary candidate q = 0 reproduces W at the node, so it attains the minimum at every
/// fixed point; it is only recorded as the control when no moving candidate ties with it.
struct Minimizer {
  double value = std::numeric_limits<double>::infinity();
  double moving_value = std::numeric_limits<double>::infinity();
  Control moving;
  double stationary_value = std::numeric_limits<double>::infinity();
  int stationary_arc = -1;

  static bool ties(double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)); }

  // smallest |q|, then negative q, then lowest arc id
  static bool preferred(const Control& a, const Control& b) {
    if (std::abs(a.q) != std::abs(b.q)) return std::abs(a.q) < std::abs(b.q);
    if ((a.q < 0.0) != (b.q < 0.0)) return a.q < 0.0;
    return a.arc < b.arc;
  }

  void offer(int arc, double q, double v) {
    value = std::min(value, v);
    if (q == 0.0) {
      if (v < stationary_value) {
        stationary_value = v;
        stationary_arc = arc;
      }
      return;
    }
    const Control c{arc, q};
    if (moving.arc < 0 || (v < moving_value && !ties(v, moving_value))) {
      moving_value = v;
      moving = c;
    } else if (ties(v, moving_value)) {
      moving_value = std::min(moving_value, v);
      if (preferred(c, moving)) moving = c;
    }
  }

  Update result() const {
    if (moving.arc >= 0 && (moving_value <= stationary_value || ties(moving_value, stationary_value))) {
      return {value, moving};
    }
    return {value, Control{stationary_arc, 0.0}};
  }
};

inline void offer_arc(const Grid& grid, std::span<const double> w, int arc, double t0, double h,
                      double f, IterationVariable mode, Minimizer& best,
                      std::vector<Candidate>& scratch) {
  arc_candidates(grid, arc, t0, h, scratch);
  for (const auto& c : scratch) best.offer(arc, c.q, objective(grid, w, arc, c, h, f, mode));
}

}  // namespace detail

/// Update at a node strictly inside an arc: exact minimum of the piecewise-linear objective
/// over its breakpoints.
inline Update local_update(const Grid& grid, std::span<const double> w, std::size_t node,
                           const SolverConfig& cfg) {
  if (grid.vertex_of(node) >= 0) {
    throw Error(ErrorKind::InvalidInput, "local_update called on a vertex node");
  }
  std::vector<detail::Candidate> scratch;
  detail::Minimizer best;
  detail::offer_arc(grid, w, grid.arc_of(node), grid.t(node), cfg.h, grid.cost(node),
                    cfg.iteration_variable, best, scratch);
  return best.result();
}

/// Update at an interior vertex: minimum over every incident arc, each restricted to the
/// feasible half-interval of q given by the incidence sign.
inline Update vertex_update(const Network& net, const Grid& grid, std::span<const double> w,
                            int vertex, const SolverConfig& cfg) {
  std::vector<detail::Candidate> scratch;
  detail::Minimizer best;
  const auto& copies = grid.copies(vertex);
  const double f = grid.cost(copies.front());
  for (const auto& inc : net.incident(vertex)) {
    const double t0 = inc.sign > 0 ? 0.0 : net.length(inc.arc);
    detail::offer_arc(grid, w, inc.arc, t0, cfg.h, f, cfg.iteration_variable, best, scratch);
  }
  return best.result();
}

/// Dirichlet value at a boundary vertex, in u units.
inline double boundary_update(const Network& net, int vertex) { return net.dirichlet(vertex); }

namespace detail {

inline double boundary_value(const Network& net, int vertex, IterationVariable mode) {
  const double g = boundary_update(net, vertex);
  return mode == IterationVariable::Direct ? g : to_w(g);
}

/// Assigns every vertex copy the minimum over its copies.
inline void reinitialize_vertices(const Network& net, const Grid& grid, std::span<double> w) {
  for (std::size_t v = 0; v < net.vertex_count(); ++v) {
    const auto& copies = grid.copies(static_cast<int>(v));
    double m = std::numeric_limits<double>::infinity();
    for (auto c : copies) m = std::min(m, w[c]);
    for (auto c : copies) w[c] = m;
  }
}

inline Update node_update(const Network& net, const Grid& grid, std::span<const double> w,
                          std::size_t node, const SolverConfig& cfg) {
  const int v = grid.vertex_of(node);
  if (v >= 0 && net.is_boundary(v)) return {boundary_value(net, v, cfg.iteration_variable), {}};
  if (v >= 0) return vertex_update(net, grid, w, v, cfg);
  return local_update(grid, w, node, cfg);
}

}  // namespace detail

/// One Gauss-Seidel pass in ascending arc order, ascending node order, followed by vertex
/// re-initialization. Returns the sup-norm change over the pass.
inline double sweep(const Network& net, const Grid& grid, std::span<double> w,
                    const SolverConfig& cfg) {
  const NodeField before(w.begin(), w.end());
  for (std::size_t node = 0; node < grid.size(); ++node) {
    w[node] = detail::node_update(net, grid, w, node, cfg).value;
  }
  detail::reinitialize_vertices(net, grid, w);
  double residual = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) residual = std::max(residual, std::abs(w[i] - before[i]));
  return residual;
}

/// Jacobi application of the scheme operator S(dx, h, W) to every node (no re-initialization).
inline NodeField apply_scheme(const Network& net, const Grid& grid, std::span<const double> w,
                              const SolverConfig& cfg) {
  NodeField out(w.size());
  for (std::size_t node = 0; node < grid.size(); ++node) {
    out[node] = detail::node_update(net, grid, w, node, cfg).value;
  }
  return out;
}

/// max g + (max f) * (total length) + 1 at interior nodes and g at boundary nodes.
inline NodeField default_initial_field(const Network& net, const Grid& grid) {
  double max_g = 0.0;
  bool any = false;
  for (const auto& b : net.boundary()) {
    const double g = net.dirichlet(b.vertex);
    max_g = any ? std::max(max_g, g) : g;
    any = true;
  }
  double max_f = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) max_f = std::max(max_f, grid.cost(i));
  NodeField u(grid.size(), max_g + max_f * net.total_length() + 1.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const int v = grid.vertex_of(i);
    if (v >= 0 && net.is_boundary(v)) u[i] = net.dirichlet(v);
  }
  return u;
}

/// Argmin controls of the scheme at a (converged) field in u units.
inline std::vector<Control> compute_controls(const Network& net, const Grid& grid,
                                             std::span<const double> u, const SolverConfig& cfg) {
  SolverConfig direct = cfg;
  direct.iteration_variable = IterationVariable::Direct;
  std::vector<Control> controls(grid.size());
  for (std::size_t node = 0; node < grid.size(); ++node) {
    controls[node] = detail::node_update(net, grid, u, node, direct).control;
  }
  return controls;
}

/// Iterates sweeps to the fixed point U = S(dx, h, U).
///
/// In Kruzkov mode the sweeps act on w = 1 - exp(-u) and the result is mapped back with
/// u = -log(1 - w); the residual is then measured in w. Throws NotConverged (carrying the
/// partial result) when max_sweeps is exhausted, NonPositiveCost when f < eta at a node and
/// MissingDirichletValue for a boundary entry without g.
inline SolveResult solve(const Network& net, const Grid& grid, const SolverConfig& cfg) {
  if (!(cfg.h > 0.0)) throw Error(ErrorKind::InvalidInput, "h must be positive");
  const double eta = net.cost().eta;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid.cost(i) >= eta) || !(grid.cost(i) > 0.0)) {
      throw Error(ErrorKind::NonPositiveCost,
                  "f = " + std::to_string(grid.cost(i)) + " below eta = " + std::to_string(eta) +
                      " at node " + std::to_string(i) + " on arc " + std::to_string(grid.arc_of(i)));
    }
  }
  if (net.boundary().empty()) throw Error(ErrorKind::InvalidInput, "empty boundary set");
  for (const auto& b : net.boundary()) (void)net.dirichlet(b.vertex);

  SolveResult result;
  result.warnings = cfg.warnings(grid);

  NodeField u = cfg.initial ? *cfg.initial : default_initial_field(net, grid);
  if (u.size() != grid.size()) throw Error(ErrorKind::InvalidInput, "initial field size mismatch");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const int v = grid.vertex_of(i);
    if (v >= 0 && net.is_boundary(v)) u[i] = net.dirichlet(v);
  }

  const bool kruzkov = cfg.iteration_variable == IterationVariable::Kruzkov;
  NodeField w = u;
  if (kruzkov) {
    for (auto& x : w) x = detail::to_w(x);
  }
  const NodeField start = w;
  std::vector<bool> moved(w.size(), false);
  std::size_t unmoved = w.size();

  while (result.sweeps_used < cfg.max_sweeps) {
    const double r = sweep(net, grid, w, cfg);
    ++result.sweeps_used;
    result.residual_history.push_back(r);
    result.final_residual = r;
    if (unmoved > 0) {
      for (std::size_t i = 0; i < w.size(); ++i) {
        const int v = grid.vertex_of(i);
        const bool fixed = v >= 0 && net.is_boundary(v);
        if (!moved[i] && (fixed || w[i] != start[i])) {
          moved[i] = true;
          --unmoved;
        }
      }
      if (unmoved == 0) result.information_sweep = result.sweeps_used;
    }
    if (r <= cfg.tolerance) {
      result.converged = true;
      break;
    }
  }

  if (kruzkov) {
    for (std::size_t i = 0; i < w.size(); ++i) u[i] = detail::to_u(w[i]);
    // boundary values are exact by definition, not through the round trip
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const int v = grid.vertex_of(i);
      if (v >= 0 && net.is_boundary(v)) u[i] = net.dirichlet(v);
    }
  } else {
    u = std::move(w);
  }
  result.values = std::move(u);
  if (cfg.record_controls) result.controls = compute_controls(net, grid, result.values, cfg);
  if (!result.converged) {
    throw NotConverged(std::move(result), "residual above tolerance after " +
                                              std::to_string(cfg.max_sweeps) + " sweeps");
  }
  return result;
}

struct CompatibilityViolation {
  int x = 0;  // boundary vertex where g is too large
  int y = 0;
  double excess = 0.0;  // g(x) - g(y) - S(y, x)
};

struct CompatibilityReport {
  std::vector<CompatibilityViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks g(x) - g(y) <= S(y, x) + 1e-8 for all ordered boundary pairs. `cost_distance(y, x)`
/// is the minimal running cost from boundary vertex y to boundary vertex x.
inline CompatibilityReport check_compatibility(
    const Network& net, const std::function<double(int, int)>& cost_distance) {
  CompatibilityReport report;
  for (const auto& bx : net.boundary()) {
    for (const auto& by : net.boundary()) {
      if (bx.vertex == by.vertex) continue;
      const double gx = net.dirichlet(bx.vertex);
      const double gy = net.dirichlet(by.vertex);
      const double s = cost_distance(by.vertex, bx.vertex);
      if (gx - gy > s + 1e-8) report.violations.push_back({bx.vertex, by.vertex, gx - gy - s});
    }
  }
  return report;
}

}  // namespace hjnet
