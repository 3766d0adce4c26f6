#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "hjnet/cost.hpp"
#include "hjnet/errors.hpp"
#include "hjnet/geometry.hpp"

namespace hjnet {

struct Vertex {
  int id = 0;
  Point position;
};

struct Arc {
  int id = 0;
  int start = 0;
  int end = 0;
  GeometrySpec geometry;
};

struct BoundaryCondition {
  int vertex = 0;
  std::optional<double> g;
};

/// One incident arc seen from a vertex: sign is the incidence entry a_ij (+1 start, -1 end).
struct Incidence {
  int arc = 0;
  int sign = 0;
};

/// Finite topological network: vertices, parametrized arcs, Dirichlet boundary and running cost.
///
/// Construction checks only what is needed to index the data (contiguous ids, endpoint ids in
/// range, consistent dimension, non-degenerate arcs). Everything else is reported by
/// validate_network(). Immutable after construction.
class Network {
 public:
  Network(std::vector<Vertex> vertices, std::vector<Arc> arcs,
          std::vector<BoundaryCondition> boundary, CostSpec cost)
      : vertices_(std::move(vertices)), arcs_(std::move(arcs)),
        boundary_(std::move(boundary)), cost_(std::move(cost)) {
    sort_and_check_ids(vertices_, "vertex");
    sort_and_check_ids(arcs_, "arc");
    if (vertices_.empty()) throw Error(ErrorKind::InvalidInput, "network has no vertices");
    if (arcs_.empty()) throw Error(ErrorKind::InvalidInput, "network has no arcs");
    dim_ = vertices_.front().position.size();
    if (dim_ == 0) throw Error(ErrorKind::InvalidInput, "vertex positions must be non-empty");
    for (const auto& v : vertices_) {
      if (v.position.size() != dim_) {
        throw Error(ErrorKind::InvalidInput, "vertex " + std::to_string(v.id) + " has dimension " +
                                                 std::to_string(v.position.size()) + ", expected " +
                                                 std::to_string(dim_));
      }
    }
    incident_.resize(vertices_.size());
    params_.reserve(arcs_.size());
    for (const auto& a : arcs_) {
      for (int endpoint : {a.start, a.end}) {
        if (endpoint < 0 || endpoint >= static_cast<int>(vertices_.size())) {
          throw Error(ErrorKind::InvalidInput, "arc " + std::to_string(a.id) +
                                                   " references unknown vertex " +
                                                   std::to_string(endpoint));
        }
      }
      if (dimension(a.geometry) != dim_) {
        throw Error(ErrorKind::InvalidInput,
                    "arc " + std::to_string(a.id) + " geometry dimension mismatch");
      }
      params_.emplace_back(a.geometry);
      incident_[static_cast<std::size_t>(a.start)].push_back({a.id, 1});
      if (a.end != a.start) incident_[static_cast<std::size_t>(a.end)].push_back({a.id, -1});
    }
    is_boundary_.assign(vertices_.size(), false);
    for (const auto& b : boundary_) {
      if (b.vertex < 0 || b.vertex >= static_cast<int>(vertices_.size())) {
        throw Error(ErrorKind::InvalidInput,
                    "boundary entry references unknown vertex " + std::to_string(b.vertex));
      }
      is_boundary_[static_cast<std::size_t>(b.vertex)] = true;
    }
  }

  std::size_t dim() const { return dim_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<BoundaryCondition>& boundary() const { return boundary_; }
  const CostSpec& cost() const { return cost_; }

  const Vertex& vertex(int id) const { return vertices_[static_cast<std::size_t>(id)]; }
  const Arc& arc(int id) const { return arcs_[static_cast<std::size_t>(id)]; }
  const ArcParametrization& param(int arc) const { return params_[static_cast<std::size_t>(arc)]; }
  double length(int arc) const { return param(arc).length(); }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t arc_count() const { return arcs_.size(); }

  const std::vector<Incidence>& incident(int vertex) const {
    return incident_[static_cast<std::size_t>(vertex)];
  }
  std::size_t degree(int vertex) const { return incident(vertex).size(); }

  bool is_boundary(int vertex) const { return is_boundary_[static_cast<std::size_t>(vertex)]; }

  /// Dirichlet value at a boundary vertex; throws MissingDirichletValue when the entry has no g.
  double dirichlet(int vertex) const {
    for (const auto& b : boundary_) {
      if (b.vertex != vertex) continue;
      if (!b.g) {
        throw Error(ErrorKind::MissingDirichletValue,
                    "boundary vertex " + std::to_string(vertex) + " has no Dirichlet value g");
      }
      return *b.g;
    }
    throw Error(ErrorKind::MissingDirichletValue,
                "vertex " + std::to_string(vertex) + " is not a boundary vertex");
  }

  double total_length() const {
    double s = 0.0;
    for (const auto& p : params_) s += p.length();
    return s;
  }

  /// Arc-length parameter of `vertex` on `arc` (0 or l_j); the vertex must be an endpoint.
  double vertex_parameter(int arc, int vertex) const {
    const auto& a = this->arc(arc);
    if (a.start == vertex) return 0.0;
    if (a.end == vertex) return length(arc);
    throw Error(ErrorKind::InvalidInput, "vertex " + std::to_string(vertex) +
                                             " is not an endpoint of arc " + std::to_string(arc));
  }

 private:
  template <class T>
  static void sort_and_check_ids(std::vector<T>& items, const char* what) {
    std::sort(items.begin(), items.end(), [](const T& a, const T& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (items[i].id != static_cast<int>(i)) {
        throw Error(ErrorKind::InvalidInput,
                    std::string(what) + " ids must be unique and contiguous from 0");
      }
    }
  }

  std::vector<Vertex> vertices_;
  std::vector<Arc> arcs_;
  std::vector<BoundaryCondition> boundary_;
  CostSpec cost_;
  std::size_t dim_ = 0;
  std::vector<ArcParametrization> params_;
  std::vector<std::vector<Incidence>> incident_;
  std::vector<bool> is_boundary_;
};

/// Dense signed incidence matrix, rows = vertices, columns = arcs.
class IncidenceMatrix {
 public:
  IncidenceMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  int operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  int& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<int> a_;
};

inline constexpr double kEndpointTolerance = 1e-8;

/// a_ij = 1 iff pi_j(0) = v_i, -1 iff pi_j(l_j) = v_i. Throws InconsistentOrientation when an
/// arc's geometry endpoints disagree with its declared start/end vertices.
inline IncidenceMatrix build_incidence(const Network& net) {
  IncidenceMatrix a(net.vertex_count(), net.arc_count());
  for (const auto& arc : net.arcs()) {
    const auto& p = net.param(arc.id);
    const double ds = distance(p.eval(0.0), net.vertex(arc.start).position);
    const double de = distance(p.eval(p.length()), net.vertex(arc.end).position);
    if (ds > kEndpointTolerance || de > kEndpointTolerance || arc.start == arc.end) {
      throw Error(ErrorKind::InconsistentOrientation,
                  "arc " + std::to_string(arc.id) + " geometry endpoints do not match vertices " +
                      std::to_string(arc.start) + " -> " + std::to_string(arc.end));
    }
    const auto j = static_cast<std::size_t>(arc.id);
    a(static_cast<std::size_t>(arc.start), j) = 1;
    a(static_cast<std::size_t>(arc.end), j) = -1;
  }
  return a;
}

struct ValidationCheck {
  std::string name;
  bool passed = true;
  std::vector<int> offending;  // vertex or arc ids, depending on the check
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }

  const ValidationCheck* find(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }

  std::string summary() const {
    std::ostringstream os;
    for (const auto& c : checks) {
      os << (c.passed ? "[pass] " : "[FAIL] ") << c.name;
      if (!c.passed) {
        os << " ids:";
        for (int id : c.offending) os << ' ' << id;
        if (!c.detail.empty()) os << " (" << c.detail << ')';
      }
      os << '\n';
    }
    return os.str();
  }
};

namespace detail {

inline constexpr int kSamplesPerArc = 64;

inline std::vector<Point> sample_arc(const ArcParametrization& p) {
  std::vector<Point> pts;
  pts.reserve(kSamplesPerArc);
  for (int k = 0; k < kSamplesPerArc; ++k) {
    pts.push_back(p.eval(p.length() * k / (kSamplesPerArc - 1)));
  }
  return pts;
}

inline double point_segment_distance(const Point& x, const Point& a, const Point& b) {
  double ab2 = 0.0;
  double t = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ab2 += (b[i] - a[i]) * (b[i] - a[i]);
    t += (x[i] - a[i]) * (b[i] - a[i]);
  }
  t = ab2 > 0.0 ? std::clamp(t / ab2, 0.0, 1.0) : 0.0;
  return distance(x, lerp(a, b, t));
}

/// Closest distance between segments [p0,p1] and [q0,q1] in any dimension.
inline double segment_segment_distance(const Point& p0, const Point& p1, const Point& q0,
                                       const Point& q1) {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0, e = 0.0;
  for (std::size_t i = 0; i < p0.size(); ++i) {
    const double u = p1[i] - p0[i], v = q1[i] - q0[i], w = p0[i] - q0[i];
    a += u * u;
    b += u * v;
    c += v * v;
    d += u * w;
    e += v * w;
  }
  if (a <= 0.0 || c <= 0.0) {
    return a <= 0.0 ? point_segment_distance(p0, q0, q1) : point_segment_distance(q0, p0, p1);
  }
  const double denom = a * c - b * b;
  double s = denom > 1e-15 * a * c ? std::clamp((b * e - c * d) / denom, 0.0, 1.0) : 0.0;
  double t = (b * s + e) / c;
  if (t < 0.0) {
    t = 0.0;
    s = std::clamp(-d / a, 0.0, 1.0);
  } else if (t > 1.0) {
    t = 1.0;
    s = std::clamp((b - d) / a, 0.0, 1.0);
  }
  return distance(lerp(p0, p1, s), lerp(q0, q1, t));
}

inline ValidationCheck make_check(std::string name, std::vector<int> bad, std::string detail = {}) {
  std::sort(bad.begin(), bad.end());
  bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
  ValidationCheck c;
  c.name = std::move(name);
  c.passed = bad.empty();
  c.offending = std::move(bad);
  if (!c.passed) c.detail = std::move(detail);
  return c;
}

}  // namespace detail

/// Checks the structural network hypotheses and the cost assumptions. Never throws for a
/// constructed Network; the caller decides whether a failed check is fatal.
inline ValidationReport validate_network(const Network& net) {
  ValidationReport report;
  const auto nv = static_cast<int>(net.vertex_count());
  const auto na = static_cast<int>(net.arc_count());

  std::vector<int> bad;
  for (int i = 0; i < nv; ++i) {
    for (int k = i + 1; k < nv; ++k) {
      if (distance(net.vertex(i).position, net.vertex(k).position) <= kEndpointTolerance) {
        bad.push_back(i);
        bad.push_back(k);
      }
    }
  }
  report.checks.push_back(detail::make_check("distinct_vertex_positions", bad, "coincident vertices"));

  // (i) arc endpoints are the declared vertices
  bad.clear();
  for (const auto& a : net.arcs()) {
    const auto& p = net.param(a.id);
    if (distance(p.eval(0.0), net.vertex(a.start).position) > kEndpointTolerance ||
        distance(p.eval(p.length()), net.vertex(a.end).position) > kEndpointTolerance) {
      bad.push_back(a.id);
    }
  }
  report.checks.push_back(
      detail::make_check("arc_endpoints_are_vertices", bad, "geometry endpoints != declared vertices"));

  // (ii) exactly two vertices on each closed arc, and the curve does not cross itself
  std::vector<std::vector<Point>> samples(static_cast<std::size_t>(na));
  for (int j = 0; j < na; ++j) samples[static_cast<std::size_t>(j)] = detail::sample_arc(net.param(j));
  bad.clear();
  std::vector<int> self_crossing;
  for (const auto& a : net.arcs()) {
    const auto& pts = samples[static_cast<std::size_t>(a.id)];
    const double threshold = 1e-6 * net.length(a.id);
    if (a.start == a.end) bad.push_back(a.id);
    for (int i = 0; i < nv; ++i) {
      if (i == a.start || i == a.end) continue;
      for (std::size_t s = 1; s < pts.size(); ++s) {
        if (detail::point_segment_distance(net.vertex(i).position, pts[s - 1], pts[s]) <= threshold) {
          bad.push_back(a.id);
          break;
        }
      }
    }
    // chords of the sampled curve that are not neighbours must stay apart
    bool crossing = false;
    for (std::size_t s = 1; s < pts.size() && !crossing; ++s) {
      for (std::size_t r = s + 2; r < pts.size() && !crossing; ++r) {
        crossing = detail::segment_segment_distance(pts[s - 1], pts[s], pts[r - 1], pts[r]) < threshold;
      }
    }
    if (crossing) self_crossing.push_back(a.id);
  }
  report.checks.push_back(
      detail::make_check("arc_has_two_distinct_vertices", bad, "loop arc or vertex inside arc"));
  report.checks.push_back(
      detail::make_check("arc_non_self_intersecting", self_crossing, "sampled self-intersection"));

  // (iii) two distinct arcs share at most one vertex
  bad.clear();
  for (int j = 0; j < na; ++j) {
    for (int k = j + 1; k < na; ++k) {
      const auto& a = net.arc(j);
      const auto& b = net.arc(k);
      int shared = 0;
      for (int v : {a.start, a.end}) {
        if (v == b.start || v == b.end) ++shared;
      }
      if (a.start == a.end) shared = std::min(shared, 1);
      if (shared > 1) {
        bad.push_back(j);
        bad.push_back(k);
      }
    }
  }
  report.checks.push_back(
      detail::make_check("arcs_share_at_most_one_vertex", bad, "parallel arcs"));

  // (iv) connected
  {
    std::vector<bool> seen(static_cast<std::size_t>(nv), false);
    std::queue<int> queue;
    queue.push(0);
    seen[0] = true;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop();
      for (const auto& inc : net.incident(v)) {
        const auto& a = net.arc(inc.arc);
        const int w = a.start == v ? a.end : a.start;
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = true;
          queue.push(w);
        }
      }
    }
    bad.clear();
    for (int i = 0; i < nv; ++i) {
      if (!seen[static_cast<std::size_t>(i)]) bad.push_back(i);
    }
    report.checks.push_back(
        detail::make_check("connected", bad, "vertices unreachable from vertex 0"));
  }

  bad.clear();
  if (net.boundary().empty()) bad.push_back(-1);
  report.checks.push_back(detail::make_check("boundary_nonempty", bad, "no boundary vertices"));

  bad.clear();
  for (const auto& b : net.boundary()) {
    if (!b.g) bad.push_back(b.vertex);
  }
  {
    std::string names;
    for (int v : bad) names += (names.empty() ? "vertex " : ", vertex ") + std::to_string(v);
    report.checks.push_back(detail::make_check("boundary_has_dirichlet_value", bad,
                                               "missing g at " + names));
  }

  bad.clear();
  for (int i = 0; i < nv; ++i) {
    if (net.degree(i) == 1 && !net.is_boundary(i)) bad.push_back(i);
  }
  report.checks.push_back(
      detail::make_check("degree_one_vertices_in_boundary", bad, "leaf vertex not in boundary set"));

  // cost positivity f >= eta > 0 on the arc samples
  bad.clear();
  std::string cost_detail;
  if (!(net.cost().eta > 0.0)) {
    bad.push_back(-1);
    cost_detail = "eta must be positive";
  }
  for (const auto& a : net.arcs()) {
    for (const auto& x : samples[static_cast<std::size_t>(a.id)]) {
      if (!(net.cost()(x) >= net.cost().eta)) {
        bad.push_back(a.id);
        cost_detail = "f below eta on arc";
        break;
      }
    }
  }
  report.checks.push_back(detail::make_check("cost_positive", bad, cost_detail));

  // cost continuity: f read through each incident arc's parametrization agrees at the vertex
  bad.clear();
  for (int i = 0; i < nv; ++i) {
    const auto& inc = net.incident(i);
    if (inc.size() < 2) continue;
    const auto& p0 = net.param(inc.front().arc);
    const double f0 = net.cost()(p0.eval(net.vertex_parameter(inc.front().arc, i)));
    for (std::size_t k = 1; k < inc.size(); ++k) {
      const auto& pk = net.param(inc[k].arc);
      const double fk = net.cost()(pk.eval(net.vertex_parameter(inc[k].arc, i)));
      if (std::abs(fk - f0) > 1e-8) {
        bad.push_back(i);
        break;
      }
    }
  }
  report.checks.push_back(
      detail::make_check("cost_continuous_at_vertices", bad, "incident arcs disagree on f"));

  return report;
}

}  // namespace hjnet
