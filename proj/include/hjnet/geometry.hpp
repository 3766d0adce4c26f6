#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hjnet/errors.hpp"
#include "hjnet/quadrature.hpp"

namespace hjnet {

/// A point in R^N.
using Point = std::vector<double>;

inline double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline Point lerp(std::span<const double> a, std::span<const double> b, double s) {
  Point p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] + s * (b[i] - a[i]);
  return p;
}

struct Segment {
  Point from;
  Point to;
};

struct Polyline {
  std::vector<Point> points;
};

/// c(s) = base + s*axis + amplitude*(sin(omega*s + phase) - sin(phase))*normal, s in [0, extent].
/// axis and normal must be orthonormal.
struct Sine {
  Point base;
  Point axis;
  Point normal;
  double amplitude = 0.0;
  double omega = 0.0;
  double phase = 0.0;
  double extent = 0.0;

  Point at(double s) const {
    const double lift = amplitude * (std::sin(omega * s + phase) - std::sin(phase));
    Point p(base.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = base[i] + s * axis[i] + lift * normal[i];
    return p;
  }

  /// |c'(s)|
  double speed(double s) const {
    const double d = amplitude * omega * std::cos(omega * s + phase);
    return std::sqrt(1.0 + d * d);
  }
};

using GeometrySpec = std::variant<Segment, Polyline, Sine>;

inline const char* kind_name(const GeometrySpec& g) {
  switch (g.index()) {
    case 0: return "segment";
    case 1: return "polyline";
    default: return "sine";
  }
}

inline Point start_point(const GeometrySpec& g) {
  if (auto* s = std::get_if<Segment>(&g)) return s->from;
  if (auto* p = std::get_if<Polyline>(&g)) return p->points.front();
  return std::get<Sine>(g).at(0.0);
}

inline Point end_point(const GeometrySpec& g) {
  if (auto* s = std::get_if<Segment>(&g)) return s->to;
  if (auto* p = std::get_if<Polyline>(&g)) return p->points.back();
  const auto& sn = std::get<Sine>(g);
  return sn.at(sn.extent);
}

inline std::size_t dimension(const GeometrySpec& g) { return start_point(g).size(); }

/// The same curve traversed from its end to its start.
inline GeometrySpec reversed(const GeometrySpec& g) {
  if (auto* s = std::get_if<Segment>(&g)) return Segment{s->to, s->from};
  if (auto* p = std::get_if<Polyline>(&g)) {
    return Polyline{std::vector<Point>(p->points.rbegin(), p->points.rend())};
  }
  const auto& sn = std::get<Sine>(g);
  Sine r = sn;
  r.base = sn.at(sn.extent);
  for (auto& a : r.axis) a = -a;
  // sin(w(X - s) + p) = sin(w s + pi - w X - p)
  r.phase = std::numbers::pi - sn.omega * sn.extent - sn.phase;
  return r;
}

namespace detail {

inline double sine_length(const Sine& s, double a, double b, double rel_tol) {
  auto speed = [&](double x) { return s.speed(x); };
  // speed >= 1, so (b - a) bounds the integral from below
  return quadrature::adaptive_simpson(speed, a, b, rel_tol * (b - a));
}

}  // namespace detail

/// Length of the curve: exact for segment and polyline, adaptive quadrature for sine.
inline double arc_length(const GeometrySpec& g) {
  double len = 0.0;
  if (auto* s = std::get_if<Segment>(&g)) {
    len = distance(s->from, s->to);
  } else if (auto* p = std::get_if<Polyline>(&g)) {
    if (p->points.size() < 2) throw Error(ErrorKind::DegenerateGeometry, "polyline needs two points");
    for (std::size_t i = 1; i < p->points.size(); ++i) len += distance(p->points[i - 1], p->points[i]);
  } else {
    const auto& sn = std::get<Sine>(g);
    if (!(sn.extent > 0.0)) throw Error(ErrorKind::DegenerateGeometry, "sine extent must be positive");
    len = detail::sine_length(sn, 0.0, sn.extent, 1e-10);
  }
  if (!(len >= 1e-12)) throw Error(ErrorKind::DegenerateGeometry, "arc length below 1e-12");
  return len;
}

/// Arc-length reparametrization of a GeometrySpec.
///
/// Holds a monotone table of (raw parameter, cumulative length) pairs. Segments and polylines are
/// inverted exactly; sine arcs use a 1024-interval table refined by safeguarded Newton steps.
class ArcParametrization {
 public:
  static constexpr std::size_t kTableIntervals = 1024;

  explicit ArcParametrization(GeometrySpec geom) : geom_(std::move(geom)) {
    if (auto* s = std::get_if<Segment>(&geom_)) {
      length_ = arc_length(geom_);
      raw_ = {0.0, 1.0};
      cum_ = {0.0, length_};
      (void)s;
    } else if (auto* p = std::get_if<Polyline>(&geom_)) {
      length_ = arc_length(geom_);
      raw_.resize(p->points.size());
      cum_.resize(p->points.size());
      for (std::size_t i = 0; i < p->points.size(); ++i) {
        raw_[i] = static_cast<double>(i);
        cum_[i] = i == 0 ? 0.0 : cum_[i - 1] + distance(p->points[i - 1], p->points[i]);
      }
      cum_.back() = length_;
    } else {
      const auto& sn = std::get<Sine>(geom_);
      length_ = arc_length(geom_);
      raw_.resize(kTableIntervals + 1);
      cum_.resize(kTableIntervals + 1);
      raw_[0] = 0.0;
      cum_[0] = 0.0;
      for (std::size_t k = 1; k <= kTableIntervals; ++k) {
        raw_[k] = sn.extent * static_cast<double>(k) / kTableIntervals;
        cum_[k] = cum_[k - 1] + detail::sine_length(sn, raw_[k - 1], raw_[k], 1e-12);
      }
      // keep the table consistent with the reported total
      const double scale = length_ / cum_.back();
      for (auto& c : cum_) c *= scale;
      cum_.back() = length_;
    }
    start_ = start_point(geom_);
    end_ = end_point(geom_);
  }

  double length() const { return length_; }
  const GeometrySpec& geometry() const { return geom_; }
  std::span<const double> raw_samples() const { return raw_; }
  std::span<const double> cumulative_lengths() const { return cum_; }

  /// pi(t) for arc-length t in [0, length].
  Point eval(double t) const {
    constexpr double slack = 1e-12;
    if (t < -slack || t > length_ + slack) {
      throw Error(ErrorKind::OutOfRange, "arc-length parameter " + std::to_string(t) +
                                             " outside [0, " + std::to_string(length_) + "]");
    }
    if (t <= 0.0) return start_;
    if (t >= length_) return end_;
    if (auto* s = std::get_if<Segment>(&geom_)) return lerp(s->from, s->to, t / length_);
    const std::size_t k = interval_of(t);
    if (auto* p = std::get_if<Polyline>(&geom_)) {
      const double w = (t - cum_[k]) / (cum_[k + 1] - cum_[k]);
      return lerp(p->points[k], p->points[k + 1], w);
    }
    const auto& sn = std::get<Sine>(geom_);
    return sn.at(raw_parameter(sn, k, t));
  }

 private:
  std::size_t interval_of(double t) const {
    auto it = std::upper_bound(cum_.begin(), cum_.end(), t);
    std::size_t k = static_cast<std::size_t>(it - cum_.begin());
    k = k == 0 ? 0 : k - 1;
    return std::min(k, cum_.size() - 2);
  }

  // Solves cum_[k] + integral_{raw_[k]}^{s} speed = t on the bracket [raw_[k], raw_[k+1]].
  double raw_parameter(const Sine& sn, std::size_t k, double t) const {
    double lo = raw_[k];
    double hi = raw_[k + 1];
    double s = lo + (hi - lo) * (t - cum_[k]) / (cum_[k + 1] - cum_[k]);
    auto speed = [&](double x) { return sn.speed(x); };
    for (int it = 0; it < 60; ++it) {
      const double residual = cum_[k] + quadrature::gauss_legendre8(speed, raw_[k], s) - t;
      if (std::abs(residual) <= 1e-13) break;
      if (residual > 0.0) hi = s; else lo = s;
      double next = s - residual / sn.speed(s);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (hi - lo <= 1e-15 * (1.0 + std::abs(hi))) break;
      s = next;
    }
    return s;
  }

  GeometrySpec geom_;
  double length_ = 0.0;
  std::vector<double> raw_;
  std::vector<double> cum_;
  Point start_;
  Point end_;
};

}  // namespace hjnet
