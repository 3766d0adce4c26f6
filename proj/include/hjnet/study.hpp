#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hjnet/grid.hpp"
#include "hjnet/io.hpp"
#include "hjnet/oracle.hpp"
#include "hjnet/solver.hpp"

namespace hjnet {

/// Reference value at a node given its arc, parameter and embedded position.
using ReferenceFn = std::function<double(int arc, double t, const Point& x)>;

struct ErrorNorms {
  double linf = 0.0;
  double l2 = 0.0;
};

/// Per arc: max node error and sqrt of the trapezoid rule of the squared error. Returns the
/// maximum over arcs of each.
inline ErrorNorms error_norms(const Grid& grid, std::span<const double> u, const ReferenceFn& ref) {
  ErrorNorms out;
  for (std::size_t j = 0; j < grid.arc_count(); ++j) {
    const int arc = static_cast<int>(j);
    const auto p = grid.params(arc);
    double linf = 0.0, sq = 0.0, prev = 0.0;
    for (std::size_t m = 0; m < p.size(); ++m) {
      const std::size_t node = grid.global(arc, m);
      const double e = std::abs(u[node] - ref(arc, p[m], grid.coords(node)));
      linf = std::max(linf, e);
      if (m > 0) sq += 0.5 * (p[m] - p[m - 1]) * (prev * prev + e * e);
      prev = e;
    }
    out.linf = std::max(out.linf, linf);
    out.l2 = std::max(out.l2, std::sqrt(sq));
  }
  return out;
}

/// log2(e_coarse / e_fine) for a halved step.
inline double observed_order(double e_coarse, double e_fine) {
  if (!(e_coarse > 1e-14) || !(e_fine > 1e-14)) {
    throw Error(ErrorKind::ZeroError, "order undefined for errors at or below 1e-14");
  }
  return std::log2(e_coarse / e_fine);
}

enum class ReferenceKind { Exact, FineGrid };

struct StudyReference {
  ReferenceKind kind = ReferenceKind::Exact;
  ReferenceFn exact;
  double fine_dx = 0.005;

  static StudyReference analytic(ReferenceFn fn) { return {ReferenceKind::Exact, std::move(fn), 0.0}; }
  static StudyReference fine(double dx) { return {ReferenceKind::FineGrid, {}, dx}; }
};

struct StudyRow {
  double dx = 0.0;
  ErrorNorms errors;
  std::optional<double> ord_linf;
  std::optional<double> ord_l2;
  long sweeps = 0;
};

struct StudyReport {
  std::vector<StudyRow> rows;
  ReferenceKind reference = ReferenceKind::Exact;

  void write_csv(std::ostream& os) const {
    os << "dx,linf,ord_linf,l2,ord_l2\n";
    for (const auto& r : rows) {
      os << io::fmt(r.dx) << ',' << io::fmt(r.errors.linf) << ','
         << (r.ord_linf ? io::fmt(*r.ord_linf) : "") << ',' << io::fmt(r.errors.l2) << ','
         << (r.ord_l2 ? io::fmt(*r.ord_l2) : "") << '\n';
    }
  }

  void write_table(std::ostream& os) const {
    auto cell = [](const std::optional<double>& x, const char* f) {
      if (!x) return std::string("-");
      char buf[32];
      std::snprintf(buf, sizeof buf, f, *x);
      return std::string(buf);
    };
    char line[160];
    std::snprintf(line, sizeof line, "%-8s | %-12s | %-9s | %-12s | %-9s\n", "dx=h", "Linf",
                  "Ord(Linf)", "L2", "Ord(L2)");
    os << line;
    for (const auto& r : rows) {
      std::snprintf(line, sizeof line, "%-8g | %-12.4e | %-9s | %-12.4e | %-9s\n", r.dx,
                    r.errors.linf, cell(r.ord_linf, "%.4f").c_str(), r.errors.l2,
                    cell(r.ord_l2, "%.4f").c_str());
      os << line;
    }
  }
};

/// Solves at every step with dx = h and tabulates errors against the reference. Steps must
/// halve from one row to the next. Solves run concurrently.
inline StudyReport run_study(const Network& net, const StudyReference& ref,
                             const std::vector<double>& steps, SolverConfig base = {}) {
  if (steps.empty()) throw Error(ErrorKind::InvalidSteps, "no steps given");
  for (std::size_t i = 1; i < steps.size(); ++i) {
    if (std::abs(steps[i] - 0.5 * steps[i - 1]) > 1e-12 * steps[i - 1]) {
      throw Error(ErrorKind::InvalidSteps, "each step must halve the previous one");
    }
  }
  ReferenceFn evaluator = ref.exact;
  std::optional<oracle::FineField> fine;
  if (ref.kind == ReferenceKind::FineGrid) {
    SolverConfig cfg = base;
    cfg.h = cfg.dx = ref.fine_dx;
    cfg.record_controls = false;
    Grid grid(net, ref.fine_dx);
    auto solved = solve(net, grid, cfg);
    fine.emplace(oracle::FineField{std::move(grid), std::move(solved.values)});
    evaluator = [&fine](int arc, double t, const Point&) { return (*fine)(arc, t); };
  }
  if (!evaluator) throw Error(ErrorKind::InvalidInput, "exact reference without an evaluator");

  std::vector<std::future<StudyRow>> jobs;
  for (double step : steps) {
    jobs.push_back(std::async(std::launch::async, [&, step] {
      SolverConfig cfg = base;
      cfg.h = cfg.dx = step;
      cfg.record_controls = false;
      Grid grid(net, step);
      auto solved = solve(net, grid, cfg);
      return StudyRow{step, error_norms(grid, solved.values, evaluator), {}, {}, solved.sweeps_used};
    }));
  }
  StudyReport report;
  report.reference = ref.kind;
  for (auto& j : jobs) report.rows.push_back(j.get());
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    auto order = [](double a, double b) -> std::optional<double> {
      if (!(a > 1e-14) || !(b > 1e-14)) return std::nullopt;
      return observed_order(a, b);
    };
    report.rows[i].ord_linf = order(report.rows[i - 1].errors.linf, report.rows[i].errors.linf);
    report.rows[i].ord_l2 = order(report.rows[i - 1].errors.l2, report.rows[i].errors.l2);
  }
  return report;
}

}  // namespace hjnet
