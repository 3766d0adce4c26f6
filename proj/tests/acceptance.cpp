// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

using namespace hjnet;

namespace {

const std::vector<double> kSchedule{0.2, 0.1, 0.05, 0.025, 0.0125};

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail) {
  std::printf("[%s] %2d %s: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += pass ? 0 : 1;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::string describe(const StudyReport& r) {
  std::ostringstream os;
  os << "Linf";
  for (const auto& row : r.rows) os << ' ' << g(row.errors.linf);
  os << "; orders";
  for (std::size_t i = 1; i < r.rows.size(); ++i) os << ' ' << (r.rows[i].ord_linf ? g(*r.rows[i].ord_linf) : "undef");
  return os.str();
}

bool strictly_decreasing(const StudyReport& r) {
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    if (!(r.rows[i].errors.linf < r.rows[i - 1].errors.linf)) return false;
  }
  return true;
}

bool orders_within(const StudyReport& r, std::size_t from, double lo, double hi) {
  for (std::size_t i = from; i < r.rows.size(); ++i) {
    if (!r.rows[i].ord_linf || *r.rows[i].ord_linf < lo || *r.rows[i].ord_linf > hi) return false;
  }
  return true;
}

StudyReference test1_reference() {
  return StudyReference::analytic([](int, double, const Point& x) { return oracle::test1_exact(x); });
}

StudyReference distance_reference(const Network& net) {
  return StudyReference::analytic([&net](int arc, double t, const Point&) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : net.boundary()) {
      best = std::min(best, *b.g + path_distance(net, vertex_point(net, b.vertex), {arc, t}));
    }
    return best;
  });
}

double max_cost(const Grid& grid) {
  double m = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) m = std::max(m, grid.cost(i));
  return m;
}

SolverConfig config(double h, IterationVariable mode = IterationVariable::Direct) {
  SolverConfig cfg;
  cfg.h = cfg.dx = h;
  cfg.iteration_variable = mode;
  return cfg;
}

void criterion_1() {
  const auto net = hjtest::load("test1.json");
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_study(net, test1_reference(), kSchedule);
  const double secs = seconds_since(t0);
  const bool pass = orders_within(r, 2, 0.4, 1.1) && strictly_decreasing(r) && secs < 30.0;
  report(1, "curved-arc orders in [0.4,1.1], decreasing errors", pass, describe(r) + "; " + g(secs) + " s");
}

void criterion_2() {
  const auto net = hjtest::load("test2.json");
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_study(net, distance_reference(net), kSchedule);
  const double secs = seconds_since(t0);
  const bool pass = orders_within(r, 2, 0.8, 1.5) && strictly_decreasing(r) && secs < 30.0;
  report(2, "straight-arc orders in [0.8,1.5]", pass, describe(r) + "; " + g(secs) + " s");
}

void criterion_3() {
  const auto net = hjtest::load("test1.json");
  const auto exact = run_study(net, test1_reference(), kSchedule);
  const auto fine = run_study(net, StudyReference::fine(0.005), kSchedule);
  bool pass = true;
  std::ostringstream os;
  for (std::size_t i = 1; i < exact.rows.size(); ++i) {
    const auto& a = exact.rows[i].ord_linf;
    const auto& b = fine.rows[i].ord_linf;
    if (!a || !b || std::abs(*a - *b) > 0.3) pass = false;
  }
  os << "fine-reference " << describe(fine);
  report(3, "fine-grid protocol reproduces exact orders within 0.3", pass, os.str());
}

void criterion_4() {
  const double a = observed_order(0.1468, 0.0901);
  const double b = observed_order(0.0716, 0.0284);
  const bool pass = std::abs(a - 0.7043) <= 5e-4 && std::abs(b - 1.3341) <= 5e-4;
  report(4, "printed-value order spot checks", pass, g(a) + ", " + g(b));
}

void criterion_5() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::ostringstream os;
  for (const auto& name : hjtest::bundled()) {
    const auto net = hjtest::load(name);
    for (double h : {0.1, 0.05}) {
      Grid grid(net, h);
      const auto r = solve(net, grid, config(h));
      const auto rep = oracle::representation_solution(net, h / 8.0);
      double diff = 0.0;
      for (std::size_t n = 0; n < grid.size(); ++n) {
        diff = std::max(diff, std::abs(r.values[n] - rep(grid.arc_of(n), grid.t(n))));
      }
      const double bound = 5.0 * 2.0 * h * max_cost(grid);
      if (diff > bound) pass = false;
      os << name << "@" << h << " C=" << g(diff / (2.0 * h * max_cost(grid))) << ' ';
    }
  }
  const double secs = seconds_since(t0);
  pass = pass && secs < 60.0;
  report(5, "solver matches representation oracle within 5(h+dx)max f", pass, os.str() + g(secs) + " s");
}

void criterion_6() {
  bool pass = true;
  double worst = -std::numeric_limits<double>::infinity();
  std::string worst_at;
  for (const auto& name : hjtest::bundled()) {
    const auto net = hjtest::load(name);
    for (double h : {0.1, 0.05, 0.025}) {
      Grid grid(net, h);
      const auto r = solve(net, grid, config(h, IterationVariable::Kruzkov));
      const auto& res = r.residual_history;
      std::size_t start = static_cast<std::size_t>(std::max<long>(r.information_sweep - 1, 0));
      for (std::size_t k = 1; k < res.size(); ++k) {
        if (res[k] > res[k - 1]) start = std::max(start, k);
      }
      const double bound = std::exp(-h * net.cost().eta) + 0.05;
      for (std::size_t k = start + 1; k < res.size(); ++k) {
        if (res[k - 1] < 1e-13) break;  // round-off floor
        const double ratio = res[k] / res[k - 1];
        if (ratio - bound > worst || worst_at.empty()) {
          worst = ratio - bound;
          worst_at = name + "@" + g(h);
        }
        if (ratio > bound) pass = false;
      }
    }
  }
  report(6, "Kruzkov residual ratio <= exp(-h eta)+0.05 on the monotone tail", pass,
         "max(ratio - bound) = " + g(worst) + (worst_at.empty() ? "" : " at " + worst_at));
}

void criterion_7() {
  double worst = 0.0;
  for (const auto& name : hjtest::bundled()) {
    const auto net = hjtest::load(name);
    Grid grid(net, 0.05);
    auto cfg = config(0.05);
    const auto a = solve(net, grid, cfg);
    NodeField high = default_initial_field(net, grid);
    for (auto& x : high) x = 3.0 * x + 10.0;
    cfg.initial = high;
    const auto b = solve(net, grid, cfg);
    for (std::size_t n = 0; n < grid.size(); ++n) worst = std::max(worst, std::abs(a.values[n] - b.values[n]));
  }
  report(7, "distinct initializations agree within 10 tol", worst <= 10.0 * 1e-9, "max diff " + g(worst));
}

void criterion_8() {
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  long violations = 0, pairs = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto net = hjtest::random_network(rng, 4 + trial % 4);
    Grid grid(net, 0.1 + 0.1 * u(rng));
    const auto mode = trial % 2 ? IterationVariable::Kruzkov : IterationVariable::Direct;
    SolverConfig cfg = config(0.1 + 0.3 * u(rng), mode);
    NodeField w1(grid.size()), w2(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double scale = mode == IterationVariable::Direct ? 4.0 : 0.95;
      w1[i] = scale * u(rng);
      w2[i] = std::min(mode == IterationVariable::Direct ? 1e9 : 0.999, w1[i] + (u(rng) < 0.3 ? 0.0 : 0.5 * u(rng)));
    }
    const auto s1 = apply_scheme(net, grid, w1, cfg), s2 = apply_scheme(net, grid, w2, cfg);
    for (std::size_t i = 0; i < grid.size(); ++i) violations += s1[i] > s2[i];
    ++pairs;
  }
  report(8, "scheme monotonicity on random pairs", violations == 0,
         std::to_string(pairs) + " pairs, " + std::to_string(violations) + " violations");
}

void criterion_9() {
  long mismatches = 0, checked = 0;
  for (const auto& name : hjtest::bundled()) {
    const auto net = hjtest::load(name);
    for (auto mode : {IterationVariable::Direct, IterationVariable::Kruzkov}) {
      Grid grid(net, 0.05);
      const auto r = solve(net, grid, config(0.05, mode));
      for (const auto& b : net.boundary()) {
        for (auto c : grid.copies(b.vertex)) {
          mismatches += r.values[c] != *b.g;
          ++checked;
        }
      }
    }
  }
  report(9, "u = g exactly at boundary nodes", mismatches == 0,
         std::to_string(checked) + " nodes, " + std::to_string(mismatches) + " mismatches");
}

void criterion_10() {
  bool pass = true;
  double worst_c = 0.0;
  long paths = 0;
  for (const auto& name : hjtest::bundled()) {
    const auto net = hjtest::load(name);
    for (double h : {0.1, 0.05}) {
      Grid grid(net, h);
      auto cfg = config(h);
      cfg.record_controls = true;
      const auto r = solve(net, grid, cfg);
      const double mf = max_cost(grid);
      for (std::size_t n = 0; n < grid.size(); ++n) {
        try {
          const auto p = extract_path(net, grid, r, {grid.arc_of(n), grid.t(n)}, h);
          const double err = std::abs(p.total_cost + p.terminal_value - r.values[n]);
          worst_c = std::max(worst_c, err / (2.0 * h));
          if (err > 3.0 * mf * 2.0 * h) pass = false;
        } catch (const Error& e) {
          std::printf("       %s node %zu: %s\n", name.c_str(), n, e.what());
          pass = false;
        }
        ++paths;
      }
    }
  }
  report(10, "path cost within 3 max f (h+dx) of the node value", pass,
         std::to_string(paths) + " start nodes, worst C = " + g(worst_c));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{criterion_1, criterion_2, criterion_3, criterion_4,
                                                    criterion_5, criterion_6, criterion_7, criterion_8,
                                                    criterion_9, criterion_10};
  for (const auto& c : criteria) {
    try {
      c();
    } catch (const std::exception& e) {
      std::printf("[FAIL] criterion threw: %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
