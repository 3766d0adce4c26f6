#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "support.hpp"

using namespace hjnet;

namespace {

struct Solved {
  Grid grid;
  SolveResult result;
};

Solved solve_with_controls(const Network& net, double h) {
  SolverConfig cfg;
  cfg.h = cfg.dx = h;
  cfg.record_controls = true;
  Grid grid(net, h);
  auto r = solve(net, grid, cfg);
  return {std::move(grid), std::move(r)};
}

}  // namespace

TEST(ExtractPath, BoundaryStartIsSinglePoint) {
  const auto net = hjtest::single_arc();
  const auto s = solve_with_controls(net, 0.25);
  const auto p = extract_path(net, s.grid, s.result, {0, 0.0}, 0.25);
  ASSERT_EQ(p.points.size(), 1u);
  EXPECT_EQ(p.total_cost, 0.0);
  EXPECT_EQ(p.terminal_vertex, 0);
}

TEST(ExtractPath, SingleArcMarchesToNearEnd) {
  const auto net = hjtest::single_arc();
  const auto s = solve_with_controls(net, 0.25);
  const auto p = extract_path(net, s.grid, s.result, {0, 0.25}, 0.25);
  ASSERT_EQ(p.points.size(), 2u);
  EXPECT_EQ(p.points.back().t, 0.0);
  EXPECT_EQ(p.terminal_vertex, 0);
  EXPECT_NEAR(p.total_cost, 0.25, 1e-14);
}

TEST(ExtractPath, YLegsRouteThroughCentre) {
  const auto net = hjtest::load("y_network.json");
  const auto s = solve_with_controls(net, 0.05);
  for (int leg : {0, 1}) {
    const auto p = extract_path(net, s.grid, s.result, {leg, 0.95}, 0.05);
    EXPECT_EQ(p.terminal_vertex, 3);
    bool via_centre = false;
    for (const auto& q : p.points) via_centre |= s.grid.vertex_of(q.node) == 0;
    EXPECT_TRUE(via_centre);
    // Dijkstra route length: back along the leg, then the third leg
    EXPECT_NEAR(p.total_cost, 1.95, 1e-9);
  }
}

TEST(ExtractPath, InvariantsOnBundledNetworks) {
  for (const auto& name : hjtest::bundled()) {
    const auto net = hjtest::load(name);
    for (double h : {0.1, 0.05}) {
      const auto s = solve_with_controls(net, h);
      double max_f = 0.0;
      for (std::size_t i = 0; i < s.grid.size(); ++i) max_f = std::max(max_f, s.grid.cost(i));
      for (std::size_t j = 0; j < net.arc_count(); ++j) {
        for (double frac : {0.0, 0.3, 0.5, 0.85}) {
          const NetworkPoint start{static_cast<int>(j), frac * net.length(static_cast<int>(j))};
          const auto p = extract_path(net, s.grid, s.result, start, h);
          const auto start_node = p.points.front().node;
          EXPECT_TRUE(net.is_boundary(p.terminal_vertex));
          const double err = std::abs(p.total_cost + p.terminal_value - s.result.values[start_node]);
          EXPECT_LE(err, 3.0 * max_f * 2.0 * h) << name << " arc " << j;
          std::set<std::size_t> seen;
          for (std::size_t k = 1; k < p.points.size(); ++k) {
            // consecutive points share an arc; snapping adds at most half a cell
            const auto& b = p.points[k];
            const auto& a = p.points[k - 1];
            const double from = s.grid.vertex_of(a.node) >= 0
                                    ? net.vertex_parameter(b.arc, s.grid.vertex_of(a.node))
                                    : a.t;
            EXPECT_EQ(s.grid.vertex_of(a.node) >= 0 || a.arc == b.arc, true);
            EXPECT_LE(std::abs(b.t - from), h + 0.5 * s.grid.dx() + 1e-12);
            EXPECT_TRUE(seen.insert(b.node).second) << name << ": node revisited";
          }
        }
      }
    }
  }
}

TEST(ExtractPath, StalledAndMaxSteps) {
  const auto net = hjtest::single_arc();
  auto s = solve_with_controls(net, 0.25);
  auto stalled = s.result;
  stalled.controls[2].q = 0.0;
  try {
    extract_path(net, s.grid, stalled, {0, 0.5}, 0.25);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PathStalled);
  }
  try {
    extract_path(net, s.grid, s.result, {0, 0.5}, 0.25, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MaxStepsExceeded);
  }
  SolveResult bare = s.result;
  bare.controls.clear();
  EXPECT_THROW(extract_path(net, s.grid, bare, {0, 0.5}, 0.25), Error);
}

TEST(ExtractPath, CsvLayout) {
  const auto net = hjtest::single_arc();
  const auto s = solve_with_controls(net, 0.25);
  std::ostringstream os;
  write_path_csv(os, net, s.grid, extract_path(net, s.grid, s.result, {0, 0.75}, 0.25));
  EXPECT_EQ(os.str(), "step,arc_id,t,x1,x2,cumulative_cost\n0,0,0.75,0.75,0,0\n1,0,1,1,0,0.25\n");
}
