#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hjnet/hjnet.hpp"

namespace {

enum Exit { kOk = 0, kInvalid = 1, kValidation = 2, kNotConverged = 3, kStalled = 4 };

struct SolveFlags {
  double h = 0.1;
  double dx = 0.0;
  double tol = 1e-9;
  long max_sweeps = 1'000'000;
  bool kruzkov = false;
  bool record_controls = false;
};

void add_solve_flags(CLI::App* cmd, SolveFlags& f) {
  cmd->add_option("--h", f.h, "time step h")->check(CLI::PositiveNumber);
  cmd->add_option("--dx", f.dx, "space step (defaults to h)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--tol", f.tol, "stopping tolerance on the sweep residual");
  cmd->add_option("--max-sweeps", f.max_sweeps, "sweep limit")->check(CLI::PositiveNumber);
  cmd->add_flag("--kruzkov", f.kruzkov, "iterate on w = 1 - exp(-u)");
  cmd->add_flag("--record-controls", f.record_controls, "also write argmin controls");
}

hjnet::SolverConfig to_config(const SolveFlags& f) {
  hjnet::SolverConfig cfg;
  cfg.h = f.h;
  cfg.dx = f.dx > 0.0 ? f.dx : f.h;
  cfg.tolerance = f.tol;
  cfg.max_sweeps = f.max_sweeps;
  cfg.iteration_variable = f.kruzkov ? hjnet::IterationVariable::Kruzkov : hjnet::IterationVariable::Direct;
  cfg.record_controls = f.record_controls;
  return cfg;
}

// Loads and validates; prints the failing checks and returns false on validation failure.
bool load_valid(const std::string& path, std::optional<hjnet::Network>& net) {
  net.emplace(hjnet::io::load_network(path));
  const auto report = hjnet::validate_network(*net);
  if (!report.ok()) {
    std::cerr << "validation failed for " << path << ":\n";
    for (const auto& c : report.checks) {
      if (c.passed) continue;
      std::cerr << "  " << c.name;
      if (!c.detail.empty()) std::cerr << ": " << c.detail;
      std::cerr << '\n';
    }
    return false;
  }
  return true;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw hjnet::Error(hjnet::ErrorKind::InvalidInput, "cannot write " + path);
  return file;
}

void write_solution(std::ostream& os, const hjnet::Network& net, const hjnet::Grid& grid,
                    const hjnet::SolveResult& r) {
  using hjnet::io::fmt;
  os << "arc_id,t";
  for (std::size_t i = 1; i <= net.dim(); ++i) os << ",x" << i;
  os << ",u";
  const bool controls = !r.controls.empty();
  if (controls) os << ",control_arc,control_q";
  os << '\n';
  for (std::size_t n = 0; n < grid.size(); ++n) {
    os << grid.arc_of(n) << ',' << fmt(grid.t(n));
    for (double x : grid.coords(n)) os << ',' << fmt(x);
    os << ',' << fmt(r.values[n]);
    if (controls) os << ',' << r.controls[n].arc << ',' << fmt(r.controls[n].q);
    os << '\n';
  }
}

hjnet::SolveResult run_solve(const hjnet::Network& net, const hjnet::Grid& grid,
                             const hjnet::SolverConfig& cfg) {
  for (const auto& w : cfg.warnings(grid)) std::cerr << "warning: " << w << '\n';
  return hjnet::solve(net, grid, cfg);
}

std::vector<double> parse_steps(const std::string& text) {
  std::vector<double> steps;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      steps.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw hjnet::Error(hjnet::ErrorKind::InvalidInput, "bad step '" + item + "'");
    }
  }
  return steps;
}

hjnet::StudyReference parse_reference(const std::string& spec, const hjnet::Network& net) {
  if (spec == "exact:test1") {
    return hjnet::StudyReference::analytic(
        [](int, double, const hjnet::Point& x) { return hjnet::oracle::test1_exact(x); });
  }
  if (spec == "exact:distance") {
    if (!net.cost().is_constant()) {
      throw hjnet::Error(hjnet::ErrorKind::InvalidInput, "exact:distance needs a constant cost");
    }
    const double f = net.cost()(net.vertex(0).position);
    return hjnet::StudyReference::analytic([&net, f](int arc, double t, const hjnet::Point&) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& b : net.boundary()) {
        const auto y = hjnet::vertex_point(net, b.vertex);
        best = std::min(best, net.dirichlet(b.vertex) + f * hjnet::path_distance(net, y, {arc, t}));
      }
      return best;
    });
  }
  if (spec.rfind("fine:", 0) == 0) {
    double dx = 0.0;
    try {
      dx = std::stod(spec.substr(5));
    } catch (const std::exception&) {
    }
    if (!(dx > 0.0)) throw hjnet::Error(hjnet::ErrorKind::InvalidInput, "bad fine-grid step in " + spec);
    return hjnet::StudyReference::fine(dx);
  }
  throw hjnet::Error(hjnet::ErrorKind::InvalidInput,
                     "unknown reference '" + spec + "' (use exact:test1, exact:distance or fine:<dx>)");
}

std::vector<hjnet::NetworkPoint> read_starts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw hjnet::Error(hjnet::ErrorKind::InvalidInput, "cannot open start points " + path);
  std::vector<hjnet::NetworkPoint> starts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.rfind("arc_id", 0) == 0 || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw hjnet::Error(hjnet::ErrorKind::InvalidInput, "start line needs arc_id,t: " + line);
    }
    try {
      starts.push_back({std::stoi(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
    } catch (const std::exception&) {
      throw hjnet::Error(hjnet::ErrorKind::InvalidInput, "bad start line: " + line);
    }
  }
  return starts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eikonal solver on networks"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);

  std::string network;
  std::string output;

  auto* validate = app.add_subcommand("validate", "check a network file");
  validate->add_option("network", network, "network JSON")->required();

  SolveFlags solve_flags;
  auto* solve = app.add_subcommand("solve", "solve and write the nodal solution CSV");
  solve->add_option("network", network, "network JSON")->required();
  solve->add_option("-o,--output", output, "output CSV (default stdout)");
  add_solve_flags(solve, solve_flags);

  std::string reference = "fine:0.005";
  std::string steps_text = "0.2,0.1,0.05,0.025,0.0125";
  std::string prefix;
  SolveFlags study_flags;
  auto* study = app.add_subcommand("study", "convergence study");
  study->add_option("network", network, "network JSON")->required();
  study->add_option("--reference", reference, "exact:test1, exact:distance or fine:<dx>");
  study->add_option("--steps", steps_text, "comma-separated dx = h values, each halving the last");
  study->add_option("--output-prefix", prefix, "write <prefix>.csv and <prefix>.txt");
  study->add_option("--tol", study_flags.tol, "stopping tolerance");
  study->add_option("--max-sweeps", study_flags.max_sweeps, "sweep limit");
  study->add_flag("--kruzkov", study_flags.kruzkov, "iterate on w = 1 - exp(-u)");

  SolveFlags path_flags;
  std::string starts_file;
  std::string out_dir = ".";
  long max_steps = 100000;
  auto* paths = app.add_subcommand("paths", "extract discrete optimal paths");
  paths->add_option("network", network, "network JSON")->required();
  paths->add_option("--starts", starts_file, "CSV of arc_id,t start points")->required();
  paths->add_option("--output-dir", out_dir, "directory for path_<k>.csv files");
  paths->add_option("--max-steps", max_steps, "step limit per path");
  add_solve_flags(paths, path_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    std::optional<hjnet::Network> net;
    if (*validate) {
      if (!load_valid(network, net)) return kValidation;
      std::cout << hjnet::validate_network(*net).summary();
      return kOk;
    }
    if (!load_valid(network, net)) return kValidation;

    if (*solve) {
      const auto cfg = to_config(solve_flags);
      hjnet::Grid grid(*net, cfg.dx);
      const auto result = run_solve(*net, grid, cfg);
      std::ofstream file;
      write_solution(open_output(output, file), *net, grid, result);
      std::cerr << "converged in " << result.sweeps_used << " sweeps\n";
      return kOk;
    }

    if (*study) {
      const auto steps = parse_steps(steps_text);
      auto cfg = to_config(study_flags);
      const auto report = hjnet::run_study(*net, parse_reference(reference, *net), steps, cfg);
      report.write_table(std::cout);
      if (!prefix.empty()) {
        std::ofstream csv(prefix + ".csv"), txt(prefix + ".txt");
        if (!csv || !txt) throw hjnet::Error(hjnet::ErrorKind::InvalidInput, "cannot write " + prefix);
        report.write_csv(csv);
        report.write_table(txt);
      }
      return kOk;
    }

    if (*paths) {
      auto cfg = to_config(path_flags);
      cfg.record_controls = true;
      hjnet::Grid grid(*net, cfg.dx);
      const auto result = run_solve(*net, grid, cfg);
      const auto starts = read_starts(starts_file);
      std::filesystem::create_directories(out_dir);
      for (std::size_t k = 0; k < starts.size(); ++k) {
        const auto path = hjnet::extract_path(*net, grid, result, starts[k], cfg.h, max_steps);
        std::ofstream file(std::filesystem::path(out_dir) / ("path_" + std::to_string(k) + ".csv"));
        hjnet::write_path_csv(file, *net, grid, path);
      }
      return kOk;
    }
  } catch (const hjnet::NotConverged& e) {
    std::cerr << "error: " << e.what() << " (final residual " << e.result().final_residual << ")\n";
    return kNotConverged;
  } catch (const hjnet::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (e.kind() == hjnet::ErrorKind::PathStalled) return kStalled;
    if (e.kind() == hjnet::ErrorKind::MissingDirichletValue) return kValidation;
    return kInvalid;
  }
  return kInvalid;
}
