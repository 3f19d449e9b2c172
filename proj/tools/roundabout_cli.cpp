// Command-line front end: generate, solve, baseline, metrics, plot.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "roundabout/baseline.hpp"
#include "roundabout/coordinator.hpp"
#include "roundabout/errors.hpp"
#include "roundabout/generator.hpp"
#include "roundabout/plot.hpp"
#include "roundabout/records.hpp"
#include "roundabout/scenario.hpp"

namespace {

using namespace roundabout;

enum ExitCode : int { kOk = 0, kNotConverged = 2, kInvalid = 3, kIo = 4 };

int default_workers() {
  if (const char* env = std::getenv("ROUNDABOUT_WORKERS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      throw ValidationError(std::string("ROUNDABOUT_WORKERS is not an integer: ") + env);
    }
  }
  return 1;
}

void write_file(const std::string& path, const std::string& body) {
  if (path.empty()) throw IoError("output path is empty");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << body;
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::vector<Trajectory> read_trajectories(const std::string& path) {
  if (path.empty()) throw IoError("trajectory path is empty");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open trajectory file '" + path + "'");
  const auto records = read_csv(in);
  return to_trajectories(records);
}

Scenario read_scenario(const std::string& path) {
  if (path.empty()) throw IoError("scenario path is empty");
  return load_scenario(path);
}

// Writes the CSV, then computes metrics from what was written.
TrajectoryMetrics emit_trajectories(const std::vector<Trajectory>& trajs, const Scenario& sc, const std::string& path) {
  const std::string csv = format_csv(to_records(trajs, sc.params));
  write_file(path, csv);
  std::istringstream in(csv);
  const auto written = to_trajectories(read_csv(in));
  return compute_metrics(written, sc);
}

struct RunFlags {
  std::string scenario;
  std::string out_traj = "trajectory.csv";
  std::string out_report = "report.json";
  int workers = 0;
  int max_outer = 0;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--scenario", f.scenario, "Scenario JSON file")->required();
  cmd->add_option("--out-traj", f.out_traj, "Trajectory CSV output");
  cmd->add_option("--out-report", f.out_report, "Report JSON output");
  cmd->add_option("--workers", f.workers, "Worker threads (default: $ROUNDABOUT_WORKERS or 1)");
  cmd->add_option("--max-outer", f.max_outer, "Override max_outer_iters");
}

int run_solve(const RunFlags& f) {
  Scenario sc = read_scenario(f.scenario);
  if (f.max_outer > 0) sc.params.max_outer_iters = f.max_outer;
  CoordinatorOptions opts;
  opts.workers = f.workers > 0 ? f.workers : default_workers();
  const SolveResult res = solve(sc, opts);
  const auto metrics = emit_trajectories(res.trajectories, sc, f.out_traj);
  const auto report = report_json("solve", &res.report, metrics, sc.num_vehicles(), sc.params.horizon_T,
                                   res.report.workers, res.report.wall_time);
  write_file(f.out_report, report.dump(2) + "\n");
  std::cerr << "solve: " << report["status"].get<std::string>() << " after " << res.report.outer_iterations
            << " outer iterations, min distance " << metrics.min_distance << " m, " << res.report.wall_time
            << " s\n";
  return res.report.status == SolveStatus::converged ? kOk : kNotConverged;
}

int run_baseline_cmd(const RunFlags& f) {
  const Scenario sc = read_scenario(f.scenario);
  const auto start = std::chrono::steady_clock::now();
  const auto trajs = baseline::run_baseline(sc);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto metrics = emit_trajectories(trajs, sc, f.out_traj);
  write_file(f.out_report, report_json("baseline", nullptr, metrics, sc.num_vehicles(), sc.params.horizon_T, 1, wall)
                               .dump(2) + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative trajectory planning for connected vehicles at unsignalized roundabouts"};
  app.require_subcommand(1);

  RoundaboutLayout layout;
  std::string gen_out = "scenario.json";
  auto* gen = app.add_subcommand("generate", "Write a synthetic circular roundabout scenario");
  gen->add_option("--n-vehicles", layout.n_vehicles, "Number of vehicles");
  gen->add_option("--inner-radius", layout.inner_radius, "Island radius [m]");
  gen->add_option("--outer-radius", layout.outer_radius, "Outer ring radius [m]");
  gen->add_option("--entrances", layout.entrances, "Number of arms");
  gen->add_option("--spacing", layout.spacing, "Headway between queued vehicles [m]");
  gen->add_option("--horizon", layout.params.horizon_T, "Planning horizon T");
  gen->add_option("--seed", layout.seed, "Random seed");
  gen->add_option("--out", gen_out, "Output scenario file");

  RunFlags solve_flags, base_flags;
  auto* solve_cmd = app.add_subcommand("solve", "Optimize cooperative trajectories");
  add_run_flags(solve_cmd, solve_flags);
  auto* base_cmd = app.add_subcommand("baseline", "Simulate the rule-based baseline");
  add_run_flags(base_cmd, base_flags);

  std::string m_scenario, m_traj, m_out;
  auto* metrics_cmd = app.add_subcommand("metrics", "Recompute metrics from a trajectory CSV");
  metrics_cmd->add_option("--scenario", m_scenario)->required();
  metrics_cmd->add_option("--traj", m_traj)->required();
  metrics_cmd->add_option("--out", m_out, "Output JSON (default: stdout)");

  std::string p_scenario, p_traj, p_dir = ".", p_prefix;
  auto* plot_cmd = app.add_subcommand("plot", "Render SVG plots of a trajectory CSV");
  plot_cmd->add_option("--scenario", p_scenario)->required();
  plot_cmd->add_option("--traj", p_traj)->required();
  plot_cmd->add_option("--out-dir", p_dir, "Directory for the SVG files");
  plot_cmd->add_option("--prefix", p_prefix, "File name prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*gen) {
      write_file(gen_out, generate_roundabout(layout).to_json().dump(1) + "\n");
      return kOk;
    }
    if (*solve_cmd) return run_solve(solve_flags);
    if (*base_cmd) return run_baseline_cmd(base_flags);
    if (*metrics_cmd) {
      const Scenario sc = read_scenario(m_scenario);
      const auto body = metrics_json(compute_metrics(read_trajectories(m_traj), sc)).dump(2) + "\n";
      if (m_out.empty()) std::cout << body;
      else write_file(m_out, body);
      return kOk;
    }
    if (*plot_cmd) {
      const Scenario sc = read_scenario(p_scenario);
      write_plots(render_plots(sc, read_trajectories(p_traj)), p_dir, p_prefix);
      return kOk;
    }
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kInvalid;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kInvalid;
}
