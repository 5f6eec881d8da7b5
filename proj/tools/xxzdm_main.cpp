// Batch frontend: sweeps, coupling flows, scaling fits, derivative surfaces
// and the exact-diagonalization oracle, serialized to CSV/JSON.
//
// Exit codes: 0 success, 2 invalid configuration, 3 numerical failure (the
// error name is printed on stderr).

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli_support.hpp"
#include "xxzdm/errors.hpp"

namespace {

using namespace xxzdm;

struct SweepOptions {
  std::string axis = "delta";
  std::string min, max;
  int points = 0;
  std::string j = "1";
  std::string delta = "0";
  std::string d = "0";
  int steps = 0;
  std::string observable = "c13";
  std::string output;
  std::string format = "csv";
  std::string plot_script;
};

struct FlowOptions {
  std::string j = "1";
  std::string delta, d;
  int steps = 0;
  std::string output;
  std::string format = "csv";
};

struct ScalingOptions {
  std::string j = "1";
  std::string delta;
  std::string steps = "2:7";
  std::string grid_min = "0.02";
  std::string grid_max = "0.998";
  int grid_points = 80;
  std::string output;
  std::string plot_script;
};

struct SurfaceOptions {
  std::string j = "1";
  std::string delta_min = "1", delta_max = "2.5";
  int delta_points = 60;
  std::string d_min = "0", d_max = "2";
  int d_points = 60;
  int steps = 6;
  std::string output;
  std::string plot_script;
};

struct OracleOptions {
  int sites = 3;
  std::string j = "1";
  std::string delta, d;
  std::string boundary = "open";
  int site_a = 1;
  int site_b = 3;
  std::string output;
};

std::pair<int, int> parse_step_range(const std::string& text) {
  const auto sep = text.find(':');
  if (sep == std::string::npos) {
    throw std::invalid_argument("--steps must look like LO:HI, e.g. 2:7");
  }
  const int lo = std::stoi(text.substr(0, sep));
  const int hi = std::stoi(text.substr(sep + 1));
  return {lo, hi};
}

void write_output(const std::filesystem::path& path, const std::string& text) {
  cli::atomic_write(path, text);
}

int run_sweep(const SweepOptions& opt) {
  const auto axis = cli::axis_from_string(opt.axis);
  if (!axis) throw std::invalid_argument("unknown --axis " + opt.axis);
  const auto obs = cli::observable_from_string(opt.observable);
  if (!obs) throw std::invalid_argument("unknown --observable " + opt.observable);
  if (opt.format != "csv" && opt.format != "json") {
    throw std::invalid_argument("--format must be csv or json");
  }
  const std::vector<double> grid =
      linspace(cli::parse_real(opt.min), cli::parse_real(opt.max), opt.points);
  const Couplings fixed(cli::parse_real(opt.j), cli::parse_real(opt.delta),
                        cli::parse_real(opt.d));

  const SweepResult result = sweep(fixed, *axis, grid, opt.steps, *obs,
                                   cli::thread_count_from_env());
  if (opt.format == "csv") {
    write_output(opt.output, cli::sweep_csv(result, *obs));
  } else {
    write_output(opt.output, cli::sweep_json(result, *obs).dump(2) + "\n");
  }
  if (!opt.plot_script.empty()) {
    cli::emit_plot_script(opt.output, cli::PlotKind::sweep, opt.plot_script);
  }
  return 0;
}

int run_flow(const FlowOptions& opt) {
  if (opt.format != "csv" && opt.format != "json") {
    throw std::invalid_argument("--format must be csv or json");
  }
  const Couplings c(cli::parse_real(opt.j), cli::parse_real(opt.delta),
                    cli::parse_real(opt.d));
  const FlowTrace trace = flow(c, opt.steps);
  if (opt.format == "csv") {
    write_output(opt.output, cli::flow_csv(trace));
  } else {
    write_output(opt.output, cli::flow_json(trace).dump(2) + "\n");
  }
  return 0;
}

int run_scaling(const ScalingOptions& opt) {
  const auto [lo, hi] = parse_step_range(opt.steps);
  const std::vector<double> grid =
      linspace(cli::parse_real(opt.grid_min), cli::parse_real(opt.grid_max),
               opt.grid_points);
  const ScalingRun run = run_scaling_pipeline(
      cli::parse_real(opt.j), cli::parse_real(opt.delta), lo, hi, grid);
  write_output(opt.output, cli::scaling_json(run).dump(2) + "\n");
  if (!opt.plot_script.empty()) {
    cli::emit_plot_script(opt.output, cli::PlotKind::scaling, opt.plot_script);
  }
  return 0;
}

int run_surface(const SurfaceOptions& opt) {
  const std::vector<double> delta_grid =
      linspace(cli::parse_real(opt.delta_min), cli::parse_real(opt.delta_max),
               opt.delta_points);
  const std::vector<double> d_grid =
      linspace(cli::parse_real(opt.d_min), cli::parse_real(opt.d_max),
               opt.d_points);
  (void)cli::parse_real(opt.j);
  const SurfaceResult surface = singularity_surface(
      delta_grid, d_grid, opt.steps, cli::thread_count_from_env());
  write_output(opt.output, cli::surface_csv(surface));
  if (!opt.plot_script.empty()) {
    cli::emit_plot_script(opt.output, cli::PlotKind::surface, opt.plot_script);
  }
  return 0;
}

int run_oracle(const OracleOptions& opt) {
  Boundary boundary;
  if (opt.boundary == "open") {
    boundary = Boundary::open;
  } else if (opt.boundary == "periodic") {
    boundary = Boundary::periodic;
  } else {
    throw std::invalid_argument("--boundary must be open or periodic");
  }
  const ChainSpec spec(opt.sites,
                       Couplings(cli::parse_real(opt.j),
                                 cli::parse_real(opt.delta),
                                 cli::parse_real(opt.d)),
                       boundary);
  if (opt.site_a < 1 || opt.site_b <= opt.site_a || opt.site_b > opt.sites) {
    throw std::invalid_argument("need 1 <= site-a < site-b <= sites");
  }
  const PairConcurrence pc = pair_concurrence_ed(spec, opt.site_a, opt.site_b);
  write_output(opt.output,
               cli::oracle_json(spec, pc, opt.site_a, opt.site_b).dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-RG entanglement toolkit for the XXZ chain with a "
               "Dzyaloshinskii-Moriya term"};
  app.require_subcommand(1);

  SweepOptions sweep_opt;
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Evaluate an observable over a coupling grid");
  sweep_cmd->add_option("--axis", sweep_opt.axis, "Sweep axis: delta or d");
  sweep_cmd->add_option("--min", sweep_opt.min, "Grid start")->required();
  sweep_cmd->add_option("--max", sweep_opt.max, "Grid end")->required();
  sweep_cmd->add_option("--points", sweep_opt.points, "Grid size")->required();
  sweep_cmd->add_option("--j", sweep_opt.j, "Energy scale J");
  sweep_cmd->add_option("--delta", sweep_opt.delta, "Fixed anisotropy");
  sweep_cmd->add_option("--d", sweep_opt.d, "Fixed DM strength");
  sweep_cmd->add_option("--steps", sweep_opt.steps, "RG steps");
  sweep_cmd->add_option("--observable", sweep_opt.observable,
                        "c13 c12 eof13 dc13_ddelta dc13_dd dc12_ddelta");
  sweep_cmd->add_option("--output", sweep_opt.output, "Output path")->required();
  sweep_cmd->add_option("--format", sweep_opt.format, "csv or json");
  sweep_cmd->add_option("--plot-script", sweep_opt.plot_script,
                        "Also emit a plot script here");

  FlowOptions flow_opt;
  auto* flow_cmd =
      app.add_subcommand("flow", "Record the coupling flow under iteration");
  flow_cmd->add_option("--j", flow_opt.j, "Energy scale J");
  flow_cmd->add_option("--delta", flow_opt.delta, "Initial anisotropy")
      ->required();
  flow_cmd->add_option("--d", flow_opt.d, "DM strength")->required();
  flow_cmd->add_option("--steps", flow_opt.steps, "RG steps")->required();
  flow_cmd->add_option("--output", flow_opt.output, "Output path")->required();
  flow_cmd->add_option("--format", flow_opt.format, "csv or json");

  ScalingOptions scaling_opt;
  auto* scaling_cmd = app.add_subcommand(
      "scaling", "Derivative-minimum positions and log-log fits");
  scaling_cmd->add_option("--j", scaling_opt.j, "Energy scale J");
  scaling_cmd->add_option("--delta", scaling_opt.delta, "Fixed anisotropy (> 1)")
      ->required();
  scaling_cmd->add_option("--steps", scaling_opt.steps, "Step range LO:HI");
  scaling_cmd->add_option("--grid-min", scaling_opt.grid_min, "Coarse D start");
  scaling_cmd->add_option("--grid-max", scaling_opt.grid_max, "Coarse D end");
  scaling_cmd->add_option("--grid-points", scaling_opt.grid_points,
                          "Coarse D grid size");
  scaling_cmd->add_option("--output", scaling_opt.output, "Output path")
      ->required();
  scaling_cmd->add_option("--plot-script", scaling_opt.plot_script,
                          "Also emit a plot script here");

  SurfaceOptions surface_opt;
  auto* surface_cmd = app.add_subcommand(
      "surface", "dC13/ddelta over a dense (delta, D) grid");
  surface_cmd->add_option("--j", surface_opt.j, "Energy scale J");
  surface_cmd->add_option("--delta-min", surface_opt.delta_min, "delta start");
  surface_cmd->add_option("--delta-max", surface_opt.delta_max, "delta end");
  surface_cmd->add_option("--delta-points", surface_opt.delta_points,
                          "delta grid size");
  surface_cmd->add_option("--d-min", surface_opt.d_min, "D start");
  surface_cmd->add_option("--d-max", surface_opt.d_max, "D end");
  surface_cmd->add_option("--d-points", surface_opt.d_points, "D grid size");
  surface_cmd->add_option("--steps", surface_opt.steps, "RG steps");
  surface_cmd->add_option("--output", surface_opt.output, "Output path")
      ->required();
  surface_cmd->add_option("--plot-script", surface_opt.plot_script,
                          "Also emit a plot script here");

  OracleOptions oracle_opt;
  auto* oracle_cmd = app.add_subcommand(
      "oracle", "Exact diagonalization of a short chain plus pair concurrence");
  oracle_cmd->add_option("--sites", oracle_opt.sites, "Chain length 2..12");
  oracle_cmd->add_option("--j", oracle_opt.j, "Energy scale J");
  oracle_cmd->add_option("--delta", oracle_opt.delta, "Anisotropy")->required();
  oracle_cmd->add_option("--d", oracle_opt.d, "DM strength")->required();
  oracle_cmd->add_option("--boundary", oracle_opt.boundary, "open or periodic");
  oracle_cmd->add_option("--site-a", oracle_opt.site_a, "First site (1-based)");
  oracle_cmd->add_option("--site-b", oracle_opt.site_b, "Second site (1-based)");
  oracle_cmd->add_option("--output", oracle_opt.output, "Output path")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sweep_cmd->parsed()) return run_sweep(sweep_opt);
    if (flow_cmd->parsed()) return run_flow(flow_opt);
    if (scaling_cmd->parsed()) return run_scaling(scaling_opt);
    if (surface_cmd->parsed()) return run_surface(surface_opt);
    if (oracle_cmd->parsed()) return run_oracle(oracle_opt);
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << e.name() << ": " << e.what() << "\n";
    return 3;
  } catch (const MalformedResultFile& e) {
    std::cerr << "MalformedResultFile: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "filesystem error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
