#include "cli_support.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "xxzdm/errors.hpp"

namespace xxzdm::cli {

namespace {

std::string strip(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw MalformedResultFile("cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int parse_int(const std::string& text) {
  const std::string t = strip(text);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size()) {
    throw MalformedResultFile("bad integer field '" + text + "'");
  }
  return value;
}

}  // namespace

double parse_real(const std::string& text) {
  std::string t = strip(text);
  double sign = 1.0;
  if (!t.empty() && (t[0] == '+' || t[0] == '-')) {
    if (t[0] == '-') sign = -1.0;
    t = t.substr(1);
  }
  if (t.rfind("sqrt(", 0) == 0 && !t.empty() && t.back() == ')') {
    const std::string inner = t.substr(5, t.size() - 6);
    const double v = parse_real(inner);
    if (v < 0.0) {
      throw std::invalid_argument("parse_real: sqrt of a negative value");
    }
    return sign * std::sqrt(v);
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size()) {
    throw std::invalid_argument("parse_real: cannot parse '" + text + "'");
  }
  return sign * value;
}

std::string format_double(double value) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) {
    throw std::runtime_error("format_double: to_chars failed");
  }
  return std::string(buf, ptr);
}

double parse_double(const std::string& text) {
  const std::string t = strip(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size()) {
    throw MalformedResultFile("bad numeric field '" + text + "'");
  }
  return value;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::invalid_argument("cannot open output path " + tmp.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      throw std::runtime_error("short write to " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

int thread_count_from_env() {
  const char* env = std::getenv("XXZDM_THREADS");
  if (env != nullptr) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("XXZDM_THREADS must be a positive integer");
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// ---------------------------------------------------------------------------
// Writers
// ---------------------------------------------------------------------------

std::string sweep_csv(const SweepResult& result, Observable obs) {
  std::string out(kSweepCsvHeader);
  out.push_back('\n');
  const std::string n_eff = format_double(result.effective_size);
  const std::string j0 = format_double(result.fixed.j);
  for (size_t i = 0; i < result.grid.size(); ++i) {
    const double delta0 =
        result.axis == SweepAxis::delta ? result.grid[i] : result.fixed.delta;
    const double d0 =
        result.axis == SweepAxis::d ? result.grid[i] : result.fixed.d;
    out += std::to_string(result.n_steps);
    out.push_back(',');
    out += n_eff;
    out.push_back(',');
    out += j0;
    out.push_back(',');
    out += format_double(delta0);
    out.push_back(',');
    out += format_double(d0);
    out.push_back(',');
    out += format_double(result.delta_eff[i]);
    out.push_back(',');
    out += format_double(result.j_eff[i]);
    out.push_back(',');
    out += format_double(result.grid[i]);
    out.push_back(',');
    out += to_string(obs);
    out.push_back(',');
    out += format_double(result.values[i]);
    out.push_back('\n');
  }
  return out;
}

std::string flow_csv(const FlowTrace& trace) {
  std::string out(kFlowCsvHeader);
  out.push_back('\n');
  for (size_t n = 0; n < trace.steps.size(); ++n) {
    const bool saturated = trace.first_saturated_step >= 0 &&
                           static_cast<size_t>(trace.first_saturated_step) <= n;
    out += std::to_string(n);
    out.push_back(',');
    out += format_double(trace.effective_sizes[n]);
    out.push_back(',');
    out += format_double(trace.steps[n].j);
    out.push_back(',');
    out += format_double(trace.steps[n].delta);
    out.push_back(',');
    out += format_double(trace.steps[n].d);
    out.push_back(',');
    out += saturated ? "1" : "0";
    out.push_back('\n');
  }
  return out;
}

std::string surface_csv(const SurfaceResult& surface) {
  std::string out(kSurfaceCsvHeader);
  out.push_back('\n');
  const std::string n_eff = format_double(surface.effective_size);
  const std::string steps = std::to_string(surface.n_steps);
  for (size_t di = 0; di < surface.d_grid.size(); ++di) {
    for (size_t xi = 0; xi < surface.delta_grid.size(); ++xi) {
      out += steps;
      out.push_back(',');
      out += n_eff;
      out.push_back(',');
      out += "1";
      out.push_back(',');
      out += format_double(surface.delta_grid[xi]);
      out.push_back(',');
      out += format_double(surface.d_grid[di]);
      out.push_back(',');
      out += format_double(surface.values[di * surface.delta_grid.size() + xi]);
      out.push_back('\n');
    }
  }
  return out;
}

nlohmann::json sweep_json(const SweepResult& result, Observable obs) {
  nlohmann::json rows = nlohmann::json::array();
  for (size_t i = 0; i < result.grid.size(); ++i) {
    const double delta0 =
        result.axis == SweepAxis::delta ? result.grid[i] : result.fixed.delta;
    const double d0 =
        result.axis == SweepAxis::d ? result.grid[i] : result.fixed.d;
    rows.push_back({{"axis_value", result.grid[i]},
                    {"delta0", delta0},
                    {"D0", d0},
                    {"delta_eff", result.delta_eff[i]},
                    {"J_eff", result.j_eff[i]},
                    {"value", result.values[i]}});
  }
  return {{"axis", to_string(result.axis)},
          {"observable", to_string(obs)},
          {"n_steps", result.n_steps},
          {"N_eff", result.effective_size},
          {"J", result.fixed.j},
          {"rows", rows}};
}

nlohmann::json flow_json(const FlowTrace& trace) {
  nlohmann::json rows = nlohmann::json::array();
  for (size_t n = 0; n < trace.steps.size(); ++n) {
    rows.push_back({{"n", n},
                    {"N_eff", trace.effective_sizes[n]},
                    {"J", trace.steps[n].j},
                    {"delta", trace.steps[n].delta},
                    {"D", trace.steps[n].d}});
  }
  return {{"block_size", trace.block_size},
          {"first_saturated_step", trace.first_saturated_step},
          {"steps", rows}};
}

nlohmann::json scaling_json(const ScalingRun& run) {
  nlohmann::json points = nlohmann::json::array();
  for (const ScalingPoint& p : run.points) {
    points.push_back({{"n", p.n_steps},
                      {"N", p.effective_size},
                      {"D_m", p.d_m},
                      {"min_value", p.min_value}});
  }
  const auto fit_json = [](const ScalingFit& fit) {
    return nlohmann::json{{"slope", fit.slope},
                          {"intercept", fit.intercept},
                          {"r2", fit.r_squared},
                          {"nu", fit.nu_estimate}};
  };
  return {{"delta", run.delta},
          {"d_c", run.d_c},
          {"points", points},
          {"position_fit", fit_json(run.position_fit)},
          {"divergence_fit", fit_json(run.divergence_fit)}};
}

nlohmann::json oracle_json(const ChainSpec& spec, const PairConcurrence& pc,
                           int site_a, int site_b) {
  nlohmann::json out = {
      {"n_sites", spec.n_sites},
      {"boundary", spec.boundary == Boundary::open ? "open" : "periodic"},
      {"couplings",
       {{"J", spec.couplings.j},
        {"delta", spec.couplings.delta},
        {"D", spec.couplings.d}}},
      {"ground_energy", pc.ground_energy},
      {"degeneracy", pc.degeneracy},
      {"pair", {{"a", site_a}, {"b", site_b}}},
      {"per_state_concurrence", pc.per_state}};
  if (pc.canonical.has_value()) {
    out["concurrence"] = *pc.canonical;
  }
  if (spec.n_sites == 3 && spec.boundary == Boundary::open) {
    const BlockGroundDoublet doublet = ground_doublet(spec.couplings);
    out["analytic"] = {{"q", doublet.q}, {"energy", doublet.energy}};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Readers
// ---------------------------------------------------------------------------

SweepTable read_sweep_csv(const std::filesystem::path& path) {
  const std::string content = read_file(path);
  std::vector<std::string> lines = split(content, '\n');
  if (lines.empty() || strip(lines.front()) != kSweepCsvHeader) {
    throw MalformedResultFile(path.string() + ": missing sweep CSV header");
  }
  SweepTable table;
  for (size_t i = 1; i < lines.size(); ++i) {
    const std::string line = strip(lines[i]);
    if (line.empty()) continue;
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != 10) {
      throw MalformedResultFile(path.string() + ": bad row '" + line + "'");
    }
    table.n_steps.push_back(parse_int(fields[0]));
    table.n_eff.push_back(parse_double(fields[1]));
    table.j.push_back(parse_double(fields[2]));
    table.delta0.push_back(parse_double(fields[3]));
    table.d0.push_back(parse_double(fields[4]));
    table.delta_eff.push_back(parse_double(fields[5]));
    table.j_eff.push_back(parse_double(fields[6]));
    table.axis_value.push_back(parse_double(fields[7]));
    table.observable.push_back(fields[8]);
    table.value.push_back(parse_double(fields[9]));
  }
  if (table.value.empty()) {
    throw MalformedResultFile(path.string() + ": no data rows");
  }
  return table;
}

ScalingRun read_scaling_json(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedResultFile(path.string() + ": " + e.what());
  }
  try {
    ScalingRun run;
    run.delta = j.at("delta").get<double>();
    run.d_c = j.at("d_c").get<double>();
    for (const auto& p : j.at("points")) {
      ScalingPoint point;
      point.n_steps = p.at("n").get<int>();
      point.effective_size = p.at("N").get<double>();
      point.d_m = p.at("D_m").get<double>();
      point.min_value = p.at("min_value").get<double>();
      run.points.push_back(point);
    }
    const auto read_fit = [&](const char* key) {
      ScalingFit fit;
      fit.slope = j.at(key).at("slope").get<double>();
      fit.intercept = j.at(key).at("intercept").get<double>();
      fit.r_squared = j.at(key).at("r2").get<double>();
      fit.nu_estimate = j.at(key).at("nu").get<double>();
      return fit;
    };
    run.position_fit = read_fit("position_fit");
    run.divergence_fit = read_fit("divergence_fit");
    return run;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedResultFile(path.string() + ": " + e.what());
  }
}

SurfaceTable read_surface_csv(const std::filesystem::path& path) {
  const std::string content = read_file(path);
  std::vector<std::string> lines = split(content, '\n');
  if (lines.empty() || strip(lines.front()) != kSurfaceCsvHeader) {
    throw MalformedResultFile(path.string() + ": missing surface CSV header");
  }
  SurfaceTable table;
  for (size_t i = 1; i < lines.size(); ++i) {
    const std::string line = strip(lines[i]);
    if (line.empty()) continue;
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != 6) {
      throw MalformedResultFile(path.string() + ": bad row '" + line + "'");
    }
    table.n_steps.push_back(parse_int(fields[0]));
    table.n_eff.push_back(parse_double(fields[1]));
    table.j.push_back(parse_double(fields[2]));
    table.delta.push_back(parse_double(fields[3]));
    table.d.push_back(parse_double(fields[4]));
    table.value.push_back(parse_double(fields[5]));
  }
  if (table.value.empty()) {
    throw MalformedResultFile(path.string() + ": no data rows");
  }
  return table;
}

// ---------------------------------------------------------------------------
// Plot scripts
// ---------------------------------------------------------------------------

std::optional<PlotKind> plot_kind_from_string(const std::string& name) {
  if (name == "sweep") return PlotKind::sweep;
  if (name == "scaling") return PlotKind::scaling;
  if (name == "surface") return PlotKind::surface;
  return std::nullopt;
}

namespace {

std::string relative_to_script(const std::filesystem::path& result_path,
                               const std::filesystem::path& script_path) {
  std::filesystem::path script_dir = script_path.parent_path();
  if (script_dir.empty()) script_dir = ".";
  std::error_code ec;
  std::filesystem::path rel =
      std::filesystem::relative(result_path, script_dir, ec);
  if (ec || rel.empty()) rel = result_path.filename();
  return rel.generic_string();
}

std::string sweep_script(const std::string& data) {
  std::ostringstream s;
  s << "#!/usr/bin/env python3\n"
    << "# Line plot of a coupling sweep: one series per fixed-coupling value.\n"
    << "import csv\n"
    << "from collections import defaultdict\n"
    << "import matplotlib.pyplot as plt\n\n"
    << "DATA = \"" << data << "\"\n\n"
    << "rows = list(csv.DictReader(open(DATA)))\n"
    << "axis_is_delta = all(r[\"delta0\"] == r[\"axis_value\"] for r in rows)\n"
    << "key = \"D0\" if axis_is_delta else \"delta0\"\n"
    << "series = defaultdict(list)\n"
    << "for r in rows:\n"
    << "    v = float(r[\"value\"])\n"
    << "    series[(r[key], r[\"n_steps\"])].append((float(r[\"axis_value\"]), v))\n"
    << "for (k, n), pts in sorted(series.items()):\n"
    << "    pts.sort()\n"
    << "    plt.plot([p[0] for p in pts], [p[1] for p in pts],\n"
    << "             label=f\"{key}={k}, n={n}\")\n"
    << "plt.xlabel(\"delta\" if axis_is_delta else \"D\")\n"
    << "plt.ylabel(rows[0][\"observable\"])\n"
    << "plt.legend()\n"
    << "plt.tight_layout()\n"
    << "plt.savefig(DATA + \".png\", dpi=160)\n"
    << "print(\"wrote\", DATA + \".png\")\n";
  return s.str();
}

std::string scaling_script(const std::string& data) {
  std::ostringstream s;
  s << "#!/usr/bin/env python3\n"
    << "# ln-ln scatter of the derivative-minimum scaling plus fitted lines.\n"
    << "import json\n"
    << "import math\n"
    << "import matplotlib.pyplot as plt\n\n"
    << "DATA = \"" << data << "\"\n\n"
    << "run = json.load(open(DATA))\n"
    << "lnN = [math.log(p[\"N\"]) for p in run[\"points\"]]\n"
    << "pos = [math.log(run[\"d_c\"] - p[\"D_m\"]) for p in run[\"points\"]]\n"
    << "div = [math.log(abs(p[\"min_value\"])) for p in run[\"points\"]]\n"
    << "fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))\n"
    << "for ax, ys, fit, title in (\n"
    << "        (ax1, pos, run[\"position_fit\"], \"ln(D_c - D_m) vs ln N\"),\n"
    << "        (ax2, div, run[\"divergence_fit\"], \"ln|min dC/ddelta| vs ln N\")):\n"
    << "    ax.scatter(lnN, ys)\n"
    << "    xs = [min(lnN), max(lnN)]\n"
    << "    ax.plot(xs, [fit[\"slope\"] * x + fit[\"intercept\"] for x in xs],\n"
    << "            label=f\"slope={fit['slope']:.4f}, r2={fit['r2']:.4f}\")\n"
    << "    ax.set_title(title)\n"
    << "    ax.set_xlabel(\"ln N\")\n"
    << "    ax.legend()\n"
    << "plt.tight_layout()\n"
    << "plt.savefig(DATA + \".png\", dpi=160)\n"
    << "print(\"wrote\", DATA + \".png\")\n";
  return s.str();
}

std::string surface_script(const std::string& data) {
  std::ostringstream s;
  s << "#!/usr/bin/env python3\n"
    << "# Heatmap of dC13/ddelta over the (delta, D) plane.\n"
    << "import csv\n"
    << "import math\n"
    << "import matplotlib.pyplot as plt\n\n"
    << "DATA = \"" << data << "\"\n\n"
    << "rows = list(csv.DictReader(open(DATA)))\n"
    << "deltas = sorted({float(r[\"delta\"]) for r in rows})\n"
    << "ds = sorted({float(r[\"D\"]) for r in rows})\n"
    << "index = {(float(r[\"delta\"]), float(r[\"D\"])): float(r[\"dC13_dDelta\"])\n"
    << "         for r in rows}\n"
    << "grid = [[index.get((x, y), math.nan) for x in deltas] for y in ds]\n"
    << "plt.pcolormesh(deltas, ds, grid, shading=\"nearest\")\n"
    << "plt.colorbar(label=\"dC13/ddelta\")\n"
    << "plt.xlabel(\"delta\")\n"
    << "plt.ylabel(\"D\")\n"
    << "plt.tight_layout()\n"
    << "plt.savefig(DATA + \".png\", dpi=160)\n"
    << "print(\"wrote\", DATA + \".png\")\n";
  return s.str();
}

}  // namespace

std::filesystem::path emit_plot_script(const std::filesystem::path& result_path,
                                       PlotKind kind,
                                       const std::filesystem::path& script_path) {
  // Validate the result file before emitting anything.
  switch (kind) {
    case PlotKind::sweep:
      read_sweep_csv(result_path);
      break;
    case PlotKind::scaling:
      read_scaling_json(result_path);
      break;
    case PlotKind::surface:
      read_surface_csv(result_path);
      break;
  }
  const std::string rel = relative_to_script(result_path, script_path);
  std::string script;
  switch (kind) {
    case PlotKind::sweep:
      script = sweep_script(rel);
      break;
    case PlotKind::scaling:
      script = scaling_script(rel);
      break;
    case PlotKind::surface:
      script = surface_script(rel);
      break;
  }
  atomic_write(script_path, script);
  return script_path;
}

std::optional<Observable> observable_from_string(const std::string& name) {
  if (name == "c13") return Observable::c13;
  if (name == "c12") return Observable::c12;
  if (name == "eof13") return Observable::eof13;
  if (name == "dc13_ddelta") return Observable::dc13_ddelta;
  if (name == "dc13_dd") return Observable::dc13_dd;
  if (name == "dc12_ddelta") return Observable::dc12_ddelta;
  return std::nullopt;
}

std::optional<SweepAxis> axis_from_string(const std::string& name) {
  if (name == "delta") return SweepAxis::delta;
  if (name == "d") return SweepAxis::d;
  return std::nullopt;
}

}  // namespace xxzdm::cli
