#pragma once

// Serialization and file plumbing behind the command-line frontend: CSV/JSON
// writers with shortest-round-trip float formatting, matching readers for
// round-trip checks, atomic output, numeric flag parsing with sqrt()
// expressions, and plot-script emission.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "xxzdm/ed_oracle.hpp"
#include "xxzdm/scaling.hpp"

namespace xxzdm::cli {

// Parses "1.5", "sqrt(2)" and friends; throws std::invalid_argument on junk.
double parse_real(const std::string& text);

// Shortest representation that round-trips the exact double.
std::string format_double(double value);

// Inverse of format_double; accepts "nan"/"inf" spellings.
double parse_double(const std::string& text);

// Writes via a temp file in the same directory plus rename.
void atomic_write(const std::filesystem::path& path, const std::string& content);

// XXZDM_THREADS, defaulting to the hardware concurrency.
int thread_count_from_env();

// ---------------------------------------------------------------------------
// Writers
// ---------------------------------------------------------------------------

inline constexpr const char* kSweepCsvHeader =
    "n_steps,N_eff,J,delta0,D0,delta_eff,J_eff,axis_value,observable,value";
inline constexpr const char* kFlowCsvHeader = "n,N_eff,J,delta,D,saturated";
inline constexpr const char* kSurfaceCsvHeader =
    "n_steps,N_eff,J,delta,D,dC13_dDelta";

std::string sweep_csv(const SweepResult& result, Observable obs);
std::string flow_csv(const FlowTrace& trace);
std::string surface_csv(const SurfaceResult& surface);
nlohmann::json sweep_json(const SweepResult& result, Observable obs);
nlohmann::json flow_json(const FlowTrace& trace);
nlohmann::json scaling_json(const ScalingRun& run);
nlohmann::json oracle_json(const ChainSpec& spec, const PairConcurrence& pc,
                           int site_a, int site_b);

// ---------------------------------------------------------------------------
// Readers (round-trip checks and plot-script validation)
// ---------------------------------------------------------------------------

struct SweepTable {
  std::vector<int> n_steps;
  std::vector<double> n_eff, j, delta0, d0, delta_eff, j_eff, axis_value, value;
  std::vector<std::string> observable;
};

SweepTable read_sweep_csv(const std::filesystem::path& path);
ScalingRun read_scaling_json(const std::filesystem::path& path);

struct SurfaceTable {
  std::vector<int> n_steps;
  std::vector<double> n_eff, j, delta, d, value;
};

SurfaceTable read_surface_csv(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Plot scripts
// ---------------------------------------------------------------------------

enum class PlotKind { sweep, scaling, surface };
std::optional<PlotKind> plot_kind_from_string(const std::string& name);

// Validates the result file, then writes a matplotlib script that loads it
// by relative path (no data is embedded). Returns script_path.
std::filesystem::path emit_plot_script(const std::filesystem::path& result_path,
                                       PlotKind kind,
                                       const std::filesystem::path& script_path);

std::optional<Observable> observable_from_string(const std::string& name);
std::optional<SweepAxis> axis_from_string(const std::string& name);

}  // namespace xxzdm::cli
