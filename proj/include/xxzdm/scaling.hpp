#pragma once

// Parameter sweeps over the coupling plane, localization of the minimum of
// dC13/d(delta) along the DM axis, and log-log least squares extracting the
// finite-size scaling laws of that minimum.

#include <utility>
#include <vector>

#include "xxzdm/block_rg.hpp"
#include "xxzdm/entanglement.hpp"

namespace xxzdm {

enum class SweepAxis { delta, d };
const char* to_string(SweepAxis axis);

enum class Observable { c13, c12, eof13, dc13_ddelta, dc13_dd, dc12_ddelta };
const char* to_string(Observable obs);

// One observable evaluated over an ascending grid along one axis, the other
// couplings held fixed. `values` holds NaN where the stencil straddled the
// saturation boundary (recorded, not fatal). delta_eff / j_eff are the
// renormalized couplings at step n for each grid point.
struct SweepResult {
  SweepAxis axis = SweepAxis::delta;
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> delta_eff;
  std::vector<double> j_eff;
  int n_steps = 0;
  double effective_size = 3.0;
  Couplings fixed;

  SweepResult() : fixed(1.0, 0.0, 0.0) {}
};

// Evaluates `obs` at every grid point. Results are identical for any thread
// count; points are independent.
SweepResult sweep(const Couplings& fixed, SweepAxis axis,
                  const std::vector<double>& grid, int n_steps, Observable obs,
                  int threads = 1);

struct DerivativeMinimum {
  double d_m = 0.0;       // location of the minimum of dC13/d(delta) over D
  double min_value = 0.0; // value at the minimum (negative near criticality)
};

// Coarse scan of dC13/d(delta) over the D grid followed by golden-section
// refinement of the bracketed interior minimum down to the configured
// interval width. Throws NoMinimumBracketed when the scan minimum sits on
// the grid edge (this happens at n = 1, where the curve is monotone in D).
DerivativeMinimum find_derivative_minimum(const Couplings& fixed, int n_steps,
                                          const std::vector<double>& coarse_d_grid);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double nu_estimate = 0.0;  // 1 / |slope|
  std::vector<std::pair<double, double>> points;  // (ln N, ln y)
};

// Least squares of ln(D_c - D_m) against ln N, N = 3^(n+1); D_c is the
// analytic sqrt(delta^2 - 1) for the fixed anisotropy.
ScalingFit fit_position_scaling(
    const std::vector<std::pair<int, double>>& position_by_step, double delta);

// Least squares of ln|min dC13/d(delta)| against ln N.
ScalingFit fit_divergence_scaling(
    const std::vector<std::pair<int, double>>& minimum_by_step);

// Dense grid of dC13/d(delta) over the coupling plane; values indexed
// [d_index * delta_grid.size() + delta_index], NaN where the stencil failed.
struct SurfaceResult {
  std::vector<double> delta_grid;
  std::vector<double> d_grid;
  std::vector<double> values;
  int n_steps = 0;
  double effective_size = 3.0;
};

SurfaceResult singularity_surface(const std::vector<double>& delta_grid,
                                  const std::vector<double>& d_grid,
                                  int n_steps, int threads = 1);

// Full scaling experiment: derivative minima for every step count in
// [n_lo, n_hi] plus both fits.
struct ScalingPoint {
  int n_steps = 0;
  double effective_size = 0.0;
  double d_m = 0.0;
  double min_value = 0.0;
};

struct ScalingRun {
  double j = 1.0;
  double delta = 0.0;
  double d_c = 0.0;
  std::vector<ScalingPoint> points;
  ScalingFit position_fit;
  ScalingFit divergence_fit;
};

ScalingRun run_scaling_pipeline(double j, double delta, int n_lo, int n_hi,
                                const std::vector<double>& coarse_d_grid);

// Uniform ascending grid with `points` entries (a single midpoint if 1).
std::vector<double> linspace(double lo, double hi, int points);

// Default coarse D grid for the scaling pipeline.
std::vector<double> default_scaling_grid();

}  // namespace xxzdm
