#include "xxzdm/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "xxzdm/errors.hpp"

namespace xxzdm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void validate_grid(const std::vector<double>& grid, const char* who) {
  if (grid.empty()) {
    throw std::invalid_argument(std::string(who) + ": empty grid");
  }
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i] < grid[i + 1])) {
      throw std::invalid_argument(std::string(who) +
                                  ": grid must be strictly ascending");
    }
  }
  if (!(grid.front() >= 0.0)) {
    throw std::invalid_argument(std::string(who) + ": grid values must be >= 0");
  }
}

void validate_steps(int n_steps, const char* who) {
  if (n_steps < 0 || n_steps > 64) {
    throw std::invalid_argument(std::string(who) + ": n_steps must be in [0, 64]");
  }
}

// True when the observable differentiates along the given axis.
bool differentiates_axis(Observable obs, SweepAxis axis) {
  switch (obs) {
    case Observable::dc13_ddelta:
    case Observable::dc12_ddelta:
      return axis == SweepAxis::delta;
    case Observable::dc13_dd:
      return axis == SweepAxis::d;
    default:
      return false;
  }
}

bool differentiates_fixed(Observable obs, SweepAxis axis) {
  switch (obs) {
    case Observable::dc13_ddelta:
    case Observable::dc12_ddelta:
      return axis == SweepAxis::d;
    case Observable::dc13_dd:
      return axis == SweepAxis::delta;
    default:
      return false;
  }
}

double evaluate_observable(const Couplings& c, int n_steps, Observable obs) {
  switch (obs) {
    case Observable::c13:
      return concurrence_at_step(c, n_steps, SitePair::sites_13);
    case Observable::c12:
      return concurrence_at_step(c, n_steps, SitePair::sites_12);
    case Observable::eof13:
      return eof_at_step(c, n_steps, SitePair::sites_13);
    case Observable::dc13_ddelta:
      return dC_dDelta(c, n_steps, SitePair::sites_13);
    case Observable::dc13_dd:
      return dC_dD(c, n_steps, SitePair::sites_13);
    case Observable::dc12_ddelta:
      return dC_dDelta(c, n_steps, SitePair::sites_12);
  }
  throw std::invalid_argument("evaluate_observable: unknown observable");
}

// Static block partition; per-index work is independent, so any schedule
// reproduces the sequential result bit for bit.
template <typename Fn>
void parallel_for(size_t count, int threads, Fn fn) {
  const int usable =
      std::max(1, std::min<int>(threads, static_cast<int>(count)));
  if (usable == 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const size_t chunk = (count + usable - 1) / usable;
  for (int t = 0; t < usable; ++t) {
    const size_t lo = t * chunk;
    const size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi]() {
      try {
        for (size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct LeastSquares {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};

LeastSquares least_squares(const std::vector<std::pair<double, double>>& pts) {
  const double n = static_cast<double>(pts.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) {
    throw DegenerateFit("least_squares: all abscissae coincide");
  }
  LeastSquares out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double ss_res = 0.0;
  for (const auto& [x, y] : pts) {
    const double r = y - (out.slope * x + out.intercept);
    ss_res += r * r;
  }
  out.r_squared = (syy == 0.0) ? 1.0 : 1.0 - ss_res / syy;
  return out;
}

double ln_effective_size(int n_steps) {
  return (n_steps + 1) * std::log(3.0);
}

}  // namespace

const char* to_string(SweepAxis axis) {
  return axis == SweepAxis::delta ? "delta" : "d";
}

const char* to_string(Observable obs) {
  switch (obs) {
    case Observable::c13: return "c13";
    case Observable::c12: return "c12";
    case Observable::eof13: return "eof13";
    case Observable::dc13_ddelta: return "dc13_ddelta";
    case Observable::dc13_dd: return "dc13_dd";
    case Observable::dc12_ddelta: return "dc12_ddelta";
  }
  return "unknown";
}

SweepResult sweep(const Couplings& fixed, SweepAxis axis,
                  const std::vector<double>& grid, int n_steps, Observable obs,
                  int threads) {
  validate_grid(grid, "sweep");
  validate_steps(n_steps, "sweep");
  if (differentiates_axis(obs, axis) && grid.front() < kTol.fd_step_rel) {
    throw std::invalid_argument(
        "sweep: derivative observables need grid values >= the stencil step");
  }
  if (differentiates_fixed(obs, axis)) {
    const double fixed_val = (axis == SweepAxis::delta) ? fixed.d : fixed.delta;
    if (fixed_val < kTol.fd_step_rel) {
      throw std::invalid_argument(
          "sweep: the differentiated fixed coupling is below the stencil step");
    }
  }

  SweepResult out;
  out.axis = axis;
  out.grid = grid;
  out.n_steps = n_steps;
  out.effective_size = std::pow(3.0, n_steps + 1);
  out.fixed = fixed;
  out.values.assign(grid.size(), kNaN);
  out.delta_eff.assign(grid.size(), kNaN);
  out.j_eff.assign(grid.size(), kNaN);

  parallel_for(grid.size(), threads, [&](size_t i) {
    const Couplings point =
        (axis == SweepAxis::delta)
            ? Couplings(fixed.j, grid[i], fixed.d)
            : Couplings(fixed.j, fixed.delta, grid[i]);
    const FlowTrace trace = flow(point, n_steps);
    out.delta_eff[i] = trace.steps[n_steps].delta;
    out.j_eff[i] = trace.steps[n_steps].j;
    try {
      out.values[i] = evaluate_observable(point, n_steps, obs);
    } catch (const StepTooLarge&) {
      // recorded as missing; the rest of the sweep proceeds
    }
  });
  return out;
}

DerivativeMinimum find_derivative_minimum(
    const Couplings& fixed, int n_steps,
    const std::vector<double>& coarse_d_grid) {
  validate_grid(coarse_d_grid, "find_derivative_minimum");
  validate_steps(n_steps, "find_derivative_minimum");
  if (coarse_d_grid.size() < 3) {
    throw std::invalid_argument(
        "find_derivative_minimum: need at least 3 coarse grid points");
  }
  if (fixed.delta < kTol.fd_step_rel) {
    throw std::invalid_argument(
        "find_derivative_minimum: delta is below the stencil step");
  }

  const auto g = [&](double d_value) {
    return dC_dDelta(Couplings(fixed.j, fixed.delta, d_value), n_steps,
                     SitePair::sites_13);
  };

  size_t best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < coarse_d_grid.size(); ++i) {
    const double v = g(coarse_d_grid[i]);
    if (std::isfinite(v) && v < best_val) {
      best_val = v;
      best = i;
    }
  }
  if (!std::isfinite(best_val) || best == 0 ||
      best == coarse_d_grid.size() - 1) {
    throw NoMinimumBracketed(
        "find_derivative_minimum: no interior minimum of dC13/d(delta) on the "
        "coarse D grid (step count " + std::to_string(n_steps) + ")");
  }

  double a = coarse_d_grid[best - 1];
  double b = coarse_d_grid[best + 1];
  static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = g(c);
  double fd = g(d);
  while (b - a > kTol.golden_interval) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = g(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = g(d);
    }
  }
  DerivativeMinimum out;
  out.d_m = 0.5 * (a + b);
  out.min_value = g(out.d_m);
  return out;
}

namespace {

ScalingFit fit_log_log(const std::vector<std::pair<int, double>>& raw,
                       const char* who) {
  if (raw.size() < 3) {
    throw std::invalid_argument(std::string(who) + ": need at least 3 points");
  }
  ScalingFit fit;
  fit.points.reserve(raw.size());
  for (const auto& [n, y] : raw) {
    validate_steps(n, who);
    if (!(y > 0.0)) {
      throw std::invalid_argument(std::string(who) +
                                  ": log-log fit needs positive ordinates");
    }
    fit.points.emplace_back(ln_effective_size(n), std::log(y));
  }
  const LeastSquares ls = least_squares(fit.points);
  fit.slope = ls.slope;
  fit.intercept = ls.intercept;
  fit.r_squared = ls.r_squared;
  fit.nu_estimate = (ls.slope == 0.0) ? 0.0 : 1.0 / std::abs(ls.slope);
  return fit;
}

}  // namespace

ScalingFit fit_position_scaling(
    const std::vector<std::pair<int, double>>& position_by_step, double delta) {
  if (!(delta > 1.0)) {
    throw std::invalid_argument(
        "fit_position_scaling: delta must exceed 1 for a critical D to exist");
  }
  const double d_c = std::sqrt(delta * delta - 1.0);
  std::vector<std::pair<int, double>> distances;
  distances.reserve(position_by_step.size());
  for (const auto& [n, d_m] : position_by_step) {
    if (!(d_m < d_c)) {
      throw std::invalid_argument(
          "fit_position_scaling: every D_m must lie below the critical D");
    }
    distances.emplace_back(n, d_c - d_m);
  }
  return fit_log_log(distances, "fit_position_scaling");
}

ScalingFit fit_divergence_scaling(
    const std::vector<std::pair<int, double>>& minimum_by_step) {
  std::vector<std::pair<int, double>> magnitudes;
  magnitudes.reserve(minimum_by_step.size());
  for (const auto& [n, v] : minimum_by_step) {
    if (v == 0.0) {
      throw std::invalid_argument(
          "fit_divergence_scaling: minimum values must be nonzero");
    }
    magnitudes.emplace_back(n, std::abs(v));
  }
  return fit_log_log(magnitudes, "fit_divergence_scaling");
}

SurfaceResult singularity_surface(const std::vector<double>& delta_grid,
                                  const std::vector<double>& d_grid,
                                  int n_steps, int threads) {
  validate_grid(delta_grid, "singularity_surface");
  validate_grid(d_grid, "singularity_surface");
  validate_steps(n_steps, "singularity_surface");
  if (delta_grid.front() < kTol.fd_step_rel) {
    throw std::invalid_argument(
        "singularity_surface: delta grid must stay above the stencil step");
  }

  SurfaceResult out;
  out.delta_grid = delta_grid;
  out.d_grid = d_grid;
  out.n_steps = n_steps;
  out.effective_size = std::pow(3.0, n_steps + 1);
  out.values.assign(delta_grid.size() * d_grid.size(), kNaN);

  parallel_for(out.values.size(), threads, [&](size_t cell) {
    const size_t di = cell / delta_grid.size();
    const size_t xi = cell % delta_grid.size();
    try {
      out.values[cell] =
          dC_dDelta(Couplings(1.0, delta_grid[xi], d_grid[di]), n_steps,
                    SitePair::sites_13);
    } catch (const StepTooLarge&) {
    }
  });
  return out;
}

ScalingRun run_scaling_pipeline(double j, double delta, int n_lo, int n_hi,
                                const std::vector<double>& coarse_d_grid) {
  if (n_lo < 0 || n_hi > 64 || n_hi - n_lo < 2) {
    throw std::invalid_argument(
        "run_scaling_pipeline: need 0 <= n_lo, n_hi <= 64 spanning >= 3 steps");
  }
  if (!(delta > 1.0)) {
    throw std::invalid_argument(
        "run_scaling_pipeline: delta must exceed 1 for a critical D to exist");
  }
  const Couplings fixed(j, delta, 0.0);

  ScalingRun run;
  run.j = j;
  run.delta = delta;
  run.d_c = std::sqrt(delta * delta - 1.0);
  std::vector<std::pair<int, double>> positions;
  std::vector<std::pair<int, double>> minima;
  for (int n = n_lo; n <= n_hi; ++n) {
    const DerivativeMinimum m = find_derivative_minimum(fixed, n, coarse_d_grid);
    run.points.push_back(
        {n, std::pow(3.0, n + 1), m.d_m, m.min_value});
    positions.emplace_back(n, m.d_m);
    minima.emplace_back(n, m.min_value);
  }
  run.position_fit = fit_position_scaling(positions, delta);
  run.divergence_fit = fit_divergence_scaling(minima);
  return run;
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 1) {
    throw std::invalid_argument("linspace: points must be >= 1");
  }
  std::vector<double> out;
  out.reserve(points);
  if (points == 1) {
    out.push_back(0.5 * (lo + hi));
    return out;
  }
  const double step = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) out.push_back(lo + step * i);
  out.back() = hi;
  return out;
}

std::vector<double> default_scaling_grid() { return linspace(0.02, 0.998, 80); }

}  // namespace xxzdm
