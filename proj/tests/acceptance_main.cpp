// Acceptance suite: one check per shipped criterion, each printed as a
// single [PASS]/[FAIL] line with the measured numbers. The process exit code
// is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli_support.hpp"
#include "test_helpers.hpp"
#include "xxzdm/ed_oracle.hpp"
#include "xxzdm/entanglement.hpp"
#include "xxzdm/errors.hpp"
#include "xxzdm/scaling.hpp"

using namespace xxzdm;
using namespace xxzdm::testing;

namespace {

const double kSqrt2 = std::sqrt(2.0);

struct Outcome {
  bool pass = false;
  std::string detail;
};

double residual_norm(const ComplexMatrix& h, const PureState& psi, double e0) {
  double sum = 0.0;
  for (int i = 0; i < h.rows(); ++i) {
    cplx acc = -e0 * psi.amplitudes[i];
    for (int j = 0; j < h.cols(); ++j) acc += h.at(i, j) * psi.amplitudes[j];
    sum += std::norm(acc);
  }
  return std::sqrt(sum);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// 1. Analytic doublet lies in the numerical ground eigenspace, which is
//    exactly twofold degenerate, on a 10x10 coupling grid. Budget: 1 s.
Outcome criterion_1(double elapsed_limit, double* elapsed_out) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_residual = 0.0;
  double worst_split = 0.0;
  double min_gap = 1e300;
  for (int i = 0; i < 10; ++i) {
    for (int k = 0; k < 10; ++k) {
      const Couplings c(1.0, 3.0 * i / 9.0, 3.0 * k / 9.0);
      const ComplexMatrix h = block_hamiltonian(c);
      const Eigensystem es = hermitian_eigensystem(h);
      const BlockGroundDoublet doublet = ground_doublet(c);
      worst_residual = std::max(
          worst_residual, residual_norm(h, doublet.psi0, es.eigenvalues[0]));
      worst_residual = std::max(
          worst_residual,
          residual_norm(h, doublet.psi0_prime, es.eigenvalues[0]));
      worst_split = std::max(worst_split,
                             es.eigenvalues[1] - es.eigenvalues[0]);
      min_gap = std::min(min_gap, es.eigenvalues[2] - es.eigenvalues[0]);
    }
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  *elapsed_out = elapsed;
  Outcome out;
  out.pass = worst_residual <= 1e-10 && worst_split <= 1e-10 &&
             min_gap > 1e-10 && elapsed < elapsed_limit;
  out.detail = "max residual " + fmt(worst_residual) + ", max doublet split " +
               fmt(worst_split) + ", next gap >= " + fmt(min_gap);
  return out;
}

// 2. The critical line is a fixed line of the coupling recursion.
Outcome criterion_2() {
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double d = 3.0 * k / 99.0;
    const double dc = critical_delta(d);
    const Couplings next = rg_step(Couplings(1.0, dc, d));
    worst = std::max(worst, std::abs(next.delta - dc));
  }
  Outcome out;
  out.pass = worst <= 1e-12;
  out.detail = "max |delta' - delta_c| = " + fmt(worst) + " over 100 D values";
  return out;
}

// 3. C13 at zero anisotropy equals one half for every DM strength, and the
//    exact-diagonalization oracle independently confirms it.
Outcome criterion_3() {
  double worst_direct = 0.0;
  double worst_oracle = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double d = 3.0 * k / 49.0;
    const Couplings c(1.0, 0.0, d);
    const double direct =
        concurrence(reduced_density(c, SitePair::sites_13)).concurrence;
    worst_direct = std::max(worst_direct, std::abs(direct - 0.5));
    const PairConcurrence oracle =
        pair_concurrence_ed(ChainSpec(3, c, Boundary::open), 1, 3);
    worst_oracle = std::max(worst_oracle, std::abs(*oracle.canonical - 0.5));
  }
  Outcome out;
  out.pass = worst_direct <= 1e-9 && worst_oracle <= 1e-9;
  out.detail = "max |C13 - 1/2|: direct " + fmt(worst_direct) + ", oracle " +
               fmt(worst_oracle);
  return out;
}

// 4. Step-8 plateau shape over D in [0, 2]: <= 1e-4 below D = 0.9, within
//    1e-4 of one half above D = 1.1, transition inside (0.9, 1.1). Budget 5 s.
Outcome criterion_4(double elapsed_limit, double* elapsed_out) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> grid = linspace(0.0, 2.0, 200);
  double worst_low = 0.0;
  double worst_high = 0.0;
  double last_below_quarter = -1.0;
  double first_above_quarter = 3.0;
  for (double d : grid) {
    const double c13 =
        concurrence_at_step(Couplings(1.0, kSqrt2, d), 8, SitePair::sites_13);
    if (d <= 0.9) worst_low = std::max(worst_low, c13);
    if (d >= 1.1) worst_high = std::max(worst_high, std::abs(c13 - 0.5));
    if (c13 < 0.25) last_below_quarter = std::max(last_below_quarter, d);
    if (c13 > 0.25) first_above_quarter = std::min(first_above_quarter, d);
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  *elapsed_out = elapsed;
  const bool transition_localized = last_below_quarter > 0.9 &&
                                    last_below_quarter < 1.1 &&
                                    first_above_quarter > 0.9 &&
                                    first_above_quarter < 1.1;
  Outcome out;
  out.pass = worst_low <= 1e-4 && worst_high <= 1e-4 && transition_localized &&
             elapsed < elapsed_limit;
  out.detail = "max C13 below D=0.9: " + fmt(worst_low) +
               "; max |C13-1/2| above D=1.1: " + fmt(worst_high) +
               " (bound 1e-4); transition in (" + fmt(last_below_quarter) +
               ", " + fmt(first_above_quarter) + ")";
  return out;
}

// 5. Scaling fits over steps 2..7 land in the [0.41, 0.51] band with
//    r^2 >= 0.98. Budget 120 s.
Outcome criterion_5(double elapsed_limit, double* elapsed_out,
                    ScalingRun* run_out) {
  const auto t0 = std::chrono::steady_clock::now();
  const ScalingRun run =
      run_scaling_pipeline(1.0, kSqrt2, 2, 7, default_scaling_grid());
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  *elapsed_out = elapsed;
  *run_out = run;
  const double pos = std::abs(run.position_fit.slope);
  const double div = std::abs(run.divergence_fit.slope);
  Outcome out;
  out.pass = pos >= 0.41 && pos <= 0.51 && div >= 0.41 && div <= 0.51 &&
             run.position_fit.r_squared >= 0.98 &&
             run.divergence_fit.r_squared >= 0.98 && elapsed < elapsed_limit;
  out.detail = "position slope " + fmt(run.position_fit.slope) + " (r2 " +
               fmt(run.position_fit.r_squared) + "), divergence slope " +
               fmt(run.divergence_fit.slope) + " (r2 " +
               fmt(run.divergence_fit.r_squared) + ")";
  return out;
}

// 6. On a 60x60 surface at step 6, the per-column extremum of |dC13/ddelta|
//    lies within one grid cell of the critical line for >= 90% of columns.
//    Budget 300 s.
Outcome criterion_6(double elapsed_limit, double* elapsed_out) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> delta_grid = linspace(1.0, 2.5, 60);
  const std::vector<double> d_grid = linspace(0.0, 2.0, 60);
  const SurfaceResult surface = singularity_surface(delta_grid, d_grid, 6);
  const double cell = delta_grid[1] - delta_grid[0];
  int within = 0;
  double worst_offset = 0.0;
  for (size_t di = 0; di < d_grid.size(); ++di) {
    double best = -1.0;
    size_t best_xi = 0;
    for (size_t xi = 0; xi < delta_grid.size(); ++xi) {
      const double v = std::abs(surface.values[di * delta_grid.size() + xi]);
      if (std::isfinite(v) && v > best) {
        best = v;
        best_xi = xi;
      }
    }
    const double offset =
        std::abs(delta_grid[best_xi] - critical_delta(d_grid[di]));
    worst_offset = std::max(worst_offset, offset);
    if (offset <= cell + 1e-12) ++within;
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  *elapsed_out = elapsed;
  Outcome out;
  const double fraction = within / 60.0;
  out.pass = fraction >= 0.9 && elapsed < elapsed_limit;
  out.detail = std::to_string(within) + "/60 columns within one cell (" +
               fmt(cell) + "); worst offset " + fmt(worst_offset);
  return out;
}

// 7. Growth from step 4 to step 8 over D in [0.5, 1.5]: |dC13/dD| by less
//    than 3x while |dC13/ddelta| by more than 10x.
Outcome criterion_7() {
  const std::vector<double> window = linspace(0.5, 1.5, 101);
  double max_dd[2] = {0.0, 0.0};
  double max_ddelta[2] = {0.0, 0.0};
  const int steps[2] = {4, 8};
  for (int s = 0; s < 2; ++s) {
    for (double d : window) {
      const Couplings c(1.0, kSqrt2, d);
      max_dd[s] = std::max(max_dd[s],
                           std::abs(dC_dD(c, steps[s], SitePair::sites_13)));
      max_ddelta[s] = std::max(
          max_ddelta[s], std::abs(dC_dDelta(c, steps[s], SitePair::sites_13)));
    }
  }
  const double dd_factor = max_dd[1] / max_dd[0];
  const double ddelta_factor = max_ddelta[1] / max_ddelta[0];
  Outcome out;
  out.pass = dd_factor < 3.0 && ddelta_factor > 10.0;
  out.detail = "|dC/dD| growth " + fmt(dd_factor) +
               " (bound < 3), |dC/ddelta| growth " + fmt(ddelta_factor) +
               " (bound > 10)";
  return out;
}

// 8. Boundary-pair trends: C13 non-decreasing and C12 non-increasing in D at
//    step 0; C12 ~ 0 below D = 0.9 at step 8.
Outcome criterion_8() {
  const std::vector<double> grid = linspace(0.0, 2.0, 100);
  bool c13_monotone = true;
  bool c12_monotone = true;
  double prev13 = -1.0;
  double prev12 = 2.0;
  double worst_c12_neel = 0.0;
  for (double d : grid) {
    const Couplings c(1.0, kSqrt2, d);
    const double c13 = concurrence_at_step(c, 0, SitePair::sites_13);
    const double c12 = concurrence_at_step(c, 0, SitePair::sites_12);
    if (c13 < prev13 - 1e-12) c13_monotone = false;
    if (c12 > prev12 + 1e-12) c12_monotone = false;
    prev13 = c13;
    prev12 = c12;
    if (d < 0.9) {
      worst_c12_neel = std::max(
          worst_c12_neel,
          concurrence_at_step(c, 8, SitePair::sites_12));
    }
  }
  Outcome out;
  out.pass = c13_monotone && c12_monotone && worst_c12_neel <= 1e-4;
  out.detail = std::string("C13 non-decreasing: ") +
               (c13_monotone ? "yes" : "no") + "; C12 non-increasing: " +
               (c12_monotone ? "yes" : "no") +
               "; step-8 C12 below D=0.9: max " + fmt(worst_c12_neel);
  return out;
}

// 9. Wootters property suite over 1000 random densities plus the textbook
//    special cases.
Outcome criterion_9() {
  std::mt19937_64 rng(20260810);
  double worst_x_gap = 0.0;
  int x_checked = 0;
  bool range_ok = true;
  for (int trial = 0; trial < 1000; ++trial) {
    ComplexMatrix rho(4, 4);
    if (trial % 2 == 0) {
      const PureState psi = random_pure_state(rng, 8);
      rho = partial_trace(psi, 1 + trial % 3).matrix;
    } else {
      rho = partial_trace(random_sector_state(rng), 2).matrix;
    }
    const double c = concurrence_of_matrix(rho).concurrence;
    if (!(c >= 0.0 && c <= 1.0)) range_ok = false;
    if (is_x_structured(rho)) {
      ++x_checked;
      worst_x_gap =
          std::max(worst_x_gap, std::abs(c - x_state_concurrence(rho)));
    }
  }

  // Bell states reach exactly one; product states exactly zero.
  double bell_gap = 0.0;
  const double r = 1.0 / kSqrt2;
  const std::vector<std::vector<cplx>> bells = {
      {r, 0, 0, r}, {r, 0, 0, -r}, {0, r, r, 0}, {0, r, -r, 0}};
  for (const auto& amps : bells) {
    ComplexMatrix rho(4, 4);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        rho.at(i, j) = amps[i] * std::conj(amps[j]);
      }
    }
    const ConcurrenceResult res = concurrence_of_matrix(rho);
    bell_gap = std::max(bell_gap, std::abs(res.concurrence - 1.0));
    bell_gap = std::max(bell_gap, std::abs(res.eof - 1.0));
  }
  double product_gap = 0.0;
  for (int idx = 0; idx < 4; ++idx) {
    ComplexMatrix rho(4, 4);
    rho.at(idx, idx) = 1.0;
    product_gap =
        std::max(product_gap, concurrence_of_matrix(rho).concurrence);
  }

  Outcome out;
  out.pass = range_ok && worst_x_gap <= 1e-10 && bell_gap <= 1e-12 &&
             product_gap <= 1e-12 && x_checked >= 400;
  out.detail = "range ok: " + std::string(range_ok ? "yes" : "no") +
               "; X-form cases " + std::to_string(x_checked) +
               ", worst closed-form gap " + fmt(worst_x_gap) +
               "; Bell gap " + fmt(bell_gap) + "; product gap " +
               fmt(product_gap);
  return out;
}

// 10. Two runs of the criterion-5 pipeline serialize to identical bytes.
Outcome criterion_10(const ScalingRun& first_run) {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "xxzdm_acceptance";
  std::filesystem::create_directories(dir);
  const std::filesystem::path a = dir / "scaling_run_a.json";
  const std::filesystem::path b = dir / "scaling_run_b.json";
  cli::atomic_write(a, cli::scaling_json(first_run).dump(2) + "\n");
  const ScalingRun second =
      run_scaling_pipeline(1.0, kSqrt2, 2, 7, default_scaling_grid());
  cli::atomic_write(b, cli::scaling_json(second).dump(2) + "\n");

  const auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const std::string bytes_a = slurp(a);
  const std::string bytes_b = slurp(b);
  std::filesystem::remove(a);
  std::filesystem::remove(b);

  Outcome out;
  out.pass = !bytes_a.empty() && bytes_a == bytes_b;
  out.detail = out.pass ? "byte-identical scaling output ("
                              + std::to_string(bytes_a.size()) + " bytes)"
                        : "outputs differ";
  return out;
}

}  // namespace

int main() {
  int failures = 0;
  const auto report = [&](int index, const char* title, const Outcome& outcome,
                          double elapsed) {
    if (!outcome.pass) ++failures;
    std::printf("[%s] criterion %d (%.2fs): %s -- %s\n",
                outcome.pass ? "PASS" : "FAIL", index, elapsed, title,
                outcome.detail.c_str());
    std::fflush(stdout);
  };

  const auto timed = [](const std::function<Outcome()>& fn, double* elapsed) {
    const auto t0 = std::chrono::steady_clock::now();
    const Outcome out = fn();
    *elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return out;
  };

  double elapsed = 0.0;

  Outcome o1 = criterion_1(1.0, &elapsed);
  report(1, "analytic doublet spans the degenerate ground space", o1, elapsed);

  Outcome o2 = timed(criterion_2, &elapsed);
  report(2, "critical line is a fixed line of the recursion", o2, elapsed);

  Outcome o3 = timed(criterion_3, &elapsed);
  report(3, "zero-anisotropy concurrence is one half", o3, elapsed);

  Outcome o4 = criterion_4(5.0, &elapsed);
  report(4, "step-8 plateau shape across the transition", o4, elapsed);

  ScalingRun run5;
  Outcome o5 = criterion_5(120.0, &elapsed, &run5);
  report(5, "scaling exponents inside the 0.41..0.51 band", o5, elapsed);

  Outcome o6 = criterion_6(300.0, &elapsed);
  report(6, "derivative extrema trace the critical line", o6, elapsed);

  Outcome o7 = timed(criterion_7, &elapsed);
  report(7, "derivative growth along D versus along delta", o7, elapsed);

  Outcome o8 = timed(criterion_8, &elapsed);
  report(8, "boundary-pair monotonicity and step-8 collapse", o8, elapsed);

  Outcome o9 = timed(criterion_9, &elapsed);
  report(9, "Wootters property suite on random densities", o9, elapsed);

  Outcome o10 = timed([&] { return criterion_10(run5); }, &elapsed);
  report(10, "byte-identical repeat of the scaling pipeline", o10, elapsed);

  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures;
}
