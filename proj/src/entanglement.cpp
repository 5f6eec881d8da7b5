#include "xxzdm/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "xxzdm/errors.hpp"

namespace xxzdm {

namespace {

void validate_density(const ComplexMatrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) {
    throw std::invalid_argument("concurrence: density matrix must be 4x4");
  }
  if (hermiticity_error(rho) > kTol.hermitian_input) {
    throw std::invalid_argument("concurrence: density matrix not Hermitian");
  }
  if (std::abs(trace(rho) - cplx(1.0)) > kTol.state_check) {
    throw std::invalid_argument("concurrence: density matrix trace != 1");
  }
}

ComplexMatrix hermitized(const ComplexMatrix& m) {
  ComplexMatrix out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      out.at(i, j) = 0.5 * (m.at(i, j) + std::conj(m.at(j, i)));
    }
  }
  return out;
}

struct StepEvaluation {
  double concurrence = 0.0;
  bool saturated = false;
};

StepEvaluation evaluate_step(const Couplings& c, int n_steps, SitePair pair) {
  FlowTrace trace = flow(c, n_steps);
  if (trace.saturated_at_or_before(n_steps)) {
    return {0.0, true};
  }
  const Couplings& eff = trace.steps[n_steps];
  return {concurrence(reduced_density(eff, pair)).concurrence, false};
}

// Shared stencil driver: `shift` builds the perturbed couplings.
template <typename ShiftFn>
Derivative central_difference(int n_steps, SitePair pair, double h,
                              ShiftFn shift) {
  const auto eval = [&](double offset) {
    return evaluate_step(shift(offset), n_steps, pair);
  };
  const StepEvaluation plus = eval(h);
  const StepEvaluation minus = eval(-h);
  if (plus.saturated != minus.saturated) {
    throw StepTooLarge("central difference: saturation flag flips across the "
                       "h stencil; no reliable slope at this point");
  }
  const StepEvaluation plus_half = eval(0.5 * h);
  const StepEvaluation minus_half = eval(-0.5 * h);
  if (plus_half.saturated != minus_half.saturated) {
    throw StepTooLarge("central difference: saturation flag flips across the "
                       "h/2 stencil; no reliable slope at this point");
  }

  Derivative d;
  d.value = (plus.concurrence - minus.concurrence) / (2.0 * h);
  d.half_step = (plus_half.concurrence - minus_half.concurrence) / h;
  d.richardson = (4.0 * d.half_step - d.value) / 3.0;
  d.rel_inconsistency =
      std::abs(d.value - d.richardson) / std::max(1.0, std::abs(d.richardson));
  return d;
}

}  // namespace

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

ComplexMatrix spin_flipped_matrix(const ComplexMatrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) {
    throw std::invalid_argument("spin_flipped: expected a 4x4 matrix");
  }
  const ComplexMatrix yy = kron(pauli(PauliAxis::y), pauli(PauliAxis::y));
  return yy * conjugate(rho) * yy;
}

ComplexMatrix spin_flipped(const TwoQubitDensity& rho) {
  return spin_flipped_matrix(rho.matrix);
}

ConcurrenceResult concurrence_of_matrix(const ComplexMatrix& rho) {
  validate_density(rho);
  const ComplexMatrix rho_h = hermitized(rho);
  const ComplexMatrix root = matrix_sqrt_psd(rho_h);
  const ComplexMatrix sandwich =
      hermitized(root * spin_flipped_matrix(rho_h) * root);

  Eigensystem es = hermitian_eigensystem(sandwich);
  ConcurrenceResult out;
  for (int k = 0; k < 4; ++k) {
    double ev = es.eigenvalues[k];
    if (ev < kTol.lambda_floor) ev = 0.0;
    out.lambdas[3 - k] = std::sqrt(ev);  // descending
  }
  out.concurrence = std::max(
      out.lambdas[0] - out.lambdas[1] - out.lambdas[2] - out.lambdas[3], 0.0);
  out.eof = binary_entropy(
      0.5 + 0.5 * std::sqrt(std::max(0.0, 1.0 - out.concurrence * out.concurrence)));
  return out;
}

ConcurrenceResult concurrence(const TwoQubitDensity& rho) {
  return concurrence_of_matrix(rho.matrix);
}

TwoQubitDensity reduced_density(const Couplings& c, SitePair pair) {
  if (pair != SitePair::sites_12 && pair != SitePair::sites_13) {
    throw std::invalid_argument(
        "reduced_density: pair must be sites_12 or sites_13");
  }
  const BlockGroundDoublet doublet = ground_doublet(c);
  const int traced_site = (pair == SitePair::sites_13) ? 2 : 3;
  return partial_trace(doublet.psi0, traced_site);
}

double concurrence_at_step(const Couplings& c, int n_steps, SitePair pair) {
  return evaluate_step(c, n_steps, pair).concurrence;
}

double eof_at_step(const Couplings& c, int n_steps, SitePair pair) {
  const double conc = concurrence_at_step(c, n_steps, pair);
  return binary_entropy(0.5 + 0.5 * std::sqrt(std::max(0.0, 1.0 - conc * conc)));
}

Derivative dC_dDelta_detail(const Couplings& c, int n_steps, SitePair pair) {
  const double h = kTol.fd_step_rel * std::max(1.0, c.delta);
  if (c.delta < h) {
    throw std::invalid_argument("dC_dDelta: delta must be >= the step size");
  }
  return central_difference(n_steps, pair, h, [&](double offset) {
    return Couplings(c.j, c.delta + offset, c.d);
  });
}

double dC_dDelta(const Couplings& c, int n_steps, SitePair pair) {
  return dC_dDelta_detail(c, n_steps, pair).value;
}

Derivative dC_dD_detail(const Couplings& c, int n_steps, SitePair pair) {
  const double h = kTol.fd_step_rel * std::max(1.0, c.d);
  if (c.d < h) {
    throw std::invalid_argument("dC_dD: D must be >= the step size");
  }
  return central_difference(n_steps, pair, h, [&](double offset) {
    return Couplings(c.j, c.delta, c.d + offset);
  });
}

double dC_dD(const Couplings& c, int n_steps, SitePair pair) {
  return dC_dD_detail(c, n_steps, pair).value;
}

}  // namespace xxzdm
