#include "xxzdm/block_rg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace xxzdm {

Couplings::Couplings(double j_in, double delta_in, double d_in)
    : j(j_in), delta(delta_in), d(d_in) {
  if (!std::isfinite(j) || j <= 0.0) {
    throw std::invalid_argument("Couplings: J must be finite and > 0");
  }
  if (!std::isfinite(delta) || delta < 0.0) {
    throw std::invalid_argument("Couplings: delta must be finite and >= 0");
  }
  if (!std::isfinite(d) || d < 0.0) {
    throw std::invalid_argument("Couplings: D must be finite and >= 0");
  }
}

double block_q(const Couplings& c) {
  return std::sqrt(c.delta * c.delta + 8.0 * (1.0 + c.d * c.d));
}

ComplexMatrix bond_operator(const Couplings& c) {
  const ComplexMatrix sx = pauli(PauliAxis::x);
  const ComplexMatrix sy = pauli(PauliAxis::y);
  const ComplexMatrix sz = pauli(PauliAxis::z);
  const ComplexMatrix planar = kron(sx, sx) + kron(sy, sy);
  const ComplexMatrix ising = kron(sz, sz);
  const ComplexMatrix dm = kron(sy, sx) - kron(sx, sy);
  return cplx(c.j / 4.0) *
         (planar + cplx(c.delta) * ising + cplx(c.d) * dm);
}

ComplexMatrix block_hamiltonian(const Couplings& c) {
  const ComplexMatrix bond = bond_operator(c);
  const ComplexMatrix i2 = ComplexMatrix::identity(2);
  return kron(bond, i2) + kron(i2, bond);
}

BlockGroundDoublet ground_doublet(const Couplings& c) {
  const double q = block_q(c);
  const double d = c.d;
  const double norm =
      std::sqrt(2.0 * q * (q + c.delta) * (1.0 + d * d));

  const cplx a1(2.0 * (d * d + 1.0), 0.0);
  const cplx a2 = -cplx(1.0, -d) * (c.delta + q);
  const cplx a3(-2.0 * (d * d - 1.0), -4.0 * d);

  BlockGroundDoublet out;
  out.q = q;
  out.energy = -(c.j / 4.0) * (c.delta + q);

  out.psi0.dim = 8;
  out.psi0.amplitudes.assign(8, cplx{});
  out.psi0.amplitudes[0b110] = a1 / norm;  // |ddu>
  out.psi0.amplitudes[0b101] = a2 / norm;  // |dud>
  out.psi0.amplitudes[0b011] = a3 / norm;  // |udd>

  out.psi0_prime.dim = 8;
  out.psi0_prime.amplitudes.assign(8, cplx{});
  out.psi0_prime.amplitudes[0b100] = a1 / norm;  // |duu>
  out.psi0_prime.amplitudes[0b010] = a2 / norm;  // |udu>
  out.psi0_prime.amplitudes[0b001] = a3 / norm;  // |uud>

  return out;
}

Couplings rg_step(const Couplings& c) {
  const double q = block_q(c);
  const double one_d2 = 1.0 + c.d * c.d;
  // J shrinks by at least half per step and underflows after enough
  // saturated iterations; floor it at the smallest normal positive value.
  const double j_next =
      std::max(c.j * (2.0 / q) * (2.0 / q) * one_d2,
               std::numeric_limits<double>::min());
  const double half_sum = (c.delta + q) / 4.0;
  const double delta_next = c.delta / one_d2 * half_sum * half_sum;
  return Couplings(j_next, delta_next, c.d);
}

FlowTrace flow(const Couplings& c, int n_steps) {
  if (n_steps < 0 || n_steps > 64) {
    throw std::invalid_argument("flow: n_steps must be in [0, 64]");
  }
  FlowTrace trace;
  trace.steps.reserve(n_steps + 1);
  trace.effective_sizes.reserve(n_steps + 1);
  trace.steps.push_back(c);
  double n_eff = 3.0;
  trace.effective_sizes.push_back(n_eff);

  Couplings cur = c;
  for (int n = 1; n <= n_steps; ++n) {
    const Couplings next = rg_step(cur);
    double delta = next.delta;
    if (delta > kTol.delta_cap) {
      delta = kTol.delta_cap;
      if (trace.first_saturated_step < 0) trace.first_saturated_step = n;
    }
    cur = Couplings(next.j, delta, next.d);
    trace.steps.push_back(cur);
    n_eff *= 3.0;
    trace.effective_sizes.push_back(n_eff);
  }
  return trace;
}

double critical_delta(double d) {
  if (!(d >= 0.0)) {
    throw std::invalid_argument("critical_delta: D must be >= 0");
  }
  return std::sqrt(1.0 + d * d);
}

double mapped_anisotropy(const Couplings& c) {
  return c.delta / std::sqrt(1.0 + c.d * c.d);
}

}  // namespace xxzdm
