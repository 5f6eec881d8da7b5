#pragma once

// Three-site block model of the anisotropic XY chain (XXZ) with a z-axis
// Dzyaloshinskii-Moriya term: block Hamiltonian, its analytic ground doublet,
// the coupling recursion obtained by projecting onto that doublet, and the
// phase-boundary helpers delta_c(D) = sqrt(1 + D^2).

#include <vector>

#include "xxzdm/spin_core.hpp"

namespace xxzdm {

// Model couplings. J sets the energy scale, delta the z anisotropy, d the
// DM strength. Negative d is rejected rather than gauged away.
struct Couplings {
  double j;
  double delta;
  double d;

  Couplings(double j_in, double delta_in, double d_in);
};

// q = sqrt(delta^2 + 8 (1 + d^2)); strictly positive on the whole domain.
double block_q(const Couplings& c);

// Two-site bond operator
//   (J/4) [ sx sx + sy sy + delta sz sz + d (sy sx - sx sy) ]
// acting on (left, right). The DM orientation is fixed so that the analytic
// doublet of ground_doublet() is an exact eigenvector; flipping it is the
// relabeling d -> -d and changes no spectrum or entanglement value.
ComplexMatrix bond_operator(const Couplings& c);

// 8x8 block Hamiltonian: two bonds, open boundary inside the block.
ComplexMatrix block_hamiltonian(const Couplings& c);

// The doubly degenerate analytic ground states of the block. psi0 lives on
// {|ddu>, |dud>, |udd>}, psi0_prime on the spin-flipped kets; both have
// energy -(J/4)(delta + q).
struct BlockGroundDoublet {
  PureState psi0;
  PureState psi0_prime;
  double q = 0.0;
  double energy = 0.0;
};

BlockGroundDoublet ground_doublet(const Couplings& c);

// One renormalization step:
//   J'     = J (2/q)^2 (1 + d^2)
//   delta' = delta / (1 + d^2) * ((delta + q)/4)^2
//   d'     = d
Couplings rg_step(const Couplings& c);

// Record of an iterated flow. steps[0] is the input; effective_sizes[n] is
// 3^(n+1), the chain length a step-n block stands for. Anisotropy values
// beyond the saturation cap are clamped and flagged.
struct FlowTrace {
  std::vector<Couplings> steps;
  std::vector<double> effective_sizes;
  int block_size = 3;
  int first_saturated_step = -1;  // -1 when the cap was never hit

  bool saturated() const { return first_saturated_step >= 0; }
  bool saturated_at_or_before(int n) const {
    return first_saturated_step >= 0 && first_saturated_step <= n;
  }
};

// Iterates rg_step n_steps times (0 <= n_steps <= 64).
FlowTrace flow(const Couplings& c, int n_steps);

// Phase boundary between the spin-fluid and Neel phases.
double critical_delta(double d);

// Canonical anisotropy delta / sqrt(1 + d^2); < 1 gapless spin fluid,
// > 1 gapped Neel, = 1 critical.
double mapped_anisotropy(const Couplings& c);

}  // namespace xxzdm
