#pragma once

// Two-qubit entanglement of the block ground state: reduced density
// matrices, Wootters concurrence, entanglement of formation, and central
// finite differences of the concurrence with respect to the bare couplings
// (the coupling flow is recomputed at every perturbed input).

#include <array>

#include "xxzdm/block_rg.hpp"
#include "xxzdm/spin_core.hpp"

namespace xxzdm {

// h(x) = -x log2 x - (1-x) log2(1-x), with h(0) = h(1) = 0.
double binary_entropy(double x);

struct ConcurrenceResult {
  std::array<double, 4> lambdas{};  // descending
  double concurrence = 0.0;         // max(l1 - l2 - l3 - l4, 0)
  double eof = 0.0;                 // h(1/2 + sqrt(1 - C^2)/2)
};

// (sy x sy) conj(rho) (sy x sy) for a raw 4x4 density matrix.
ComplexMatrix spin_flipped_matrix(const ComplexMatrix& rho);
ComplexMatrix spin_flipped(const TwoQubitDensity& rho);

// Wootters lambdas are the square roots of the eigenvalues of the Hermitian
// sandwich sqrt(rho) rho~ sqrt(rho), which shares its spectrum with rho rho~.
// Sandwich eigenvalues below the lambda floor count as exact zeros so that
// rank-deficient densities do not pick up sqrt(noise) contributions.
ConcurrenceResult concurrence_of_matrix(const ComplexMatrix& rho);
ConcurrenceResult concurrence(const TwoQubitDensity& rho);

// Reduced density matrix of the requested side pair of the block in the
// analytic ground state psi0. sites_13 traces out site 2, sites_12 site 3.
TwoQubitDensity reduced_density(const Couplings& c, SitePair pair);

// Concurrence of the pair after n RG steps, evaluated at the renormalized
// couplings. Defined as exactly zero once the flow has saturated (the
// product-state limit of the Neel basin).
double concurrence_at_step(const Couplings& c, int n_steps, SitePair pair);

// Entanglement of formation at step n; monotone in the concurrence.
double eof_at_step(const Couplings& c, int n_steps, SitePair pair);

// Central finite difference together with its half-step and Richardson
// companions; `value` is the plain h-stencil.
struct Derivative {
  double value = 0.0;
  double half_step = 0.0;
  double richardson = 0.0;
  double rel_inconsistency = 0.0;  // |value - richardson| / max(1, |richardson|)
};

// d/d(delta) of concurrence_at_step at fixed (J, D), step h = 1e-5 max(1, delta).
// Throws StepTooLarge when the saturation flag differs across a stencil pair.
Derivative dC_dDelta_detail(const Couplings& c, int n_steps, SitePair pair);
double dC_dDelta(const Couplings& c, int n_steps, SitePair pair);

// d/dD of concurrence_at_step at fixed (J, delta), same stencil policy.
Derivative dC_dD_detail(const Couplings& c, int n_steps, SitePair pair);
double dC_dD(const Couplings& c, int n_steps, SitePair pair);

}  // namespace xxzdm
