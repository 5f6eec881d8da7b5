#pragma once

// Brute-force verification path: dense exact diagonalization of short chains
// with the same bond operator as the block model, plus direct pair
// concurrence from the numerical ground space. Deliberately simple; meant to
// cross-check the analytic doublet and the entanglement machinery, not to be
// fast.

#include <optional>
#include <vector>

#include "xxzdm/block_rg.hpp"
#include "xxzdm/spin_core.hpp"

namespace xxzdm {

enum class Boundary { open, periodic };

struct ChainSpec {
  int n_sites;
  Couplings couplings;
  Boundary boundary;

  ChainSpec(int n_sites_in, const Couplings& couplings_in, Boundary boundary_in);
};

// Dense 2^n x 2^n chain Hamiltonian; periodic adds the (n, 1) bond. For
// n_sites = 3 open this equals block_hamiltonian entrywise.
ComplexMatrix chain_hamiltonian(const ChainSpec& spec);

// Total sigma^z operator, for symmetry checks.
ComplexMatrix total_sz(int n_sites);

struct GroundSpace {
  double energy = 0.0;
  std::vector<PureState> states;  // orthonormal basis of the ground space
};

// All eigenvectors within the degeneracy tolerance of the lowest eigenvalue.
GroundSpace ground_state_ed(const ChainSpec& spec);

// 4x4 reduced density matrix of sites (a, b), a < b (1-based), from an
// n-qubit pure state. Site a is the left qubit of the pair basis.
ComplexMatrix reduced_pair_density(const PureState& state, int n_sites,
                                   int site_a, int site_b);

// Pair concurrence from the ED ground space. `canonical` is set for a unique
// ground state, and for the 3-site open chain where the analytic doublet
// fixes the gauge; `per_state` holds the (gauge-dependent) value for each
// numerical ground-space basis vector. Degeneracy above 2 is refused.
struct PairConcurrence {
  std::optional<double> canonical;
  std::vector<double> per_state;
  double ground_energy = 0.0;
  int degeneracy = 0;
};

PairConcurrence pair_concurrence_ed(const ChainSpec& spec, int site_a,
                                    int site_b);

}  // namespace xxzdm
