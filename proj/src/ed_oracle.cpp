#include "xxzdm/ed_oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "xxzdm/entanglement.hpp"
#include "xxzdm/errors.hpp"

namespace xxzdm {

namespace {

// Bit position of 1-based site k in an n-site basis index (site 1 is most
// significant).
int site_shift(int n_sites, int site) { return n_sites - site; }

}  // namespace

ChainSpec::ChainSpec(int n_sites_in, const Couplings& couplings_in,
                     Boundary boundary_in)
    : n_sites(n_sites_in), couplings(couplings_in), boundary(boundary_in) {
  if (n_sites < 2 || n_sites > 12) {
    throw std::invalid_argument("ChainSpec: n_sites must be in [2, 12]");
  }
}

ComplexMatrix chain_hamiltonian(const ChainSpec& spec) {
  const int n = spec.n_sites;
  const int dim = 1 << n;
  const Couplings& c = spec.couplings;

  std::vector<std::pair<int, int>> bonds;
  for (int site = 1; site < n; ++site) bonds.emplace_back(site, site + 1);
  if (spec.boundary == Boundary::periodic) bonds.emplace_back(n, 1);

  // Matches bond_operator(): flipping (down,up) -> (up,down) carries
  // (J/2)(1 - i D); the reverse carries the conjugate.
  const cplx hop_plus(0.5 * c.j, 0.5 * c.j * -c.d);
  const cplx hop_minus = std::conj(hop_plus);
  const double ising = 0.25 * c.j * c.delta;

  ComplexMatrix h(dim, dim);
  for (int col = 0; col < dim; ++col) {
    for (const auto& [a, b] : bonds) {
      const int sa = site_shift(n, a);
      const int sb = site_shift(n, b);
      const int bit_a = (col >> sa) & 1;
      const int bit_b = (col >> sb) & 1;
      const double za = 1.0 - 2.0 * bit_a;
      const double zb = 1.0 - 2.0 * bit_b;
      h.at(col, col) += ising * za * zb;
      if (bit_a != bit_b) {
        const int row = col ^ (1 << sa) ^ (1 << sb);
        h.at(row, col) += (bit_a == 1) ? hop_plus : hop_minus;
      }
    }
  }
  return h;
}

ComplexMatrix total_sz(int n_sites) {
  const int dim = 1 << n_sites;
  ComplexMatrix sz(dim, dim);
  for (int idx = 0; idx < dim; ++idx) {
    int up = 0;
    for (int site = 1; site <= n_sites; ++site) {
      up += 1 - ((idx >> site_shift(n_sites, site)) & 1);
    }
    sz.at(idx, idx) = 2.0 * up - n_sites;
  }
  return sz;
}

GroundSpace ground_state_ed(const ChainSpec& spec) {
  const ComplexMatrix h = chain_hamiltonian(spec);
  Eigensystem es = hermitian_eigensystem(h);

  GroundSpace out;
  out.energy = es.eigenvalues.front();
  const int dim = h.rows();
  for (int k = 0; k < dim; ++k) {
    if (es.eigenvalues[k] > out.energy + kTol.degeneracy) break;
    PureState state;
    state.dim = dim;
    state.amplitudes.resize(dim);
    for (int i = 0; i < dim; ++i) state.amplitudes[i] = es.vectors.at(i, k);
    out.states.push_back(std::move(state));
  }
  return out;
}

ComplexMatrix reduced_pair_density(const PureState& state, int n_sites,
                                   int site_a, int site_b) {
  if (site_a < 1 || site_b <= site_a || site_b > n_sites) {
    throw std::invalid_argument(
        "reduced_pair_density: need 1 <= site_a < site_b <= n_sites");
  }
  const int dim = 1 << n_sites;
  if (state.dim != dim || static_cast<int>(state.amplitudes.size()) != dim) {
    throw std::invalid_argument("reduced_pair_density: state dimension mismatch");
  }
  const int sa = site_shift(n_sites, site_a);
  const int sb = site_shift(n_sites, site_b);
  const int mask = (1 << sa) | (1 << sb);

  ComplexMatrix rho(4, 4);
  for (int idx = 0; idx < dim; ++idx) {
    const int rest = idx & ~mask;
    if (rest != idx) continue;  // enumerate environment configurations once
    for (int r = 0; r < 4; ++r) {
      const int row_idx = rest | (((r >> 1) & 1) << sa) | ((r & 1) << sb);
      for (int col = 0; col < 4; ++col) {
        const int col_idx = rest | (((col >> 1) & 1) << sa) | ((col & 1) << sb);
        rho.at(r, col) +=
            state.amplitudes[row_idx] * std::conj(state.amplitudes[col_idx]);
      }
    }
  }
  return rho;
}

PairConcurrence pair_concurrence_ed(const ChainSpec& spec, int site_a,
                                    int site_b) {
  GroundSpace ground = ground_state_ed(spec);
  const int degeneracy = static_cast<int>(ground.states.size());
  if (degeneracy > 2) {
    throw AmbiguousGroundSpace(
        "pair_concurrence_ed: ground space dimension " +
        std::to_string(degeneracy) + " leaves the pair state undefined");
  }

  PairConcurrence out;
  out.ground_energy = ground.energy;
  out.degeneracy = degeneracy;
  for (const PureState& state : ground.states) {
    const ComplexMatrix rho =
        reduced_pair_density(state, spec.n_sites, site_a, site_b);
    out.per_state.push_back(concurrence_of_matrix(rho).concurrence);
  }

  if (degeneracy == 1) {
    out.canonical = out.per_state.front();
  } else if (spec.n_sites == 3 && spec.boundary == Boundary::open) {
    // The analytic doublet fixes the gauge for the 3-site block.
    const BlockGroundDoublet doublet = ground_doublet(spec.couplings);
    const ComplexMatrix h = chain_hamiltonian(spec);
    double residual = 0.0;
    for (int i = 0; i < 8; ++i) {
      cplx acc = -ground.energy * doublet.psi0.amplitudes[i];
      for (int j = 0; j < 8; ++j) acc += h.at(i, j) * doublet.psi0.amplitudes[j];
      residual += std::norm(acc);
    }
    if (std::sqrt(residual) > kTol.ground_residual) {
      throw AmbiguousGroundSpace(
          "pair_concurrence_ed: analytic doublet is not in the numerical "
          "ground space");
    }
    const ComplexMatrix rho =
        reduced_pair_density(doublet.psi0, spec.n_sites, site_a, site_b);
    out.canonical = concurrence_of_matrix(rho).concurrence;
  }
  return out;
}

}  // namespace xxzdm
