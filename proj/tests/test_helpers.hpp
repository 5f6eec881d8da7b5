#pragma once

// Shared generators and independent closed-form oracles for the test suites.

#include <cmath>
#include <random>

#include "xxzdm/spin_core.hpp"

namespace xxzdm::testing {

inline ComplexMatrix random_matrix(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix m(n, n);
  for (auto& e : m.entries()) e = cplx(gauss(rng), gauss(rng));
  return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, int n) {
  const ComplexMatrix b = random_matrix(rng, n);
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m.at(i, j) = 0.5 * (b.at(i, j) + std::conj(b.at(j, i)));
    }
  }
  return m;
}

inline ComplexMatrix random_psd(std::mt19937_64& rng, int n) {
  const ComplexMatrix b = random_matrix(rng, n);
  return adjoint(b) * b;
}

inline PureState random_pure_state(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  PureState s;
  s.dim = dim;
  s.amplitudes.resize(dim);
  double norm = 0.0;
  for (auto& a : s.amplitudes) {
    a = cplx(gauss(rng), gauss(rng));
    norm += std::norm(a);
  }
  norm = std::sqrt(norm);
  for (auto& a : s.amplitudes) a /= norm;
  return s;
}

// Random 3-qubit state supported on {|ddu>, |dud>, |udd>}; its pair
// reductions all have X structure.
inline PureState random_sector_state(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  PureState s;
  s.dim = 8;
  s.amplitudes.assign(8, cplx{});
  double norm = 0.0;
  for (int idx : {0b110, 0b101, 0b011}) {
    s.amplitudes[idx] = cplx(gauss(rng), gauss(rng));
    norm += std::norm(s.amplitudes[idx]);
  }
  norm = std::sqrt(norm);
  for (int idx : {0b110, 0b101, 0b011}) s.amplitudes[idx] /= norm;
  return s;
}

// Random full-rank X-structured two-qubit density matrix.
inline ComplexMatrix random_x_density(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double p[4];
  double total = 0.0;
  for (double& v : p) {
    v = 0.05 + uni(rng);
    total += v;
  }
  for (double& v : p) v /= total;
  const double r14 = 0.95 * uni(rng);
  const double r23 = 0.95 * uni(rng);
  const double th14 = 2.0 * M_PI * uni(rng);
  const double th23 = 2.0 * M_PI * uni(rng);
  ComplexMatrix rho(4, 4);
  rho.at(0, 0) = p[0];
  rho.at(1, 1) = p[1];
  rho.at(2, 2) = p[2];
  rho.at(3, 3) = p[3];
  rho.at(0, 3) = std::polar(r14 * std::sqrt(p[0] * p[3]), th14);
  rho.at(3, 0) = std::conj(rho.at(0, 3));
  rho.at(1, 2) = std::polar(r23 * std::sqrt(p[1] * p[2]), th23);
  rho.at(2, 1) = std::conj(rho.at(1, 2));
  return rho;
}

inline bool is_x_structured(const ComplexMatrix& rho, double tol = 1e-13) {
  for (const auto& [r, c] : {std::pair{0, 1}, {0, 2}, {1, 3}, {2, 3}}) {
    if (std::abs(rho.at(r, c)) > tol || std::abs(rho.at(c, r)) > tol) {
      return false;
    }
  }
  return true;
}

// Closed-form concurrence of an X-structured density matrix.
inline double x_state_concurrence(const ComplexMatrix& rho) {
  const double a = std::abs(rho.at(1, 2)) -
                   std::sqrt(std::abs(rho.at(0, 0) * rho.at(3, 3)));
  const double b = std::abs(rho.at(0, 3)) -
                   std::sqrt(std::abs(rho.at(1, 1) * rho.at(2, 2)));
  return 2.0 * std::max({0.0, a, b});
}

// Concurrence closed forms obtained by tracing the analytic block ground
// state by hand; independent of the matrix pipeline under test.
inline double c13_closed(double delta, double d) {
  const double q = std::sqrt(delta * delta + 8.0 * (1.0 + d * d));
  return 4.0 * (1.0 + d * d) / (q * (q + delta));
}

inline double c12_closed(double delta, double d) {
  const double q = std::sqrt(delta * delta + 8.0 * (1.0 + d * d));
  return 2.0 * std::sqrt(1.0 + d * d) / q;
}

}  // namespace xxzdm::testing
