#pragma once

// Small dense complex linear algebra and qubit primitives: Pauli operators,
// Kronecker products, a cyclic Jacobi eigensolver for Hermitian matrices,
// PSD square roots and partial traces of three-qubit pure states.
//
// Conventions used throughout: the qubit basis is ordered with |up> before
// |down>, and site 1 is the most significant factor in tensor products.

#include <array>
#include <complex>
#include <vector>

namespace xxzdm {

using cplx = std::complex<double>;

// Central tolerance record. Every numeric threshold in the library is a
// member here so the defaults live in exactly one place.
struct Tolerances {
  double hermitian_flag = 1e-12;      // max|A - A^dag| for "Hermitian" data
  double hermitian_input = 1e-10;     // eigensolver input check
  double eigen_reconstruction = 1e-10;
  double psd_reject = 1e-8;           // eigenvalue < -psd_reject is an error
  double normalization = 1e-12;       // pure-state norm invariant
  double state_check = 1e-9;          // runtime precondition on norms/traces
  double ground_residual = 1e-10;
  double degeneracy = 1e-10;
  double trace_one = 1e-12;
  double lambda_floor = 1e-13;        // eigenvalue floor in Wootters lambdas
  double fd_step_rel = 1e-5;          // finite-difference step scale
  double richardson_rel = 1e-6;       // half-step consistency target
  double golden_interval = 1e-6;      // golden-section refinement width
  double delta_cap = 1e12;            // anisotropy saturation cap
};

inline constexpr Tolerances kTol{};

// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(int rows, int cols);
  static ComplexMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  cplx& at(int r, int c) { return entries_[static_cast<size_t>(r) * cols_ + c]; }
  const cplx& at(int r, int c) const {
    return entries_[static_cast<size_t>(r) * cols_ + c];
  }
  std::vector<cplx>& entries() { return entries_; }
  const std::vector<cplx>& entries() const { return entries_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cplx> entries_;
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx scale, const ComplexMatrix& a);

ComplexMatrix adjoint(const ComplexMatrix& a);
ComplexMatrix conjugate(const ComplexMatrix& a);
cplx trace(const ComplexMatrix& a);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double hermiticity_error(const ComplexMatrix& a);  // max|A - A^dag|
double frobenius_norm(const ComplexMatrix& a);

// Normalized pure state of one or more qubits; dim must be a power of two.
struct PureState {
  int dim = 0;
  std::vector<cplx> amplitudes;

  // |sum of |amp|^2 - 1|
  double norm_error() const;
};

PureState basis_state(int dim, int index);

enum class PauliAxis { x, y, z };

// 2x2 Pauli matrix in the sigma^z eigenbasis, |up> first.
ComplexMatrix pauli(PauliAxis axis);

// Kronecker product; the left factor is the more significant one.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

struct Eigensystem {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix vectors;            // orthonormal columns, same order
};

// Cyclic Jacobi diagonalization of a Hermitian matrix. Throws
// NonHermitianInput if max|m - m^dag| exceeds the input tolerance.
Eigensystem hermitian_eigensystem(const ComplexMatrix& m);

// Hermitian PSD square root via the eigensystem. Eigenvalues in
// [-psd_reject, 0) are clamped to zero; below that NotPositiveSemidefinite
// is thrown.
ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m);

// Which pair of sites a two-qubit density matrix refers to.
enum class SitePair { sites_12, sites_13, sites_23 };
const char* to_string(SitePair pair);

// 4x4 density matrix of a site pair, basis {uu, ud, du, dd} with the lower
// site index as the left (more significant) qubit.
struct TwoQubitDensity {
  ComplexMatrix matrix;
  SitePair pair = SitePair::sites_13;
};

// Reduced density matrix of a normalized 3-qubit state after tracing out
// traced_site (1-based). The remaining sites keep ascending order.
TwoQubitDensity partial_trace(const PureState& state, int traced_site);

}  // namespace xxzdm
