#include "xxzdm/spin_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "xxzdm/errors.hpp"

namespace xxzdm {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b,
                        const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch");
  }
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

ComplexMatrix::ComplexMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), entries_(static_cast<size_t>(rows) * cols) {
  if (rows <= 0 || cols <= 0) {
    throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
  }
}

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "operator+");
  ComplexMatrix out(a.rows(), a.cols());
  for (size_t i = 0; i < out.entries().size(); ++i) {
    out.entries()[i] = a.entries()[i] + b.entries()[i];
  }
  return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "operator-");
  ComplexMatrix out(a.rows(), a.cols());
  for (size_t i = 0; i < out.entries().size(); ++i) {
    out.entries()[i] = a.entries()[i] - b.entries()[i];
  }
  return out;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("operator*: inner dimensions differ");
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const cplx aik = a.at(i, k);
      if (aik == cplx{}) continue;
      for (int j = 0; j < b.cols(); ++j) {
        out.at(i, j) += aik * b.at(k, j);
      }
    }
  }
  return out;
}

ComplexMatrix operator*(cplx scale, const ComplexMatrix& a) {
  ComplexMatrix out(a.rows(), a.cols());
  for (size_t i = 0; i < out.entries().size(); ++i) {
    out.entries()[i] = scale * a.entries()[i];
  }
  return out;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      out.at(j, i) = std::conj(a.at(i, j));
    }
  }
  return out;
}

ComplexMatrix conjugate(const ComplexMatrix& a) {
  ComplexMatrix out(a.rows(), a.cols());
  for (size_t i = 0; i < out.entries().size(); ++i) {
    out.entries()[i] = std::conj(a.entries()[i]);
  }
  return out;
}

cplx trace(const ComplexMatrix& a) {
  cplx t = 0.0;
  for (int i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a.at(i, i);
  return t;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double worst = 0.0;
  for (size_t i = 0; i < a.entries().size(); ++i) {
    worst = std::max(worst, std::abs(a.entries()[i] - b.entries()[i]));
  }
  return worst;
}

double hermiticity_error(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("hermiticity_error: matrix not square");
  }
  double worst = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = i; j < a.cols(); ++j) {
      worst = std::max(worst, std::abs(a.at(i, j) - std::conj(a.at(j, i))));
    }
  }
  return worst;
}

double frobenius_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (const cplx& e : a.entries()) sum += std::norm(e);
  return std::sqrt(sum);
}

double PureState::norm_error() const {
  double sum = 0.0;
  for (const cplx& a : amplitudes) sum += std::norm(a);
  return std::abs(sum - 1.0);
}

PureState basis_state(int dim, int index) {
  if (!is_power_of_two(dim)) {
    throw std::invalid_argument("basis_state: dim must be a power of two");
  }
  if (index < 0 || index >= dim) {
    throw std::invalid_argument("basis_state: index out of range");
  }
  PureState s;
  s.dim = dim;
  s.amplitudes.assign(dim, cplx{});
  s.amplitudes[index] = 1.0;
  return s;
}

ComplexMatrix pauli(PauliAxis axis) {
  ComplexMatrix m(2, 2);
  switch (axis) {
    case PauliAxis::x:
      m.at(0, 1) = 1.0;
      m.at(1, 0) = 1.0;
      break;
    case PauliAxis::y:
      m.at(0, 1) = cplx(0.0, -1.0);
      m.at(1, 0) = cplx(0.0, 1.0);
      break;
    case PauliAxis::z:
      m.at(0, 0) = 1.0;
      m.at(1, 1) = -1.0;
      break;
  }
  return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int ia = 0; ia < a.rows(); ++ia) {
    for (int ja = 0; ja < a.cols(); ++ja) {
      const cplx av = a.at(ia, ja);
      if (av == cplx{}) continue;
      for (int ib = 0; ib < b.rows(); ++ib) {
        for (int jb = 0; jb < b.cols(); ++jb) {
          out.at(ia * b.rows() + ib, ja * b.cols() + jb) = av * b.at(ib, jb);
        }
      }
    }
  }
  return out;
}

Eigensystem hermitian_eigensystem(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("hermitian_eigensystem: matrix not square");
  }
  const double herm_err = hermiticity_error(m);
  if (herm_err > kTol.hermitian_input) {
    throw NonHermitianInput("hermitian_eigensystem: max|m - m^dag| = " +
                            std::to_string(herm_err));
  }

  const int n = m.rows();
  // Work on the Hermitized copy so the sub-tolerance asymmetry of the input
  // cannot leak into the rotations.
  ComplexMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a.at(i, j) = 0.5 * (m.at(i, j) + std::conj(m.at(j, i)));
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(1.0, frobenius_norm(a));
  const double conv = 1e-15 * scale;
  const int max_sweeps = 100;

  auto off_norm = [&]() {
    double sum = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) sum += std::norm(a.at(p, q));
    }
    return std::sqrt(2.0 * sum);
  };

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off_norm() <= conv) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cplx apq = a.at(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const cplx phase = apq / mag;
        const double app = a.at(p, p).real();
        const double aqq = a.at(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        // smaller-magnitude root of t^2 + 2*tau*t - 1 = 0
        const double t =
            (tau == 0.0)
                ? 1.0
                : ((tau > 0.0 ? 1.0 : -1.0) /
                   (std::abs(tau) + std::sqrt(1.0 + tau * tau)));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const cplx s = (t * c) * phase;
        const cplx s_conj = std::conj(s);

        // columns p,q of a
        for (int k = 0; k < n; ++k) {
          const cplx akp = a.at(k, p);
          const cplx akq = a.at(k, q);
          a.at(k, p) = c * akp - s_conj * akq;
          a.at(k, q) = s * akp + c * akq;
        }
        // rows p,q of a
        for (int k = 0; k < n; ++k) {
          const cplx apk = a.at(p, k);
          const cplx aqk = a.at(q, k);
          a.at(p, k) = c * apk - s * aqk;
          a.at(q, k) = s_conj * apk + c * aqk;
        }
        a.at(p, q) = 0.0;
        a.at(q, p) = 0.0;
        // accumulate eigenvectors
        for (int k = 0; k < n; ++k) {
          const cplx vkp = v.at(k, p);
          const cplx vkq = v.at(k, q);
          v.at(k, p) = c * vkp - s_conj * vkq;
          v.at(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (sweep == max_sweeps && off_norm() > 1e-10 * scale) {
    throw std::runtime_error("hermitian_eigensystem: Jacobi did not converge");
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return a.at(i, i).real() < a.at(j, j).real();
  });

  Eigensystem out;
  out.eigenvalues.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    out.eigenvalues[j] = a.at(order[j], order[j]).real();
    for (int i = 0; i < n; ++i) out.vectors.at(i, j) = v.at(i, order[j]);
  }
  return out;
}

ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m) {
  Eigensystem es = hermitian_eigensystem(m);
  const int n = m.rows();
  for (double ev : es.eigenvalues) {
    if (ev < -kTol.psd_reject) {
      throw NotPositiveSemidefinite("matrix_sqrt_psd: eigenvalue " +
                                    std::to_string(ev));
    }
  }
  // Eigenvalues at the roundoff floor of a rank-deficient input would
  // otherwise contribute sqrt(noise); treat them as exact zeros.
  const double floor =
      64.0 * std::numeric_limits<double>::epsilon() *
      std::max(std::abs(es.eigenvalues.front()), std::abs(es.eigenvalues.back()));
  ComplexMatrix out(n, n);
  for (int k = 0; k < n; ++k) {
    const double clamped =
        es.eigenvalues[k] <= floor ? 0.0 : es.eigenvalues[k];
    const double root = std::sqrt(clamped);
    if (root == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      const cplx vik = es.vectors.at(i, k);
      if (vik == cplx{}) continue;
      for (int j = 0; j < n; ++j) {
        out.at(i, j) += root * vik * std::conj(es.vectors.at(j, k));
      }
    }
  }
  // symmetrize away roundoff
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const cplx half = 0.5 * (out.at(i, j) + std::conj(out.at(j, i)));
      out.at(i, j) = half;
      out.at(j, i) = std::conj(half);
    }
  }
  return out;
}

const char* to_string(SitePair pair) {
  switch (pair) {
    case SitePair::sites_12: return "sites_12";
    case SitePair::sites_13: return "sites_13";
    case SitePair::sites_23: return "sites_23";
  }
  return "unknown";
}

TwoQubitDensity partial_trace(const PureState& state, int traced_site) {
  if (state.dim != 8 || state.amplitudes.size() != 8) {
    throw std::invalid_argument("partial_trace: expected a 3-qubit state");
  }
  if (traced_site < 1 || traced_site > 3) {
    throw std::invalid_argument("partial_trace: traced_site must be 1, 2 or 3");
  }
  if (state.norm_error() > kTol.state_check) {
    throw std::invalid_argument("partial_trace: state is not normalized");
  }

  // site k occupies bit (3 - k); site 1 is most significant
  int keep[2];
  int w = 0;
  for (int site = 1; site <= 3; ++site) {
    if (site != traced_site) keep[w++] = site;
  }
  const int shift_keep0 = 3 - keep[0];
  const int shift_keep1 = 3 - keep[1];
  const int shift_traced = 3 - traced_site;

  TwoQubitDensity rho;
  rho.matrix = ComplexMatrix(4, 4);
  rho.pair = (traced_site == 1)   ? SitePair::sites_23
             : (traced_site == 2) ? SitePair::sites_13
                                  : SitePair::sites_12;
  for (int r = 0; r < 4; ++r) {
    const int r0 = (r >> 1) & 1;
    const int r1 = r & 1;
    for (int c = 0; c < 4; ++c) {
      const int c0 = (c >> 1) & 1;
      const int c1 = c & 1;
      cplx sum = 0.0;
      for (int t = 0; t < 2; ++t) {
        const int row_idx =
            (r0 << shift_keep0) | (r1 << shift_keep1) | (t << shift_traced);
        const int col_idx =
            (c0 << shift_keep0) | (c1 << shift_keep1) | (t << shift_traced);
        sum += state.amplitudes[row_idx] * std::conj(state.amplitudes[col_idx]);
      }
      rho.matrix.at(r, c) = sum;
    }
  }
  return rho;
}

}  // namespace xxzdm
