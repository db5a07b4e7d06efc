#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <lapacke.h>

namespace specwalk {

// Dense Hermitian matrix, row-major. dim = 2^L for qubit models.
struct DenseHermitian {
  int dim = 0;
  std::vector<std::complex<double>> a;

  explicit DenseHermitian(int d = 0) : dim(d), a(static_cast<std::size_t>(d) * d) {}

  std::complex<double>& at(int r, int c) { return a[static_cast<std::size_t>(r) * dim + c]; }
  const std::complex<double>& at(int r, int c) const {
    return a[static_cast<std::size_t>(r) * dim + c];
  }
};

// ||A - A^dagger||_F / ||A||_F (0 for the zero matrix).
inline double hermiticity_defect(const DenseHermitian& h) {
  long double num = 0.0L, den = 0.0L;
  for (int r = 0; r < h.dim; ++r) {
    for (int c = 0; c < h.dim; ++c) {
      const auto d = h.at(r, c) - std::conj(h.at(c, r));
      num += std::norm(d);
      den += std::norm(h.at(r, c));
    }
  }
  if (den == 0.0L) return 0.0;
  return static_cast<double>(std::sqrt(num / den));
}

inline bool is_exactly_real(const DenseHermitian& h) {
  for (const auto& v : h.a)
    if (v.imag() != 0.0) return false;
  return true;
}

// All eigenvalues, ascending. Real-symmetric inputs (the spin-chain builders
// produce exact zeros in the imaginary parts) take the dsyevd path; anything
// else goes through zheevd. Eigenvalues only, no vectors.
inline std::vector<double> diagonalize(const DenseHermitian& h, double herm_tol = 1e-12) {
  if (h.dim < 1) throw std::invalid_argument("diagonalize: empty matrix");
  const double defect = hermiticity_defect(h);
  if (defect > herm_tol)
    throw std::invalid_argument("diagonalize: matrix not Hermitian (relative Frobenius defect " +
                                std::to_string(defect) + ")");
  const int n = h.dim;
  std::vector<double> w(n);
  lapack_int info = 0;
  if (is_exactly_real(h)) {
    std::vector<double> m(static_cast<std::size_t>(n) * n);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = h.a[i].real();
    // Row/column order is immaterial for the eigenvalues of a symmetric matrix.
    info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, m.data(), n, w.data());
  } else {
    std::vector<std::complex<double>> m(h.a);
    // For Hermitian A, the column-major view of a row-major buffer is A^T =
    // conj(A), which has the same (real) eigenvalues.
    info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n,
                          reinterpret_cast<lapack_complex_double*>(m.data()), n, w.data());
  }
  if (info != 0) throw std::runtime_error("diagonalize: LAPACK failed, info=" + std::to_string(info));
  return w;
}

} // namespace specwalk
