#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <stdexcept>

#include "specwalk/eig.hpp"

namespace specwalk {

// Pauli string in symplectic form: i^{ipow} * X^x Z^z over up to 32 qubits,
// bit q of x/z addressing qubit q.
struct PauliString {
  std::uint32_t x = 0;
  std::uint32_t z = 0;
  int ipow = 0; // phase i^ipow, mod 4

  friend PauliString operator*(const PauliString& a, const PauliString& b) {
    // X^ax Z^az * X^bx Z^bz = (-1)^{|az & bx|} X^{ax^bx} Z^{az^bz}
    PauliString out;
    out.x = a.x ^ b.x;
    out.z = a.z ^ b.z;
    out.ipow = (a.ipow + b.ipow + 2 * (std::popcount(a.z & b.x) & 1)) & 3;
    return out;
  }
};

inline std::complex<double> phase_of(int ipow) {
  switch (ipow & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// Jordan-Wigner Majorana m = 0..2N-1 on site j = m/2:
//   even m -> Z_0..Z_{j-1} X_j,  odd m -> Z_0..Z_{j-1} Y_j  (Y = i X Z),
// normalized so chi^2 = 1 and {chi_a, chi_b} = 2 delta_ab.
inline PauliString majorana(int m, int n_qubits) {
  if (m < 0 || m >= 2 * n_qubits) throw std::invalid_argument("majorana: index out of range");
  const int j = m / 2;
  PauliString p;
  p.x = std::uint32_t{1} << j;
  p.z = (std::uint32_t{1} << j) - 1;
  if (m & 1) {
    p.z |= std::uint32_t{1} << j;
    p.ipow = 1;
  }
  return p;
}

// H += coeff * i^{ipow} X^x Z^z on the dense matrix:
// (X^x Z^z)|s> = (-1)^{|z & s|} |s ^ x>.
inline void accumulate_pauli(DenseHermitian& h, const PauliString& p, double coeff) {
  const std::complex<double> c = coeff * phase_of(p.ipow);
  const std::uint32_t dim = static_cast<std::uint32_t>(h.dim);
  for (std::uint32_t s = 0; s < dim; ++s) {
    const double sign = (std::popcount(p.z & s) & 1) ? -1.0 : 1.0;
    h.at(static_cast<int>(s ^ p.x), static_cast<int>(s)) += sign * c;
  }
}

} // namespace specwalk
