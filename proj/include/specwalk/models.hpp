#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "specwalk/eig.hpp"
#include "specwalk/pauli.hpp"
#include "specwalk/rng.hpp"
#include "specwalk/spectrum.hpp"
#include "specwalk/version.hpp"

namespace specwalk {

namespace detail {

// Adds coeff * (sx sx + sy sy + Delta sz sz) acting on sites (a, b) of an
// L-qubit chain. The xx+yy part flips anti-aligned pairs with amplitude 2;
// zz is diagonal. Coincident sites (periodic wrap on tiny chains) reduce to
// the identity in each factor.
inline void add_xxz_bond(DenseHermitian& h, int a, int b, double coeff, double delta) {
  const int dim = h.dim;
  if (a == b) {
    for (int s = 0; s < dim; ++s) h.at(s, s) += coeff * (2.0 + delta);
    return;
  }
  const std::uint32_t ma = std::uint32_t{1} << a;
  const std::uint32_t mb = std::uint32_t{1} << b;
  for (std::uint32_t s = 0; s < static_cast<std::uint32_t>(dim); ++s) {
    const bool za = s & ma;
    const bool zb = s & mb;
    h.at(s, s) += coeff * delta * (za == zb ? 1.0 : -1.0);
    if (za != zb) h.at(static_cast<int>(s ^ (ma | mb)), static_cast<int>(s)) += 2.0 * coeff;
  }
}

} // namespace detail

// XXZ chain with next-nearest-neighbor coupling alpha, periodic boundaries
// on both terms:
//   H = sum_j (sx_j sx_{j+1} + sy_j sy_{j+1} + Delta sz_j sz_{j+1})
//     + alpha * sum_j (sx_j sx_{j+2} + sy_j sy_{j+2} + Delta sz_j sz_{j+2}).
// Quasi-free at Delta=alpha=0, Bethe-Ansatz integrable at alpha=0,
// non-integrable otherwise.
inline DenseHermitian build_xxz_nnn(int L, double delta, double alpha) {
  if (L < 2 || L > 14) throw std::invalid_argument("build_xxz_nnn: L must be in [2,14]");
  if (!std::isfinite(delta) || !std::isfinite(alpha))
    throw std::invalid_argument("build_xxz_nnn: non-finite parameters");
  DenseHermitian h(1 << L);
  for (int j = 0; j < L; ++j) {
    detail::add_xxz_bond(h, j, (j + 1) % L, 1.0, delta);
    if (alpha != 0.0) detail::add_xxz_bond(h, j, (j + 2) % L, alpha, delta);
  }
  return h;
}

// XY chain one-particle spectrum over the Brillouin zone k = 2 pi n / L,
//   Lambda_k = 2 sqrt(gamma^2 + h^2 + (1 - gamma^2) cos^2 k + 2 h cos k),
// with offset E_0 = -(1/2) sum_k Lambda_k (periodic fermionic boundaries).
inline OneParticleSpectrum build_xy_one_particle(int L, double h, double gamma,
                                                 double tol = kDefaultDegeneracyTol) {
  if (L < 2) throw std::invalid_argument("build_xy_one_particle: L must be >= 2");
  if (!std::isfinite(h) || !std::isfinite(gamma))
    throw std::invalid_argument("build_xy_one_particle: non-finite parameters");
  std::vector<double> lam(L);
  KahanSum total;
  for (int n = 0; n < L; ++n) {
    const double c = std::cos(2.0 * M_PI * n / L);
    const double inner = gamma * gamma + h * h + (1.0 - gamma * gamma) * c * c + 2.0 * h * c;
    lam[n] = 2.0 * std::sqrt(std::max(inner, 0.0));
    total.add(lam[n]);
  }
  std::sort(lam.begin(), lam.end());
  const auto clusters = detail::cluster_ascending(lam, tol);

  OneParticleSpectrum ops;
  ops.n_modes = L;
  ops.offset = -0.5 * total.value();
  for (const auto& c : clusters) {
    ops.distinct_levels.push_back(c.mean);
    ops.degeneracies.push_back(static_cast<int>(c.multiplicity));
  }
  ops.meta = {{"model", "xy"}, {"L", L}, {"h", h}, {"gamma", gamma}, {"tol", tol}};
  ops.validate();
  return ops;
}

// SYK-k on n_majorana = 2N Majorana modes:
//   H = i^{k/2} sum_{i1<...<ik} J_{i1..ik} chi_{i1} ... chi_{ik},
// couplings i.i.d. Gaussian with mean 0 and variance (k-1)! J / n_majorana^{k-1},
// drawn in lexicographic tuple order from a seeded generator (deterministic).
inline DenseHermitian build_syk(int n_majorana, int k, double j_coupling, std::uint64_t seed) {
  if (n_majorana < 2 || n_majorana % 2 != 0)
    throw std::invalid_argument("build_syk: n_majorana must be a positive even integer");
  if (k < 2 || k % 2 != 0 || k > n_majorana)
    throw std::invalid_argument("build_syk: k must be even with 2 <= k <= n_majorana");
  const int n_qubits = n_majorana / 2;
  if (n_qubits > 10) throw std::invalid_argument("build_syk: over dense-ED budget (N <= 10)");
  if (!(j_coupling > 0.0) || !std::isfinite(j_coupling))
    throw std::invalid_argument("build_syk: J must be positive and finite");

  double fac = 1.0;
  for (int i = 2; i < k; ++i) fac *= i;
  const double sd = std::sqrt(fac * j_coupling / std::pow(n_majorana, k - 1));

  DenseHermitian h(1 << n_qubits);
  Rng rng(seed);
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    PauliString p = majorana(idx[0], n_qubits);
    for (int i = 1; i < k; ++i) p = p * majorana(idx[i], n_qubits);
    p.ipow = (p.ipow + k / 2) & 3;
    accumulate_pauli(h, p, sd * rng.normal());

    // next k-combination of [0, n_majorana)
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n_majorana - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
  return h;
}

inline nlohmann::json syk_meta(int n_majorana, int k, double j_coupling, std::uint64_t seed) {
  return {{"model", "syk"},      {"n_majorana", n_majorana}, {"k", k},
          {"J", j_coupling},     {"seed", seed},             {"rng", kRngScheme}};
}

} // namespace specwalk
