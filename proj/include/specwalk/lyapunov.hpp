#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "specwalk/numeric.hpp"
#include "specwalk/spectrum.hpp"

namespace specwalk {

// R_q^n = sum_{j<=n} d_j^{2q} / (sum_{j<=n} d_j^2)^q over the first n weights
// in ascending-energy order. Lyapunov condition: exists q > 1 with R_q^n -> 0.
// Weights are normalized by their running maximum first; the ratio is scale
// invariant and this keeps the powers inside double range at any temperature.
inline double r_ratio(std::span<const double> weights, double q, std::size_t n) {
  if (n < 1 || n > weights.size()) throw std::invalid_argument("r_ratio: n out of range");
  if (!(q >= 1.0)) throw std::invalid_argument("r_ratio: q must be >= 1");
  double m = 0.0;
  for (std::size_t j = 0; j < n; ++j) m = std::max(m, weights[j]);
  if (!(m > 0.0)) throw std::invalid_argument("r_ratio: weights must be positive");
  KahanSum num, den;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = weights[j] / m;
    num.add(std::pow(w, 2.0 * q));
    den.add(w * w);
  }
  return num.value() / std::pow(den.value(), q);
}

// Windowed ratio R_q^N(h,s) = sum_{k=floor(Ns)+1}^{floor(N(s+h))} d_k^{2q}
// / (sum_{k<=N} d_k^2)^q. The Wiener check is lim R_1^N(h,s) = h.
inline double r_windowed(std::span<const double> weights, double q, std::size_t N, double h,
                         double s) {
  if (N < 1 || N > weights.size()) throw std::invalid_argument("r_windowed: N out of range");
  if (!(q >= 1.0)) throw std::invalid_argument("r_windowed: q must be >= 1");
  if (!(s >= 0.0) || !(h >= 0.0)) throw std::invalid_argument("r_windowed: s, h must be >= 0");
  const auto lo = static_cast<std::size_t>(std::floor(static_cast<double>(N) * s));
  const auto hi = static_cast<std::size_t>(std::floor(static_cast<double>(N) * (s + h)));
  if (hi > weights.size()) throw std::invalid_argument("r_windowed: window out of range");
  double m = 0.0;
  for (std::size_t j = 0; j < N; ++j) m = std::max(m, weights[j]);
  if (!(m > 0.0)) throw std::invalid_argument("r_windowed: weights must be positive");
  KahanSum den;
  for (std::size_t j = 0; j < N; ++j) {
    const double w = weights[j] / m;
    den.add(w * w);
  }
  KahanSum num;
  for (std::size_t k = lo; k < hi; ++k) {
    const double w = weights[k] / m;
    num.add(std::pow(w, 2.0 * q));
  }
  return num.value() / std::pow(den.value(), q);
}

// Free-fermion condition ratio S_q^{L_B} = sum g_j^q / (sum g_j^2)^{q/2},
// q > 2. The log-normal limit law needs some q > 2 with S_q -> 0.
inline double s_ratio(std::span<const int> degeneracies, double q) {
  if (!(q > 2.0)) throw std::invalid_argument("s_ratio: q must be > 2");
  if (degeneracies.empty()) throw std::invalid_argument("s_ratio: empty degeneracies");
  KahanSum num, den;
  for (int g : degeneracies) {
    if (g < 1) throw std::invalid_argument("s_ratio: degeneracies must be >= 1");
    const double gd = g;
    num.add(std::pow(gd, q));
    den.add(gd * gd);
  }
  return num.value() / std::pow(den.value(), q / 2.0);
}

struct LyapunovScanRow {
  int L = 0;          // label from spectrum meta (0 if absent)
  std::size_t n_b = 0;
  double q = 0.0;
  double R = 0.0; // R_q^{N_B}
};

struct LyapunovReport {
  std::vector<double> qs;
  std::vector<LyapunovScanRow> by_size;          // R_q^{N_B} per spectrum
  std::vector<std::vector<double>> profile;      // [qi][n-1] = R_q^n at largest spectrum
  std::size_t profile_n_b = 0;
};

// Tabulates R_q^{N_B} across a family of spectra (typically increasing L)
// and the full prefix profile R_q^n at the largest one.
inline LyapunovReport lyapunov_scan(std::span<const WeightedSpectrum> spectra,
                                    std::span<const double> qs) {
  if (spectra.empty()) throw std::invalid_argument("lyapunov_scan: no spectra");
  LyapunovReport rep;
  rep.qs.assign(qs.begin(), qs.end());
  std::size_t largest = 0;
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    const auto& sp = spectra[i];
    int L = 0;
    if (sp.meta.contains("L") && sp.meta["L"].is_number_integer()) L = sp.meta["L"];
    for (double q : qs)
      rep.by_size.push_back({L, sp.size(), q, r_ratio(sp.weights, q, sp.size())});
    if (sp.size() > spectra[largest].size()) largest = i;
  }
  const auto& big = spectra[largest];
  rep.profile_n_b = big.size();
  rep.profile.resize(qs.size());
  for (std::size_t qi = 0; qi < qs.size(); ++qi) {
    rep.profile[qi].resize(big.size());
    // Incremental prefix sums, renormalized whenever the running max weight
    // grows so the powers stay inside double range (the ratio itself is
    // scale invariant).
    const double q = qs[qi];
    double m = big.weights[0];
    double num = 1.0, den = 1.0; // sums of (w/m)^{2q} and (w/m)^2
    rep.profile[qi][0] = 1.0;
    for (std::size_t n = 1; n < big.size(); ++n) {
      const double w = big.weights[n];
      if (w > m) {
        const double r = m / w;
        num *= std::pow(r, 2.0 * q);
        den *= r * r;
        m = w;
      }
      const double x = w / m;
      num += std::pow(x, 2.0 * q);
      den += x * x;
      rep.profile[qi][n] = num / std::pow(den, q);
    }
  }
  return rep;
}

} // namespace specwalk
