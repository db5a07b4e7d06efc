#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "specwalk/numeric.hpp"

namespace specwalk {

inline constexpr double kDefaultDegeneracyTol = 1e-8;

// Distinct ascending energies E_j with positive weights d_j = tr(rho Pi_j).
// This is the generator of the planar walk: at step j the walker turns by
// t*E_j and advances by d_j.
struct WeightedSpectrum {
  std::vector<double> energies; // strictly ascending cluster means
  std::vector<double> weights;  // d_j > 0
  double beta = 0.0;
  nlohmann::json meta;          // model name/params, L, tol, seed, ...

  std::size_t size() const { return energies.size(); }

  double weight_norm2() const { // (Delta Z_{N_B})^2 = sum d_j^2
    KahanSum s;
    for (double d : weights) s.add(d * d);
    return s.value();
  }

  void validate() const {
    if (energies.empty() || energies.size() != weights.size())
      throw std::invalid_argument("WeightedSpectrum: energies/weights size mismatch or empty");
    for (std::size_t j = 0; j < weights.size(); ++j) {
      if (!(weights[j] > 0.0) || !std::isfinite(weights[j]))
        throw std::invalid_argument("WeightedSpectrum: weights must be positive and finite");
      if (!std::isfinite(energies[j]))
        throw std::invalid_argument("WeightedSpectrum: non-finite energy");
      if (j > 0 && !(energies[j] > energies[j - 1]))
        throw std::invalid_argument("WeightedSpectrum: energies must be strictly ascending");
    }
    if (!(beta >= 0.0)) throw std::invalid_argument("WeightedSpectrum: beta must be nonnegative");
  }
};

// One-particle levels Lambda_k grouped into distinct eps_j with degeneracies
// g_j, plus the constant offset E_0 of the many-body spectrum.
struct OneParticleSpectrum {
  std::vector<double> distinct_levels; // ascending eps_j
  std::vector<int> degeneracies;       // g_j >= 1
  double offset = 0.0;                 // E_0
  int n_modes = 0;                     // L = sum g_j
  nlohmann::json meta;

  std::size_t size() const { return distinct_levels.size(); }

  // sum g_j^2, the normalization of the log-SFF central limit theorem.
  double degeneracy_norm2() const {
    double s = 0.0;
    for (int g : degeneracies) s += static_cast<double>(g) * g;
    return s;
  }

  void validate() const {
    if (distinct_levels.empty() || distinct_levels.size() != degeneracies.size())
      throw std::invalid_argument("OneParticleSpectrum: levels/degeneracies size mismatch or empty");
    int total = 0;
    for (std::size_t j = 0; j < distinct_levels.size(); ++j) {
      if (degeneracies[j] < 1) throw std::invalid_argument("OneParticleSpectrum: degeneracy < 1");
      if (j > 0 && !(distinct_levels[j] > distinct_levels[j - 1]))
        throw std::invalid_argument("OneParticleSpectrum: levels must be strictly ascending");
      total += degeneracies[j];
    }
    if (total != n_modes)
      throw std::invalid_argument("OneParticleSpectrum: sum of degeneracies != n_modes");
  }

  std::vector<double> expanded_levels() const {
    std::vector<double> out;
    out.reserve(n_modes);
    for (std::size_t j = 0; j < distinct_levels.size(); ++j)
      for (int r = 0; r < degeneracies[j]; ++r) out.push_back(distinct_levels[j]);
    return out;
  }
};

namespace detail {

struct Cluster {
  double mean;
  std::size_t multiplicity;
};

// Two consecutive eigenvalues share a cluster iff their gap is <= tol
// (absolute). Cluster energy is the arithmetic mean of its members.
inline std::vector<Cluster> cluster_ascending(std::span<const double> eigenvalues, double tol) {
  if (eigenvalues.empty()) throw std::invalid_argument("cluster_ascending: empty input");
  if (!(tol > 0.0)) throw std::invalid_argument("cluster_ascending: tol must be positive");
  for (std::size_t i = 1; i < eigenvalues.size(); ++i)
    if (eigenvalues[i] < eigenvalues[i - 1])
      throw std::invalid_argument("cluster_ascending: input not ascending");

  std::vector<Cluster> out;
  KahanSum acc;
  acc.add(eigenvalues[0]);
  std::size_t count = 1;
  for (std::size_t i = 1; i < eigenvalues.size(); ++i) {
    if (eigenvalues[i] - eigenvalues[i - 1] <= tol) {
      acc.add(eigenvalues[i]);
      ++count;
    } else {
      out.push_back({acc.value() / static_cast<double>(count), count});
      acc = KahanSum{};
      acc.add(eigenvalues[i]);
      count = 1;
    }
  }
  out.push_back({acc.value() / static_cast<double>(count), count});
  return out;
}

} // namespace detail

// Clusters an ascending eigenvalue list into distinct E_j and assigns the
// Gibbs weights d_j = m_j * exp(-beta E_j). Clusters whose weight underflows
// to zero carry no probability at double precision and are dropped; the
// count of dropped clusters is recorded in meta.
inline WeightedSpectrum make_weighted_spectrum(std::span<const double> eigenvalues, double beta,
                                               double tol = kDefaultDegeneracyTol) {
  if (!(beta >= 0.0)) throw std::invalid_argument("make_weighted_spectrum: beta must be >= 0");
  const auto clusters = detail::cluster_ascending(eigenvalues, tol);

  WeightedSpectrum spec;
  spec.beta = beta;
  std::size_t dropped = 0;
  for (const auto& c : clusters) {
    const double w = static_cast<double>(c.multiplicity) * std::exp(-beta * c.mean);
    if (w == 0.0) {
      ++dropped;
      continue;
    }
    if (!std::isfinite(w))
      throw std::overflow_error("make_weighted_spectrum: weight overflow; shift energies by the "
                                "ground state first (all SFF statistics are invariant)");
    spec.energies.push_back(c.mean);
    spec.weights.push_back(w);
  }
  if (spec.energies.empty())
    throw std::invalid_argument("make_weighted_spectrum: all weights underflowed to zero");
  spec.meta["tol"] = tol;
  if (dropped > 0) spec.meta["dropped_zero_weight_clusters"] = dropped;
  spec.validate();
  return spec;
}

// Shifts so the smallest value sits at zero. A global energy shift changes
// chi(t) only by a phase, so |chi|^2 and everything downstream is invariant;
// this is how low-temperature weights are kept inside double range.
inline std::vector<double> shift_to_ground(std::span<const double> eigenvalues) {
  if (eigenvalues.empty()) throw std::invalid_argument("shift_to_ground: empty input");
  const double e0 = *std::min_element(eigenvalues.begin(), eigenvalues.end());
  std::vector<double> out(eigenvalues.begin(), eigenvalues.end());
  for (double& e : out) e -= e0;
  return out;
}

// Expands E_n = E_0 + sum_k n_k Lambda_k over all 2^L occupations, then
// clusters. Exponential in L; used for cross-checks against the O(L)
// product-formula path.
inline WeightedSpectrum enumerate_free_many_body(const OneParticleSpectrum& ops, double beta,
                                                 double tol = kDefaultDegeneracyTol) {
  ops.validate();
  const int L = ops.n_modes;
  if (L < 1 || L > 20) throw std::invalid_argument("enumerate_free_many_body: L out of [1,20]");
  const auto lam = ops.expanded_levels();
  const std::size_t n_states = std::size_t{1} << L;
  std::vector<double> energies(n_states);
  for (std::size_t mask = 0; mask < n_states; ++mask) {
    KahanSum e;
    e.add(ops.offset);
    for (int k = 0; k < L; ++k)
      if (mask & (std::size_t{1} << k)) e.add(lam[k]);
    energies[mask] = e.value();
  }
  std::sort(energies.begin(), energies.end());
  auto spec = make_weighted_spectrum(energies, beta, tol);
  spec.meta["source"] = "free_many_body_enumeration";
  spec.meta["L"] = L;
  return spec;
}

} // namespace specwalk
