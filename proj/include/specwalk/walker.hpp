#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "specwalk/numeric.hpp"
#include "specwalk/parallel.hpp"
#include "specwalk/rng.hpp"
#include "specwalk/spectrum.hpp"

namespace specwalk {

// chi(t) = sum_j d_j exp(-i t E_j).
inline std::complex<double> chi(const WeightedSpectrum& spec, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("chi: non-finite time");
  KahanSum re, im;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const double phi = phase_mod_2pi(t, spec.energies[j]);
    re.add(spec.weights[j] * std::cos(phi));
    im.add(spec.weights[j] * -std::sin(phi));
  }
  return {re.value(), im.value()};
}

inline double sff(const WeightedSpectrum& spec, double t) { return std::norm(chi(spec, t)); }

// Partial-sum trajectory Z_0..Z_{N_B} at fixed time t; Z_0 = 0 and
// Z_{N_B} = chi(t). Step n has length d_n, taken in ascending-energy order.
struct WalkPath {
  double t = 0.0;
  std::vector<std::complex<double>> points;
  double norm = 0.0; // Delta Z_{N_B} = sqrt(sum d_j^2)
};

inline WalkPath walk_path(const WeightedSpectrum& spec, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("walk_path: non-finite time");
  WalkPath path;
  path.t = t;
  path.points.reserve(spec.size() + 1);
  path.points.emplace_back(0.0, 0.0);
  KahanSum re, im;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const double phi = phase_mod_2pi(t, spec.energies[j]);
    re.add(spec.weights[j] * std::cos(phi));
    im.add(spec.weights[j] * -std::sin(phi));
    path.points.emplace_back(re.value(), im.value());
  }
  path.norm = std::sqrt(spec.weight_norm2());
  return path;
}

// W_s^N = (1/Delta Z_N) sum_{j <= floor(N s)} d_j exp(-i t E_j).
inline std::complex<double> rescaled_process(const WeightedSpectrum& spec, std::size_t N, double s,
                                             double t) {
  if (N < 1 || N > spec.size()) throw std::invalid_argument("rescaled_process: N out of range");
  if (!(s >= 0.0)) throw std::invalid_argument("rescaled_process: s must be >= 0");
  const auto m = static_cast<std::size_t>(std::floor(static_cast<double>(N) * s));
  if (m > spec.size()) throw std::invalid_argument("rescaled_process: floor(N s) out of range");
  KahanSum norm2;
  for (std::size_t j = 0; j < N; ++j) norm2.add(spec.weights[j] * spec.weights[j]);
  const double dz = std::sqrt(norm2.value());
  KahanSum re, im;
  for (std::size_t j = 0; j < m; ++j) {
    const double phi = phase_mod_2pi(t, spec.energies[j]);
    re.add(spec.weights[j] * std::cos(phi));
    im.add(spec.weights[j] * -std::sin(phi));
  }
  return {re.value() / dz, im.value() / dz};
}

struct SffSampleSet {
  std::vector<double> times;
  std::vector<double> values; // |chi(t_i)|^2
  double t_min = 0.0, t_max = 0.0;
  std::uint64_t seed = 0;
  double mean = 0.0;
  double stderr_mean = 0.0;
};

inline constexpr std::size_t kSampleChunk = 4096;

// n SFF values at i.i.d. uniform times in [t0, t1]. Times are generated in
// fixed chunks with per-chunk sub-seeds, so output is deterministic in the
// seed and independent of the worker count.
inline SffSampleSet sample_sff(const WeightedSpectrum& spec, double t0, double t1, std::size_t n,
                               std::uint64_t seed, int threads = 0) {
  if (!(t0 < t1)) throw std::invalid_argument("sample_sff: empty time window");
  if (n < 1) throw std::invalid_argument("sample_sff: need at least one sample");
  SffSampleSet out;
  out.t_min = t0;
  out.t_max = t1;
  out.seed = seed;
  out.times.resize(n);
  out.values.resize(n);
  parallel_chunks(n, kSampleChunk, threads, [&](std::size_t c, std::size_t b, std::size_t e) {
    Rng rng(stream_seed(seed, c));
    for (std::size_t i = b; i < e; ++i) {
      const double t = rng.uniform(t0, t1);
      out.times[i] = t;
      out.values[i] = sff(spec, t);
    }
  });
  out.mean = sample_mean(out.values);
  out.stderr_mean = sample_stderr(out.values);
  return out;
}

// |chi(t)|^2 for a quasi-free spectrum via the L-fold product; O(L) per
// evaluation, never enumerates the 2^L many-body states.
//   beta = 0:  prod_j (2 cos(t eps_j / 2))^{2 g_j}
//   beta > 0:  |exp(-z E_0) prod_k (1 + exp(-z Lambda_k))|^2,  z = beta + i t
inline double free_fermion_log_chi_abs2(const OneParticleSpectrum& ops, double beta, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("free_fermion_log_chi_abs2: non-finite time");
  KahanSum acc;
  if (beta == 0.0) {
    for (std::size_t j = 0; j < ops.size(); ++j) {
      const double phi = phase_mod_2pi(t, ops.distinct_levels[j] / 2.0);
      const double f = std::abs(2.0 * std::cos(phi));
      acc.add(2.0 * ops.degeneracies[j] * std::log(std::max(f, 1e-300)));
    }
    return acc.value();
  }
  acc.add(-2.0 * beta * ops.offset);
  for (std::size_t j = 0; j < ops.size(); ++j) {
    const double lam = ops.distinct_levels[j];
    const double r = std::exp(-beta * lam);
    const double phi = phase_mod_2pi(t, lam);
    // |1 + r e^{-i t lam}|^2 = 1 + 2 r cos(t lam) + r^2
    const double m2 = 1.0 + 2.0 * r * std::cos(phi) + r * r;
    acc.add(ops.degeneracies[j] * std::log(std::max(m2, 1e-300)));
  }
  return acc.value();
}

inline double free_fermion_chi_abs2(const OneParticleSpectrum& ops, double beta, double t) {
  return std::exp(free_fermion_log_chi_abs2(ops, beta, t));
}

// log |chi|^2 samples at uniform random times; same chunked determinism as
// sample_sff.
inline std::vector<double> sample_free_fermion_log_sff(const OneParticleSpectrum& ops, double beta,
                                                       double t0, double t1, std::size_t n,
                                                       std::uint64_t seed, int threads = 0) {
  if (!(t0 < t1)) throw std::invalid_argument("sample_free_fermion_log_sff: empty time window");
  if (n < 1) throw std::invalid_argument("sample_free_fermion_log_sff: need at least one sample");
  std::vector<double> out(n);
  parallel_chunks(n, kSampleChunk, threads, [&](std::size_t c, std::size_t b, std::size_t e) {
    Rng rng(stream_seed(seed, c));
    for (std::size_t i = b; i < e; ++i)
      out[i] = free_fermion_log_chi_abs2(ops, beta, rng.uniform(t0, t1));
  });
  return out;
}

} // namespace specwalk
