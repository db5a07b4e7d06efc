#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include <json.hpp>

#include "specwalk/numeric.hpp"
#include "specwalk/parallel.hpp"
#include "specwalk/rng.hpp"
#include "specwalk/spectrum.hpp"
#include "specwalk/walker.hpp"

namespace specwalk {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// X_n = sum_j d_j^{2n}, n = 1..p_max.
inline std::vector<double> power_sums(std::span<const double> weights, int p_max) {
  if (p_max < 1) throw std::invalid_argument("power_sums: p_max must be >= 1");
  std::vector<double> x(p_max);
  std::vector<KahanSum> acc(p_max);
  for (double d : weights) {
    const double d2 = d * d;
    double p = 1.0;
    for (int n = 0; n < p_max; ++n) {
      p *= d2;
      acc[n].add(p);
    }
  }
  for (int n = 0; n < p_max; ++n) x[n] = acc[n].value();
  return x;
}

inline std::vector<BigInt> power_sums_int(std::span<const std::int64_t> weights, int p_max) {
  if (p_max < 1) throw std::invalid_argument("power_sums_int: p_max must be >= 1");
  std::vector<BigInt> x(p_max, 0);
  for (std::int64_t d : weights) {
    const BigInt d2 = BigInt(d) * d;
    BigInt p = 1;
    for (int n = 0; n < p_max; ++n) {
      p *= d2;
      x[n] += p;
    }
  }
  return x;
}

inline BigInt big_factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline BigInt big_binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;
  }
  return r;
}

// Coefficients a_n of ln(I_0(2 sqrt(z))) = sum a_n z^n / n!. These are the
// cumulants of the distribution with moments mu_k = 1/k!, obtained from the
// moment-cumulant recursion mu_n = sum_k C(n-1,k-1) a_k mu_{n-k} solved in
// exact rational arithmetic (their signs alternate irregularly and a float
// recursion loses all digits by n ~ 20).
inline std::vector<BigRat> log_bessel_cumulants_rat(int p_max) {
  if (p_max < 1 || p_max > 64)
    throw std::invalid_argument("log_bessel_cumulants_rat: p_max must be in [1,64]");
  std::vector<BigRat> mu(p_max + 1), a(p_max + 1);
  mu[0] = 1;
  for (int n = 1; n <= p_max; ++n) mu[n] = BigRat(1, big_factorial(n));
  for (int n = 1; n <= p_max; ++n) {
    BigRat s = mu[n];
    for (int k = 1; k < n; ++k) s -= BigRat(big_binomial(n - 1, k - 1)) * a[k] * mu[n - k];
    a[n] = s;
  }
  return {a.begin() + 1, a.end()};
}

inline std::vector<double> log_bessel_cumulants(int p_max) {
  const auto rat = log_bessel_cumulants_rat(p_max);
  std::vector<double> out(rat.size());
  for (std::size_t i = 0; i < rat.size(); ++i) out[i] = rat[i].convert_to<double>();
  return out;
}

// Infinite-time SFF moments I_1..I_{p_max} by the cumulant recursion
//   I_p = sum_{q=1}^{p-1} C(p-1,q-1) p!/(p-q)! a_q X_q I_{p-q} + p! a_p X_p.
// Valid when the spectrum is p_max-ND; that hypothesis is the caller's
// responsibility.
inline std::vector<double> exact_moments_recursion(std::span<const double> weights, int p_max) {
  const auto a = log_bessel_cumulants(p_max);
  const auto x = power_sums(weights, p_max);
  std::vector<double> I(p_max + 1);
  I[0] = 1.0;
  double p_fact = 1.0;
  for (int p = 1; p <= p_max; ++p) {
    p_fact *= p;
    KahanSum s;
    double fall = static_cast<double>(p); // p!/(p-q)!, running value
    for (int q = 1; q < p; ++q) {
      s.add(binomial(p - 1, q - 1) * fall * a[q - 1] * x[q - 1] * I[p - q]);
      fall *= (p - q);
    }
    s.add(p_fact * a[p - 1] * x[p - 1]);
    I[p] = s.value();
    if (!std::isfinite(I[p]))
      throw std::overflow_error("exact_moments_recursion: overflow at p=" + std::to_string(p) +
                                "; use exact_moments_recursion_log");
  }
  return {I.begin() + 1, I.end()};
}

// Same recursion carried in exact rationals for integer weights. Every I_p
// is an integer (the multinomial form makes that manifest).
inline std::vector<BigInt> exact_moments_recursion_int(std::span<const std::int64_t> weights,
                                                       int p_max) {
  const auto a = log_bessel_cumulants_rat(p_max);
  const auto x = power_sums_int(weights, p_max);
  std::vector<BigRat> I(p_max + 1);
  I[0] = 1;
  for (int p = 1; p <= p_max; ++p) {
    BigRat s = 0;
    for (int q = 1; q < p; ++q) {
      const BigInt coef = big_binomial(p - 1, q - 1) * (big_factorial(p) / big_factorial(p - q));
      s += BigRat(coef) * a[q - 1] * BigRat(x[q - 1]) * I[p - q];
    }
    s += BigRat(big_factorial(p)) * a[p - 1] * BigRat(x[p - 1]);
    I[p] = s;
  }
  std::vector<BigInt> out(p_max);
  for (int p = 1; p <= p_max; ++p) {
    if (denominator(I[p]) != 1)
      throw std::logic_error("exact_moments_recursion_int: non-integer moment");
    out[p - 1] = numerator(I[p]);
  }
  return out;
}

// Log-domain recursion, returns ln I_1..ln I_{p_max}. Signs are tracked
// explicitly (the a_q alternate); every I_p itself must come out positive.
inline std::vector<double> exact_moments_recursion_log(std::span<const double> weights,
                                                       int p_max) {
  const auto a = log_bessel_cumulants(p_max);
  std::vector<double> log_w(weights.size());
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (!(weights[j] > 0.0))
      throw std::invalid_argument("exact_moments_recursion_log: weights must be positive");
    log_w[j] = std::log(weights[j]);
  }
  // ln X_q via log-sum-exp of 2q ln d_j
  std::vector<double> log_x(p_max);
  std::vector<double> terms(weights.size());
  for (int q = 1; q <= p_max; ++q) {
    for (std::size_t j = 0; j < log_w.size(); ++j) terms[j] = 2.0 * q * log_w[j];
    log_x[q - 1] = log_sum_exp(terms);
  }
  std::vector<double> log_I(p_max + 1);
  log_I[0] = 0.0;
  double log_pfact = 0.0;
  for (int p = 1; p <= p_max; ++p) {
    log_pfact += std::log(static_cast<double>(p));
    std::vector<SignedLog> parts;
    parts.reserve(p);
    double log_fall = std::log(static_cast<double>(p)); // ln p!/(p-q)!
    for (int q = 1; q < p; ++q) {
      SignedLog t;
      t.sign = a[q - 1] > 0 ? 1 : (a[q - 1] < 0 ? -1 : 0);
      t.logmag = std::log(binomial(p - 1, q - 1)) + log_fall + std::log(std::abs(a[q - 1])) +
                 log_x[q - 1] + log_I[p - q];
      parts.push_back(t);
      log_fall += std::log(static_cast<double>(p - q));
    }
    SignedLog last;
    last.sign = a[p - 1] > 0 ? 1 : (a[p - 1] < 0 ? -1 : 0);
    last.logmag = log_pfact + std::log(std::abs(a[p - 1])) + log_x[p - 1];
    parts.push_back(last);
    const SignedLog total = signed_log_sum(parts);
    if (total.sign <= 0)
      throw std::runtime_error("exact_moments_recursion_log: nonpositive moment at p=" +
                               std::to_string(p));
    log_I[p] = total.logmag;
  }
  return {log_I.begin() + 1, log_I.end()};
}

namespace detail {

inline double multiset_count(std::size_t n_b, int m) {
  return binomial(static_cast<int>(n_b) + m - 1, m);
}

} // namespace detail

// Direct multinomial form, the oracle for the recursion:
//   I_m = (m!)^2 sum_{sum k_i = m} prod_i (d_i^{k_i} / k_i!)^2.
// Enumerates C(N_B + m - 1, m) compositions; intended at oracle scale only.
inline BigInt exact_moments_multinomial_int(std::span<const std::int64_t> weights, int m) {
  if (m < 1) throw std::invalid_argument("exact_moments_multinomial_int: m must be >= 1");
  if (detail::multiset_count(weights.size(), m) > 1e7)
    throw std::invalid_argument("exact_moments_multinomial_int: composition budget exceeded");
  const BigInt m_fact = big_factorial(m);
  const std::size_t n_b = weights.size();
  std::vector<int> k(n_b, 0);
  BigInt total = 0;
  // recursive enumeration of compositions
  auto rec = [&](auto&& self, std::size_t pos, int remaining) -> void {
    if (pos == n_b - 1) {
      k[pos] = remaining;
      BigInt coef = m_fact; // m! / prod k_i!
      BigInt prod = 1;      // prod d_i^{k_i}
      for (std::size_t i = 0; i < n_b; ++i) {
        if (k[i] > 0) {
          coef /= big_factorial(k[i]);
          BigInt p = 1;
          for (int r = 0; r < k[i]; ++r) p *= weights[i];
          prod *= p;
        }
      }
      const BigInt t = coef * prod;
      total += t * t;
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      k[pos] = v;
      self(self, pos + 1, remaining - v);
    }
    k[pos] = 0;
  };
  rec(rec, 0, m);
  return total;
}

inline double exact_moments_multinomial(std::span<const double> weights, int m) {
  if (m < 1) throw std::invalid_argument("exact_moments_multinomial: m must be >= 1");
  if (detail::multiset_count(weights.size(), m) > 1e7)
    throw std::invalid_argument("exact_moments_multinomial: composition budget exceeded");
  double m_fact = 1.0;
  for (int i = 2; i <= m; ++i) m_fact *= i;
  const std::size_t n_b = weights.size();
  std::vector<int> k(n_b, 0);
  KahanSum total;
  auto rec = [&](auto&& self, std::size_t pos, int remaining) -> void {
    if (pos == n_b - 1) {
      k[pos] = remaining;
      double coef = m_fact;
      double prod = 1.0;
      for (std::size_t i = 0; i < n_b; ++i) {
        for (int r = 2; r <= k[i]; ++r) coef /= r;
        for (int r = 0; r < k[i]; ++r) prod *= weights[i];
      }
      const double t = coef * prod;
      total.add(t * t);
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      k[pos] = v;
      self(self, pos + 1, remaining - v);
    }
    k[pos] = 0;
  };
  rec(rec, 0, m);
  return total.value();
}

// Gaussian approximation I_m ~= m! X_1^m, reported alongside exact values.
inline std::vector<double> gaussian_moments(std::span<const double> weights, int m_max) {
  const auto x = power_sums(weights, 1);
  std::vector<double> out(m_max);
  double fact = 1.0, pow_x = 1.0;
  for (int m = 1; m <= m_max; ++m) {
    fact *= m;
    pow_x *= x[0];
    out[m - 1] = fact * pow_x;
  }
  return out;
}

// Quasi-free exact moment: I_M = prod_j C(2 g_j M, g_j M).
inline BigInt free_fermion_moment_int(std::span<const int> degeneracies, int M) {
  if (M < 1) throw std::invalid_argument("free_fermion_moment_int: M must be >= 1");
  BigInt prod = 1;
  for (int g : degeneracies) {
    if (g < 1) throw std::invalid_argument("free_fermion_moment_int: degeneracy < 1");
    prod *= big_binomial(2 * g * M, g * M);
  }
  return prod;
}

inline double free_fermion_moment_log(std::span<const int> degeneracies, int M) {
  if (M < 1) throw std::invalid_argument("free_fermion_moment_log: M must be >= 1");
  KahanSum s;
  for (int g : degeneracies) {
    const double n = 2.0 * g * M;
    s.add(std::lgamma(n + 1.0) - 2.0 * std::lgamma(n / 2.0 + 1.0));
  }
  return s.value();
}

struct McMoments {
  std::vector<double> mean;    // estimates of I_1..I_{m_max}
  std::vector<double> stderr_; // standard error of each mean
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  double t_min = 0.0, t_max = 0.0;
};

// Monte-Carlo time averages of |chi|^{2m}, m = 1..m_max, with per-moment
// standard errors; deterministic in the seed, worker-count independent.
inline McMoments mc_moments(const WeightedSpectrum& spec, int m_max, std::size_t n_samples,
                            double t0, double t1, std::uint64_t seed, int threads = 0) {
  if (m_max < 1) throw std::invalid_argument("mc_moments: m_max must be >= 1");
  if (!(t0 < t1)) throw std::invalid_argument("mc_moments: empty time window");
  if (n_samples < 1) throw std::invalid_argument("mc_moments: need at least one sample");
  const std::size_t n_chunks = (n_samples + kSampleChunk - 1) / kSampleChunk;
  std::vector<std::vector<double>> sums(n_chunks, std::vector<double>(2 * m_max, 0.0));
  parallel_chunks(n_samples, kSampleChunk, threads,
                  [&](std::size_t c, std::size_t b, std::size_t e) {
                    Rng rng(stream_seed(seed, c));
                    std::vector<KahanSum> acc(2 * m_max);
                    for (std::size_t i = b; i < e; ++i) {
                      const double v = sff(spec, rng.uniform(t0, t1));
                      double p = 1.0;
                      for (int m = 0; m < 2 * m_max; ++m) {
                        p *= v;
                        acc[m].add(p);
                      }
                    }
                    for (int m = 0; m < 2 * m_max; ++m) sums[c][m] = acc[m].value();
                  });
  McMoments out;
  out.n_samples = n_samples;
  out.seed = seed;
  out.t_min = t0;
  out.t_max = t1;
  out.mean.resize(m_max);
  out.stderr_.resize(m_max);
  const double n = static_cast<double>(n_samples);
  for (int m = 1; m <= m_max; ++m) {
    KahanSum s1, s2;
    for (std::size_t c = 0; c < n_chunks; ++c) {
      s1.add(sums[c][m - 1]);
      s2.add(sums[c][2 * m - 1]);
    }
    const double mean = s1.value() / n;
    const double var = std::max(0.0, s2.value() / n - mean * mean);
    out.mean[m - 1] = mean;
    out.stderr_[m - 1] = std::sqrt(var / n);
  }
  return out;
}

// X_n, a_n, exact I_m, Gaussian I_m and the normalized ratios K_m = I_m/I_1^m.
// If the linear recursion overflows, I fields hold ln I instead and
// log_domain is set; K stays linear either way.
struct MomentReport {
  int p_max = 0;
  std::vector<double> X;
  std::vector<double> a;
  std::vector<double> I_exact;
  std::vector<double> I_gauss;
  std::vector<double> K;
  bool log_domain = false;
  std::optional<McMoments> mc;
};

inline MomentReport moment_report(const WeightedSpectrum& spec, int p_max) {
  MomentReport r;
  r.p_max = p_max;
  r.X = power_sums(spec.weights, p_max);
  r.a = log_bessel_cumulants(p_max);
  try {
    r.I_exact = exact_moments_recursion(spec.weights, p_max);
    r.I_gauss = gaussian_moments(spec.weights, p_max);
    r.K.resize(p_max);
    double i1_pow = 1.0;
    for (int m = 1; m <= p_max; ++m) {
      i1_pow *= r.I_exact[0];
      r.K[m - 1] = r.I_exact[m - 1] / i1_pow;
    }
  } catch (const std::overflow_error&) {
    r.log_domain = true;
    r.I_exact = exact_moments_recursion_log(spec.weights, p_max);
    const double log_x1 = r.I_exact[0]; // ln I_1 = ln X_1
    r.I_gauss.resize(p_max);
    r.K.resize(p_max);
    double log_fact = 0.0;
    for (int m = 1; m <= p_max; ++m) {
      log_fact += std::log(static_cast<double>(m));
      r.I_gauss[m - 1] = log_fact + m * log_x1;
      r.K[m - 1] = std::exp(r.I_exact[m - 1] - m * r.I_exact[0]);
    }
  }
  return r;
}

inline nlohmann::json to_json(const MomentReport& r) {
  nlohmann::json j{{"p_max", r.p_max},     {"X", r.X},
                   {"a", r.a},             {"I_exact", r.I_exact},
                   {"I_gauss", r.I_gauss}, {"K", r.K},
                   {"log_domain", r.log_domain}};
  if (r.mc) {
    j["mc"] = {{"mean", r.mc->mean},
               {"stderr", r.mc->stderr_},
               {"n_samples", r.mc->n_samples},
               {"seed", r.mc->seed},
               {"window", {r.mc->t_min, r.mc->t_max}}};
  }
  return j;
}

} // namespace specwalk
