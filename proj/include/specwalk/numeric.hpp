#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace specwalk {

// Neumaier-compensated accumulator.
class KahanSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// t*E reduced mod 2pi in 80-bit extended precision. For t up to 2e5 and
// energies up to O(10), a plain double product leaves ~1e-9 of phase noise;
// the walk statistics live entirely in these phases, so the reduction is
// done with a 64-bit mantissa before sin/cos.
inline double phase_mod_2pi(double t, double energy) {
  constexpr long double two_pi = 6.283185307179586476925286766559L;
  const long double p = static_cast<long double>(t) * static_cast<long double>(energy);
  return static_cast<double>(std::fmod(p, two_pi));
}

inline double log_sum_exp(std::span<const double> xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  KahanSum s;
  for (double x : xs) s.add(std::exp(x - m));
  return m + std::log(s.value());
}

// Signed magnitudes in the log domain: value = sum_i sign_i * exp(logmag_i).
// Returns {sign, log|value|}; sign 0 means exact cancellation.
struct SignedLog {
  int sign = 0;
  double logmag = -std::numeric_limits<double>::infinity();
};

inline SignedLog signed_log_sum(std::span<const SignedLog> terms) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms)
    if (t.sign != 0) m = std::max(m, t.logmag);
  if (!std::isfinite(m)) return {0, -std::numeric_limits<double>::infinity()};
  KahanSum s;
  for (const auto& t : terms)
    if (t.sign != 0) s.add(t.sign * std::exp(t.logmag - m));
  const double v = s.value();
  if (v == 0.0) return {0, -std::numeric_limits<double>::infinity()};
  return {v > 0.0 ? 1 : -1, m + std::log(std::abs(v))};
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline double sample_mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("sample_mean: empty input");
  KahanSum s;
  for (double x : xs) s.add(x);
  return s.value() / static_cast<double>(xs.size());
}

// Standard error of the mean, sample std / sqrt(n).
inline double sample_stderr(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  const double mu = sample_mean(xs);
  KahanSum s;
  for (double x : xs) s.add((x - mu) * (x - mu));
  return std::sqrt(s.value() / (static_cast<double>(n) - 1.0) / static_cast<double>(n));
}

} // namespace specwalk
