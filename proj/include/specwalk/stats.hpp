#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "specwalk/lyapunov.hpp"
#include "specwalk/numeric.hpp"
#include "specwalk/parallel.hpp"
#include "specwalk/rng.hpp"
#include "specwalk/walker.hpp"

namespace specwalk {

// sup_x |F_emp(x) - F(x)| for a given reference CDF.
inline double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_statistic: empty sample set");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::max(f - static_cast<double>(i) / n,
                             static_cast<double>(i + 1) / n - f));
  }
  return d;
}

inline double normal_cdf(double x, double mean, double variance) {
  return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * variance));
}

struct Histogram {
  std::vector<double> edges;    // size = bins + 1
  std::vector<double> density;  // integrates to 1
};

// Freedman-Diaconis binning; falls back to a single bin for degenerate data.
inline Histogram histogram_fd(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("histogram_fd: empty sample set");
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  const double lo = s.front(), hi = s.back();
  const std::size_t n = s.size();
  const double q1 = s[static_cast<std::size_t>(0.25 * (n - 1))];
  const double q3 = s[static_cast<std::size_t>(0.75 * (n - 1))];
  const double iqr = q3 - q1;
  double width = 2.0 * iqr / std::cbrt(static_cast<double>(n));
  int bins = 1;
  if (width > 0.0 && hi > lo) bins = std::clamp(static_cast<int>(std::ceil((hi - lo) / width)), 1, 4096);
  Histogram h;
  const double span = hi > lo ? hi - lo : 1.0;
  h.edges.resize(bins + 1);
  for (int b = 0; b <= bins; ++b) h.edges[b] = lo + span * b / bins;
  std::vector<std::size_t> count(bins, 0);
  for (double v : s) {
    int b = static_cast<int>((v - lo) / span * bins);
    b = std::clamp(b, 0, bins - 1);
    ++count[b];
  }
  h.density.resize(bins);
  for (int b = 0; b < bins; ++b)
    h.density[b] = static_cast<double>(count[b]) / (static_cast<double>(n) * (span / bins));
  return h;
}

struct DistTestReport {
  std::string law;
  std::size_t n = 0;
  double ks = 1.0;
  Histogram histogram;
  nlohmann::json params;
};

// KS distance of (optionally mean-normalized) samples against Exp(1),
// F(x) = 1 - exp(-x). The SFF prediction for chaotic spectra.
inline DistTestReport ks_exp1(std::vector<double> samples, bool normalize_by_mean = false) {
  if (samples.empty()) throw std::invalid_argument("ks_exp1: empty sample set");
  if (normalize_by_mean) {
    const double mu = sample_mean(samples);
    if (!(mu > 0.0)) throw std::invalid_argument("ks_exp1: nonpositive sample mean");
    for (double& v : samples) v /= mu;
  }
  DistTestReport rep;
  rep.law = "exp1";
  rep.n = samples.size();
  rep.params = {{"normalized", normalize_by_mean}};
  rep.histogram = histogram_fd(samples);
  rep.ks = ks_statistic(std::move(samples), [](double x) {
    return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x);
  });
  return rep;
}

// Quasi-free law fed with ln|chi|^2 directly (the product-formula sampler
// works in the log domain to begin with): y = ln(sample) / sqrt(sum g_j^2)
// against N(0, pi^2/3).
inline DistTestReport ks_lognormal_free_from_log(std::vector<double> log_samples,
                                                 std::span<const int> degeneracies) {
  if (log_samples.empty()) throw std::invalid_argument("ks_lognormal_free: empty sample set");
  double g2 = 0.0;
  for (int g : degeneracies) g2 += static_cast<double>(g) * g;
  if (!(g2 > 0.0)) throw std::invalid_argument("ks_lognormal_free: empty degeneracies");
  const double scale = std::sqrt(g2);
  for (double& v : log_samples) v /= scale;
  const double variance = M_PI * M_PI / 3.0;
  DistTestReport rep;
  rep.law = "normal_pi2_3";
  rep.n = log_samples.size();
  rep.params = {{"sum_g2", g2}, {"variance", variance}};
  rep.histogram = histogram_fd(log_samples);
  rep.ks = ks_statistic(std::move(log_samples),
                        [variance](double x) { return normal_cdf(x, 0.0, variance); });
  return rep;
}

// Same test on raw positive |chi|^2 samples.
inline DistTestReport ks_lognormal_free(std::span<const double> samples_abs2,
                                        std::span<const int> degeneracies) {
  std::vector<double> logs(samples_abs2.size());
  for (std::size_t i = 0; i < samples_abs2.size(); ++i) {
    if (!(samples_abs2[i] > 0.0))
      throw std::invalid_argument("ks_lognormal_free: nonpositive sample");
    logs[i] = std::log(samples_abs2[i]);
  }
  return ks_lognormal_free_from_log(std::move(logs), degeneracies);
}

// Wiener-increment check: samples |W^N_{s+h}(t) - W^N_s(t)|^2 over random t
// and compares with Exp(mean h); the exact finite-N mean is the windowed
// power-sum ratio R_1^N(h,s), reported alongside.
inline DistTestReport wiener_increment_test(const WeightedSpectrum& spec, std::size_t N, double s,
                                            double h, std::size_t n_samples, double t0, double t1,
                                            std::uint64_t seed, int threads = 0) {
  if (N < 1 || N > spec.size()) throw std::invalid_argument("wiener_increment_test: N out of range");
  if (!(s >= 0.0) || !(h >= 0.0)) throw std::invalid_argument("wiener_increment_test: bad window");
  const auto lo = static_cast<std::size_t>(std::floor(static_cast<double>(N) * s));
  const auto hi = static_cast<std::size_t>(std::floor(static_cast<double>(N) * (s + h)));
  if (hi > spec.size()) throw std::invalid_argument("wiener_increment_test: window out of range");
  if (n_samples < 1) throw std::invalid_argument("wiener_increment_test: need samples");
  if (!(t0 < t1)) throw std::invalid_argument("wiener_increment_test: empty time window");

  KahanSum norm2;
  for (std::size_t j = 0; j < N; ++j) norm2.add(spec.weights[j] * spec.weights[j]);
  const double dz2 = norm2.value();

  std::vector<double> vals(n_samples);
  parallel_chunks(n_samples, kSampleChunk, threads,
                  [&](std::size_t c, std::size_t b, std::size_t e) {
                    Rng rng(stream_seed(seed, c));
                    for (std::size_t i = b; i < e; ++i) {
                      const double t = rng.uniform(t0, t1);
                      KahanSum re, im;
                      for (std::size_t k = lo; k < hi; ++k) {
                        const double phi = phase_mod_2pi(t, spec.energies[k]);
                        re.add(spec.weights[k] * std::cos(phi));
                        im.add(spec.weights[k] * -std::sin(phi));
                      }
                      vals[i] = (re.value() * re.value() + im.value() * im.value()) / dz2;
                    }
                  });

  DistTestReport rep;
  rep.law = "exp_mean_h";
  rep.n = n_samples;
  const double mean = sample_mean(vals);
  const double r1 = hi > lo ? r_windowed(spec.weights, 1.0, N, h, s) : 0.0;
  rep.params = {{"s", s},
                {"h", h},
                {"N", N},
                {"sample_mean", mean},
                {"stderr_mean", sample_stderr(vals)},
                {"exact_mean_R1", r1},
                {"mean_over_h", h > 0.0 ? mean / h : 0.0}};
  rep.histogram = histogram_fd(vals);
  if (h > 0.0) {
    rep.ks = ks_statistic(std::move(vals),
                          [h](double x) { return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x / h); });
  } else {
    rep.ks = 0.0; // empty window: all increments are exactly zero
  }
  return rep;
}

inline nlohmann::json to_json(const DistTestReport& r) {
  return {{"law", r.law},
          {"n", r.n},
          {"ks", r.ks},
          {"params", r.params},
          {"histogram", {{"edges", r.histogram.edges}, {"density", r.histogram.density}}}};
}

} // namespace specwalk
