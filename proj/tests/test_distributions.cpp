#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <specwalk/lyapunov.hpp>
#include <specwalk/rng.hpp>
#include <specwalk/stats.hpp>

using namespace specwalk;

namespace {

// inverse CDF of Exp(1) at uniform ranks (i - 0.5)/n
std::vector<double> exp1_quantiles(std::size_t n) {
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i)
    q[i] = -std::log(1.0 - (static_cast<double>(i) + 0.5) / static_cast<double>(n));
  return q;
}

double normal_quantile(double p) { // Acklam-style via bisection on erfc; test-only
  double lo = -10.0, hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (normal_cdf(mid, 0.0, 1.0) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

WeightedSpectrum prime_root_spectrum(int n) {
  static const int primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                               41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};
  WeightedSpectrum s;
  for (int i = 0; i < n; ++i) {
    s.energies.push_back(std::sqrt(static_cast<double>(primes[i])));
    s.weights.push_back(1.0);
  }
  return s;
}

} // namespace

TEST_CASE("ks_exp1 on constructed samples") {
  SECTION("exact quantiles give ks <= 1/(2n)") {
    const std::size_t n = 1000;
    auto rep = ks_exp1(exp1_quantiles(n));
    CHECK(rep.ks <= 0.5 / static_cast<double>(n) + 1e-12);
  }
  SECTION("point mass at 1 gives 1 - exp(-1)") {
    std::vector<double> ones(500, 1.0);
    auto rep = ks_exp1(ones);
    CHECK(rep.ks == Catch::Approx(1.0 - std::exp(-1.0)).epsilon(1e-9));
  }
  SECTION("normalization flag rescales to unit mean") {
    auto q = exp1_quantiles(2000);
    for (double& v : q) v *= 7.3;
    auto rep = ks_exp1(q, true);
    CHECK(rep.ks <= 1e-3);
  }
  SECTION("empty input rejected") {
    CHECK_THROWS_AS(ks_exp1({}), std::invalid_argument);
  }
}

TEST_CASE("ks statistic is invariant under monotone transforms") {
  Rng rng(3);
  std::vector<double> samples;
  for (int i = 0; i < 500; ++i) samples.push_back(rng.uniform(0.1, 5.0));
  const double d1 = ks_statistic(samples, [](double x) { return 1.0 - std::exp(-x); });
  std::vector<double> logs(samples);
  for (double& v : logs) v = std::log(v);
  const double d2 =
      ks_statistic(logs, [](double y) { return 1.0 - std::exp(-std::exp(y)); });
  CHECK(d1 == Catch::Approx(d2).epsilon(1e-12));
}

TEST_CASE("ks_lognormal_free on synthetic draws") {
  const double sigma = M_PI / std::sqrt(3.0);
  const std::size_t n = 2000;
  std::vector<int> g{1, 2, 2, 1}; // sum g^2 = 10
  const double scale = std::sqrt(10.0);
  std::vector<double> log_samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    log_samples[i] = normal_quantile(p) * sigma * scale; // so y = q * sigma
  }
  auto rep = ks_lognormal_free_from_log(log_samples, g);
  CHECK(rep.ks <= 0.5 / static_cast<double>(n) + 1e-6);
  CHECK(rep.params["sum_g2"] == 10.0);

  SECTION("raw-sample overload rejects nonpositive values") {
    std::vector<double> bad{1.0, 0.0};
    CHECK_THROWS_AS(ks_lognormal_free(bad, g), std::invalid_argument);
  }
}

TEST_CASE("histogram density integrates to one") {
  Rng rng(9);
  std::vector<double> s;
  for (int i = 0; i < 5000; ++i) s.push_back(rng.normal());
  auto h = histogram_fd(s);
  double mass = 0.0;
  for (std::size_t b = 0; b + 1 < h.edges.size(); ++b)
    mass += h.density[b] * (h.edges[b + 1] - h.edges[b]);
  CHECK(mass == Catch::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("normalized SFF samples have unit mean after normalization") {
  auto s = prime_root_spectrum(10);
  auto set = sample_sff(s, 1e4, 2e5, 5000, 21);
  auto vals = set.values;
  const double mu = sample_mean(vals);
  for (double& v : vals) v /= mu;
  CHECK(sample_mean(vals) == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("wiener increment test") {
  auto s = prime_root_spectrum(20);
  SECTION("h=0 gives all-zero increments") {
    auto rep = wiener_increment_test(s, s.size(), 0.3, 0.0, 200, 1e4, 2e5, 5);
    CHECK(rep.ks == 0.0);
    CHECK(rep.params["sample_mean"] == 0.0);
  }
  SECTION("sample mean within 5 sigma of the exact windowed ratio") {
    const double h = 0.35, sv = 0.2;
    auto rep = wiener_increment_test(s, s.size(), sv, h, 40000, 1e4, 2e5, 5);
    const double mean = rep.params["sample_mean"];
    const double se = rep.params["stderr_mean"];
    const double exact = rep.params["exact_mean_R1"];
    CHECK(exact == Catch::Approx(r_windowed(s.weights, 1.0, s.size(), h, sv)));
    CHECK(std::abs(mean - exact) < 5.0 * se);
  }
  SECTION("full window with uniform weights reduces toward the |Y|^2 test") {
    // h covering the whole walk: increment = W_1 - W_0 = chi / Delta Z
    auto rep = wiener_increment_test(s, s.size(), 0.0, 1.0, 20000, 1e4, 2e5, 5);
    const double mean = rep.params["sample_mean"];
    CHECK(mean == Catch::Approx(1.0).margin(0.05)); // E|Y|^2 = R_1^N(1,0) = 1
  }
  SECTION("invalid window rejected") {
    CHECK_THROWS_AS(wiener_increment_test(s, s.size(), 0.9, 0.5, 10, 1.0, 2.0, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("dist report serialization carries histogram and params") {
  auto rep = ks_exp1(exp1_quantiles(100));
  auto j = to_json(rep);
  CHECK(j["law"] == "exp1");
  CHECK(j["n"] == 100);
  CHECK(j["histogram"]["edges"].size() == j["histogram"]["density"].size() + 1);
}
