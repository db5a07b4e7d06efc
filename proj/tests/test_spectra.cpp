#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include <specwalk/eig.hpp>
#include <specwalk/models.hpp>
#include <specwalk/nondeg.hpp>
#include <specwalk/pauli.hpp>
#include <specwalk/rng.hpp>
#include <specwalk/spectrum.hpp>

using namespace specwalk;

namespace {

// Independent eigensolver path (Eigen, not LAPACK) used as oracle.
std::vector<double> eigen_oracle(const DenseHermitian& h) {
  Eigen::MatrixXcd m(h.dim, h.dim);
  for (int r = 0; r < h.dim; ++r)
    for (int c = 0; c < h.dim; ++c) m(r, c) = h.at(r, c);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  std::vector<double> w(h.dim);
  for (int i = 0; i < h.dim; ++i) w[i] = solver.eigenvalues()(i);
  return w;
}

Eigen::MatrixXcd pauli_dense(const PauliString& p, int n_qubits) {
  const int dim = 1 << n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (int s = 0; s < dim; ++s) {
    const double sign = (std::popcount(p.z & static_cast<std::uint32_t>(s)) & 1) ? -1.0 : 1.0;
    m(s ^ static_cast<int>(p.x), s) += sign * phase_of(p.ipow);
  }
  return m;
}

} // namespace

TEST_CASE("xxz-nnn L=2 XX point has the doubled-bond spectrum") {
  auto h = build_xxz_nnn(2, 0.0, 0.0);
  auto w = diagonalize(h);
  REQUIRE(w.size() == 4);
  CHECK(w[0] == Catch::Approx(-4.0).margin(1e-12));
  CHECK(w[1] == Catch::Approx(0.0).margin(1e-12));
  CHECK(w[2] == Catch::Approx(0.0).margin(1e-12));
  CHECK(w[3] == Catch::Approx(4.0).margin(1e-12));
}

TEST_CASE("xxz-nnn is traceless and Hermitian") {
  auto h = build_xxz_nnn(4, 1.0, 0.0);
  std::complex<double> tr = 0.0;
  for (int i = 0; i < h.dim; ++i) tr += h.at(i, i);
  CHECK(std::abs(tr) < 1e-12);
  CHECK(hermiticity_defect(h) < 1e-12);

  auto h2 = build_xxz_nnn(6, 0.3, 0.7);
  CHECK(hermiticity_defect(h2) < 1e-12);
}

TEST_CASE("xxz-nnn L=8 spectrum matches the independent Eigen oracle") {
  auto h = build_xxz_nnn(8, 0.1, 0.1);
  auto w = diagonalize(h);
  auto ref = eigen_oracle(h);
  double norm = std::max(std::abs(ref.front()), std::abs(ref.back()));
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(std::abs(w[i] - ref[i]) < 1e-10 * norm);
}

TEST_CASE("xxz-nnn rejects invalid input") {
  CHECK_THROWS_AS(build_xxz_nnn(1, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_xxz_nnn(15, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_xxz_nnn(4, std::nan(""), 0.0), std::invalid_argument);
}

TEST_CASE("diagonalize basics") {
  DenseHermitian ident(4);
  for (int i = 0; i < 4; ++i) ident.at(i, i) = 1.0;
  auto w = diagonalize(ident);
  for (double v : w) CHECK(v == Catch::Approx(1.0));

  DenseHermitian diag(3);
  diag.at(0, 0) = 3.0;
  diag.at(1, 1) = 1.0;
  diag.at(2, 2) = 2.0;
  w = diagonalize(diag);
  CHECK(w[0] == Catch::Approx(1.0));
  CHECK(w[1] == Catch::Approx(2.0));
  CHECK(w[2] == Catch::Approx(3.0));

  DenseHermitian sx(2);
  sx.at(0, 1) = 1.0;
  sx.at(1, 0) = 1.0;
  w = diagonalize(sx);
  CHECK(w[0] == Catch::Approx(-1.0));
  CHECK(w[1] == Catch::Approx(1.0));

  DenseHermitian bad(2);
  bad.at(0, 1) = 1.0; // missing conjugate partner
  CHECK_THROWS_AS(diagonalize(bad), std::invalid_argument);
}

TEST_CASE("make_weighted_spectrum clustering and Gibbs weights") {
  SECTION("degenerate pair at beta=0") {
    std::vector<double> e{0.0, 0.0, 1.0};
    auto s = make_weighted_spectrum(e, 0.0);
    REQUIRE(s.size() == 2);
    CHECK(s.energies[0] == 0.0);
    CHECK(s.energies[1] == 1.0);
    CHECK(s.weights[0] == 2.0);
    CHECK(s.weights[1] == 1.0);
  }
  SECTION("beta = ln 2 halves the upper weight") {
    std::vector<double> e{0.0, 1.0};
    auto s = make_weighted_spectrum(e, std::log(2.0));
    CHECK(s.weights[0] == Catch::Approx(1.0));
    CHECK(s.weights[1] == Catch::Approx(0.5));
  }
  SECTION("same energies at beta=0 and beta>0; ratio is the Boltzmann factor") {
    std::vector<double> e{-1.5, -0.25, 0.0, 0.75, 2.0};
    auto s0 = make_weighted_spectrum(e, 0.0);
    auto s1 = make_weighted_spectrum(e, 0.7);
    REQUIRE(s0.size() == s1.size());
    for (std::size_t j = 0; j < s0.size(); ++j) {
      CHECK(s0.energies[j] == s1.energies[j]);
      CHECK(s1.weights[j] / s0.weights[j] ==
            Catch::Approx(std::exp(-0.7 * s0.energies[j])).epsilon(1e-12));
    }
  }
  SECTION("non-ascending input rejected") {
    std::vector<double> e{1.0, 0.0};
    CHECK_THROWS_AS(make_weighted_spectrum(e, 0.0), std::invalid_argument);
  }
}

TEST_CASE("beta=0 weights partition the Hilbert space dimension") {
  const std::vector<std::tuple<int, double, double>> cases{
      {4, 1.0, 0.0}, {6, 0.5, 0.3}, {8, 0.1, 0.1}};
  for (auto [L, delta, alpha] : cases) {
    auto w = diagonalize(build_xxz_nnn(L, delta, alpha));
    auto s = make_weighted_spectrum(w, 0.0);
    double total = 0.0;
    for (double d : s.weights) total += d;
    CHECK(total == Catch::Approx(std::pow(2.0, L)).epsilon(1e-12));
  }
}

TEST_CASE("xxz-nnn L=10 weights reach 8 on a visible fraction of clusters") {
  // multiplets grow large at the SU(2)-symmetric point Delta=1 with NNN on
  auto w = diagonalize(build_xxz_nnn(10, 1.0, 0.5));
  auto s = make_weighted_spectrum(w, 0.0);
  std::size_t big = 0;
  double dmax = 0.0;
  for (double d : s.weights) {
    dmax = std::max(dmax, d);
    if (d >= 8.0) ++big;
  }
  CHECK(dmax >= 8.0);
  CHECK(static_cast<double>(big) / s.size() > 0.01);
}

TEST_CASE("xy one-particle spectrum") {
  SECTION("h=0, gamma=0 gives 2|cos k|") {
    const int L = 12;
    auto ops = build_xy_one_particle(L, 0.0, 0.0);
    CHECK(ops.n_modes == L);
    std::vector<double> expect;
    for (int n = 0; n < L; ++n) expect.push_back(2.0 * std::abs(std::cos(2.0 * M_PI * n / L)));
    std::sort(expect.begin(), expect.end());
    auto flat = ops.expanded_levels();
    REQUIRE(flat.size() == expect.size());
    for (std::size_t i = 0; i < flat.size(); ++i)
      CHECK(flat[i] == Catch::Approx(expect[i]).margin(1e-12));
  }
  SECTION("generic point: interior levels doubly degenerate, k=0 and pi simple") {
    auto ops = build_xy_one_particle(10, 0.2, 0.3);
    int singles = 0, doubles = 0;
    for (int g : ops.degeneracies) {
      if (g == 1) ++singles;
      if (g == 2) ++doubles;
    }
    CHECK(singles == 2);
    CHECK(doubles == 4);
    CHECK(ops.size() == 6);
  }
  SECTION("L=2 XX point collapses to one doubly degenerate level") {
    auto ops = build_xy_one_particle(2, 0.0, 0.0);
    REQUIRE(ops.size() == 1);
    CHECK(ops.distinct_levels[0] == Catch::Approx(2.0));
    CHECK(ops.degeneracies[0] == 2);
  }
  SECTION("offset is minus half the level sum") {
    auto ops = build_xy_one_particle(8, 0.7, 0.4);
    double sum = 0.0;
    for (std::size_t j = 0; j < ops.size(); ++j)
      sum += ops.distinct_levels[j] * ops.degeneracies[j];
    CHECK(ops.offset == Catch::Approx(-0.5 * sum).epsilon(1e-12));
  }
  SECTION("grouping preserves mode count for many parameters") {
    Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
      const int L = 2 + static_cast<int>(rng.raw() % 40);
      auto ops = build_xy_one_particle(L, rng.uniform(-1, 1), rng.uniform(-1, 1));
      int total = 0;
      for (int g : ops.degeneracies) total += g;
      CHECK(total == L);
    }
  }
}

TEST_CASE("enumerate_free_many_body small cases") {
  SECTION("single mode") {
    OneParticleSpectrum ops;
    ops.distinct_levels = {1.0};
    ops.degeneracies = {1};
    ops.n_modes = 1;
    auto s = enumerate_free_many_body(ops, 0.0);
    REQUIRE(s.size() == 2);
    CHECK(s.energies[0] == 0.0);
    CHECK(s.energies[1] == 1.0);
    CHECK(s.weights[0] == 1.0);
    CHECK(s.weights[1] == 1.0);
  }
  SECTION("two equal modes give binomial degeneracies") {
    OneParticleSpectrum ops;
    ops.distinct_levels = {1.0};
    ops.degeneracies = {2};
    ops.n_modes = 2;
    auto s = enumerate_free_many_body(ops, 0.0);
    REQUIRE(s.size() == 3);
    CHECK(s.weights[0] == 1.0);
    CHECK(s.weights[1] == 2.0);
    CHECK(s.weights[2] == 1.0);
  }
  SECTION("budget enforced") {
    OneParticleSpectrum ops;
    ops.distinct_levels = {1.0};
    ops.degeneracies = {21};
    ops.n_modes = 21;
    CHECK_THROWS_AS(enumerate_free_many_body(ops, 0.0), std::invalid_argument);
  }
}

TEST_CASE("Majorana strings square to one and anticommute") {
  const int n_qubits = 3;
  const int dim = 1 << n_qubits;
  for (int a = 0; a < 2 * n_qubits; ++a) {
    auto ma = pauli_dense(majorana(a, n_qubits), n_qubits);
    CHECK((ma * ma - Eigen::MatrixXcd::Identity(dim, dim)).norm() < 1e-14);
    CHECK((ma - ma.adjoint()).norm() < 1e-14);
    for (int b = a + 1; b < 2 * n_qubits; ++b) {
      auto mb = pauli_dense(majorana(b, n_qubits), n_qubits);
      CHECK((ma * mb + mb * ma).norm() < 1e-14);
    }
  }
}

TEST_CASE("SYK builder basics") {
  SECTION("trace zero and Hermitian") {
    auto h = build_syk(10, 4, 1.0, 3);
    std::complex<double> tr = 0.0;
    for (int i = 0; i < h.dim; ++i) tr += h.at(i, i);
    CHECK(std::abs(tr) < 1e-10);
    CHECK(hermiticity_defect(h) < 1e-12);
  }
  SECTION("deterministic for fixed seed") {
    auto h1 = build_syk(10, 4, 1.0, 12345);
    auto h2 = build_syk(10, 4, 1.0, 12345);
    REQUIRE(h1.a.size() == h2.a.size());
    for (std::size_t i = 0; i < h1.a.size(); ++i) CHECK(h1.a[i] == h2.a[i]);
    auto h3 = build_syk(10, 4, 1.0, 54321);
    bool differs = false;
    for (std::size_t i = 0; i < h1.a.size() && !differs; ++i) differs = h1.a[i] != h3.a[i];
    CHECK(differs);
  }
  SECTION("particle-hole degeneracy pattern at small sizes") {
    // n_majorana mod 8 != 0: fully doubly degenerate
    auto w12 = diagonalize(build_syk(12, 4, 1.0, 5));
    auto s12 = make_weighted_spectrum(w12, 0.0);
    for (double d : s12.weights) CHECK(d == 2.0);
    // n_majorana mod 8 == 0: no degeneracies
    auto w16 = diagonalize(build_syk(16, 4, 1.0, 5));
    auto s16 = make_weighted_spectrum(w16, 0.0);
    for (double d : s16.weights) CHECK(d == 1.0);
  }
  SECTION("input validation") {
    CHECK_THROWS_AS(build_syk(9, 4, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_syk(10, 3, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_syk(22, 4, 1.0, 1), std::invalid_argument);
  }
}

TEST_CASE("M-ND checker") {
  SECTION("1+3 = 2+2 violates 2-ND") {
    std::vector<double> e{1.0, 2.0, 3.0};
    auto r = check_nondegeneracy_order(e, 2);
    CHECK_FALSE(r.holds);
    REQUIRE(r.witness);
    auto sum = [&](const std::vector<int>& idx) {
      double s = 0;
      for (int i : idx) s += e[i];
      return s;
    };
    CHECK(sum(r.witness->lhs) == Catch::Approx(sum(r.witness->rhs)).margin(1e-9));
    CHECK(r.witness->lhs != r.witness->rhs);
  }
  SECTION("{1,2,4} holds at order 2, fails at order 3") {
    std::vector<double> e{1.0, 2.0, 4.0};
    CHECK(check_nondegeneracy_order(e, 2).holds);
    auto r3 = check_nondegeneracy_order(e, 3);
    CHECK_FALSE(r3.holds); // 1+1+4 = 2+2+2
  }
  SECTION("failure is monotone in the order") {
    Rng rng(7);
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<double> e;
      for (int i = 0; i < 5; ++i) e.push_back(1.0 + static_cast<double>(rng.raw() % 12));
      std::sort(e.begin(), e.end());
      e.erase(std::unique(e.begin(), e.end()), e.end());
      if (e.size() < 2) continue;
      int first_fail = 0;
      for (int M = 1; M <= 4; ++M) {
        if (!check_nondegeneracy_order(e, M).holds) {
          first_fail = M;
          break;
        }
      }
      if (first_fail > 0)
        for (int M = first_fail; M <= 4; ++M)
          CHECK_FALSE(check_nondegeneracy_order(e, M).holds);
    }
  }
  SECTION("budget guard") {
    std::vector<double> e(200);
    for (int i = 0; i < 200; ++i) e[i] = i + 0.5 * std::sqrt(2.0 + i);
    CHECK_THROWS_AS(check_nondegeneracy_order(e, 6), std::invalid_argument);
  }
}

TEST_CASE("weight underflow at extreme beta drops empty clusters") {
  std::vector<double> e{0.0, 2.0, 5000.0};
  auto s = make_weighted_spectrum(e, 100.0); // exp(-5e5) underflows, exp(-200) survives
  CHECK(s.size() == 2);
  CHECK(s.meta["dropped_zero_weight_clusters"] == 1);
}
