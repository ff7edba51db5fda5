#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "gaborzak/errors.hpp"
#include "gaborzak/parallel.hpp"
#include "gaborzak/theta.hpp"
#include "support.hpp"

using namespace gaborzak;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using testing::Rng;

namespace {

// Direct Theta sum over the box |k_j| <= r with the permutation coefficients.
cplx brute_theta(const WindowSpec& w, double alpha, int p, int q, const std::vector<int>& L, double x,
                 long N, long r) {
  cplx acc = 0.0;
  testing::for_each_k(p, r, [&](const std::vector<long>& k) {
    if (std::accumulate(k.begin(), k.end(), 0L) != N) return;
    cplx prod = 1.0;
    for (int j = 0; j < p; ++j) prod *= w(x + alpha * j / p - alpha * static_cast<double>(k[j]));
    acc += prod * testing::permutation_c(L, k, p, q);
  });
  return acc;
}

cplx brute_s0(double alpha, int p, int q, const std::vector<int>& L, long N, long r) {
  cplx acc = 0.0;
  testing::for_each_k(p, r, [&](const std::vector<long>& k) {
    if (std::accumulate(k.begin(), k.end(), 0L) != N) return;
    double e = 0.0;
    for (int j = 0; j < p; ++j) {
      const double d = static_cast<double>(j) / p - static_cast<double>(k[j]);
      e += d * d;
    }
    acc += std::exp(-kPi * alpha * alpha * e) * testing::permutation_c(L, k, p, q);
  });
  return acc;
}

}  // namespace

TEST_CASE("column sets", "[theta]") {
  CHECK(ColumnSet::all(2, 4).size() == 6);
  CHECK(ColumnSet::all(3, 5).size() == 10);
  CHECK(ColumnSet::all(1, 1).front().columns() == std::vector<int>{0});
  CHECK(ColumnSet::all(2, 3)[2].columns() == std::vector<int>{1, 2});
  CHECK_THROWS_AS(ColumnSet({1, 1}, 3), ConfigError);
  CHECK_THROWS_AS(ColumnSet({2, 1}, 3), ConfigError);
  CHECK_THROWS_AS(ColumnSet({0, 3}, 3), ConfigError);
  CHECK_THROWS_AS(ColumnSet({}, 3), ConfigError);
}

TEST_CASE("c coefficient examples", "[theta][c]") {
  CHECK(c_coeff(ColumnSet({0}, 1), {5}, 1, 1) == cplx(1.0, 0.0));
  CHECK(c_coeff(ColumnSet({0}, 4), {-3}, 1, 4) == cplx(1.0, 0.0));
  for (long k0 = -4; k0 <= 4; ++k0) {
    const cplx c = c_coeff(ColumnSet({2}, 5), {k0}, 1, 5);
    CHECK(std::abs(c - std::polar(1.0, -2.0 * kPi * 2 * k0 / 5.0)) <= 1e-15);
  }
  const ColumnSet L({0, 1}, 3);
  CHECK(c_coeff(L, {1, 0}, 2, 3) == cplx{});
  CHECK(std::abs(testing::permutation_c({0, 1}, {1, 0}, 2, 3)) <= 1e-15);
  const cplx expect = std::polar(1.0, 2.0 * kPi / 3.0) - 1.0;
  CHECK(std::abs(c_coeff(L, {0, 0}, 2, 3) - expect) <= 1e-15);
  CHECK(std::abs(testing::permutation_c({0, 1}, {0, 0}, 2, 3) - expect) <= 1e-15);
}

TEST_CASE("c coefficient: determinant, permutation sum, periodicity, vanishing", "[theta][c][property]") {
  double worst = 0.0;
  for (int q = 1; q <= 5; ++q) {
    for (int p = 1; p <= std::min(3, q); ++p) {
      double pf = 1.0;
      for (int i = 2; i <= p; ++i) pf *= i;
      for (const ColumnSet& L : ColumnSet::all(p, q)) {
        testing::for_each_k(p, 3, [&](const std::vector<long>& k) {
          const cplx c = c_coeff(L, k, p, q);
          worst = std::max(worst, std::abs(c - testing::permutation_c(L.columns(), k, p, q)));
          CHECK(std::abs(c) <= pf * (1.0 + 1e-12));
          for (int j = 0; j < p; ++j) {
            std::vector<long> kq = k;
            kq[j] += q;
            CHECK(c_coeff(L, kq, p, q) == c);
          }
          bool repeated = false;
          for (int a = 0; a < p; ++a) {
            for (int b = a + 1; b < p; ++b) {
              const long ra = ((a - p * k[a]) % q + q) % q, rb = ((b - p * k[b]) % q + q) % q;
              repeated = repeated || ra == rb;
            }
          }
          if (repeated) CHECK(c == cplx{});
        });
      }
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("theta examples", "[theta]") {
  const WindowSpec g = hermite_window(2);
  const ColumnSet only({0}, 1);
  for (double x : {-0.3, 0.0, 0.45}) {
    for (long N : {-2L, 0L, 1L}) {
      const ThetaValue t = theta(g, make_lattice(1.0, 1, 1), only, x, N);
      CHECK(t.value == g(x - static_cast<double>(N)));
      CHECK(t.error_bound == 0.0);
    }
  }
  const WindowSpec b = bump_window();
  for (int col = 0; col < 2; ++col) {
    for (long N = -3; N <= 3; ++N) {
      CHECK(theta(b, make_lattice(2.0, 1, 2), ColumnSet({col}, 2), 1.5, N).value == cplx{});
    }
  }
  CHECK(theta(gaussian_window(), make_lattice(1.0, 1, 2), ColumnSet({0}, 2), 0.0, 0).value == cplx(1.0, 0.0));
  CHECK_THROWS_AS(theta(g, make_lattice(1.0, 2, 3), ColumnSet({0}, 3), 0.0, 0), ConfigError);
}

TEST_CASE("theta matches the brute-force sum", "[theta][property]") {
  Rng rng(404);
  const std::vector<testing::NamedWindow> windows = {
      {"gaussian", gaussian_window()},
      {"hermite1", hermite_window(1)},
      {"rational", testing::rational_inverse_quadratic()},
      {"combo", testing::two_term_combo()},
      {"bump", bump_window({-0.2, 1.1})},
  };
  for (const auto& [name, w] : windows) {
    INFO(name);
    for (auto [alpha, p, q] : {std::tuple{1.0, 2, 3}, std::tuple{0.8, 2, 5}, std::tuple{1.2, 3, 4}}) {
      const RationalLattice lat(alpha, p, q);
      for (const ColumnSet& L : ColumnSet::all(p, q)) {
        const double x = rng.uniform(0.0, alpha);
        const long N = rng.integer(-2, 2);
        const ThetaValue t = theta(w, lat, L, x, N);
        const cplx ref = brute_theta(w, alpha, p, q, L.columns(), x, N, 12);
        CHECK(t.error_bound <= kDefaultEps);
        CHECK(std::abs(t.value - ref) <= t.error_bound + 1e-13);
      }
    }
  }
}

TEST_CASE("gaussian s0 examples and brute-force agreement", "[theta][s0]") {
  for (long N = -3; N <= 3; ++N) {
    const ColumnSet L({1}, 3);
    const cplx expect = std::exp(-kPi * 0.49 * N * N) * c_coeff(L, {N}, 1, 3);
    CHECK(std::abs(gaussian_s0(make_lattice(0.7, 1, 3), L, N).value - expect) <= 1e-15);
  }
  CHECK(gaussian_s0(make_lattice(1.0, 1, 2), ColumnSet({0}, 2), 0).value == cplx(1.0, 0.0));

  double best = 0.0;
  for (const ColumnSet& L : ColumnSet::all(2, 3)) {
    for (long N = -2; N <= 2; ++N) best = std::max(best, std::abs(gaussian_s0(make_lattice(1.0, 2, 3), L, N).value));
  }
  CHECK(best > 1e-6);

  for (auto [alpha, p, q] : {std::tuple{1.0, 2, 3}, std::tuple{0.6, 3, 5}}) {
    for (const ColumnSet& L : ColumnSet::all(p, q)) {
      for (long N = -2; N <= 2; ++N) {
        const ThetaValue s = gaussian_s0(make_lattice(alpha, p, q), L, N);
        CHECK(s.error_bound <= kDefaultEps);
        CHECK(std::abs(s.value - brute_s0(alpha, p, q, L.columns(), N, 10)) <= s.error_bound + 1e-13);
      }
    }
  }
}

TEST_CASE("Theta for P times the Gaussian has leading coefficient s0", "[theta][s0][property]") {
  // Theta(x, N) exp(pi (p x^2 + alpha (p-1) x - 2 x alpha N)) is a polynomial
  // of degree p d in x whose top coefficient is s0(N) for monic P.
  const std::vector<std::vector<cplx>> polys = {{1.0}, {0.5, 1.0}, {0.0, 0.0, 1.0}, {-1.0, cplx(0.3, 0.2), 1.0}};
  for (const auto& P : polys) {
    const int d = static_cast<int>(P.size()) - 1;
    const WindowSpec w(windows::PolyGaussian{P, kPi});
    for (auto [alpha, p, q] : {std::tuple{1.0, 1, 2}, std::tuple{0.9, 1, 3}, std::tuple{1.0, 2, 3}, std::tuple{0.8, 2, 5}}) {
      const RationalLattice lat(alpha, p, q);
      for (const ColumnSet& L : ColumnSet::all(p, q)) {
        for (long N = -1; N <= 1; ++N) {
          const cplx s0 = gaussian_s0(lat, L, N).value;
          if (std::abs(s0) < 1e-3) continue;
          const int deg = p * d;
          Eigen::MatrixXcd V(deg + 1, deg + 1);
          Eigen::VectorXcd rhs(deg + 1);
          for (int i = 0; i <= deg; ++i) {
            const double x = -0.5 + static_cast<double>(i) / std::max(deg, 1);
            const double e = kPi * (p * x * x + alpha * (p - 1) * x - 2.0 * x * alpha * N);
            rhs(i) = theta(w, lat, L, x, N, 1e-14).value * std::exp(e);
            for (int m = 0; m <= deg; ++m) V(i, m) = std::pow(x, m);
          }
          const Eigen::VectorXcd coef = V.fullPivLu().solve(rhs);
          INFO("d=" << d << " p=" << p << " q=" << q << " N=" << N);
          CHECK(std::abs(coef(deg) - s0) <= 1e-4 * std::abs(s0));
        }
      }
    }
  }
}

TEST_CASE("completeness certificate examples", "[theta][certificate]") {
  for (int n = 0; n <= 4; ++n) {
    INFO("hermite " << n);
    const CertificateResult r = completeness_certificate(hermite_window(n), make_lattice(1.0, 1, 2));
    REQUIRE(r.status == CertificateStatus::witness);
    REQUIRE(r.witness.has_value());
    CHECK(std::abs(r.witness->value) - r.witness->error_bound > 1e-6);
  }

  const CertificateResult g = completeness_certificate(gaussian_window(), make_lattice(1.0, 1, 1));
  REQUIRE(g.witness.has_value());
  CHECK(g.witness->columns.columns() == std::vector<int>{0});
  CHECK(g.witness->x == 0.0);
  CHECK(g.witness->N == 0);
  CHECK(g.witness->value == cplx(1.0, 0.0));

  const CertificateResult b = completeness_certificate(bump_window(), make_lattice(2.0, 1, 2));
  CHECK(b.status == CertificateStatus::no_witness);
  CHECK_FALSE(b.witness.has_value());

  const CertificateResult u = completeness_certificate(gaussian_window(), make_lattice(1.0, 3, 2));
  CHECK(u.status == CertificateStatus::incomplete_by_density);
}

TEST_CASE("certificate search is deterministic across thread counts", "[theta][certificate]") {
  const WindowSpec w = hermite_window(3);
  const RationalLattice lat(1.0, 2, 3);
  set_thread_limit(1);
  const CertificateResult a = completeness_certificate(w, lat);
  set_thread_limit(3);
  const CertificateResult b = completeness_certificate(w, lat);
  set_thread_limit(0);
  REQUIRE(a.witness.has_value());
  REQUIRE(b.witness.has_value());
  CHECK(a.witness->value == b.witness->value);
  CHECK(a.witness->x == b.witness->x);
  CHECK(a.witness->N == b.witness->N);
  CHECK(a.witness->columns.columns() == b.witness->columns.columns());
}

TEST_CASE("det Q^L is the Fourier series of Theta", "[theta][fourier]") {
  std::vector<double> xis;
  for (int i = 0; i < 16; ++i) xis.push_back(-0.9 + 0.13 * i);
  CHECK(fourier_consistency(gaussian_window(), make_lattice(1.0, 1, 1), ColumnSet({0}, 1), 0.2, 10, xis) <= 1e-8);
  CHECK(fourier_consistency(hermite_window(1), make_lattice(1.0, 1, 2), ColumnSet({1}, 2), 0.3, 10, xis) <= 1e-8);
  const WindowSpec zero(windows::PolyGaussian{{}, kPi});
  CHECK(fourier_consistency(zero, make_lattice(1.0, 2, 3), ColumnSet({0, 2}, 3), 0.1, 4, xis) == 0.0);

  for (const auto& [name, w] : testing::decaying_zoo()) {
    INFO(name);
    for (auto [p, q] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 3}}) {
      const RationalLattice lat(1.0, p, q);
      for (const ColumnSet& L : ColumnSet::all(p, q)) {
        CHECK(fourier_consistency(w, lat, L, 0.37, 12, xis) <= 1e-8);
      }
    }
  }
}

TEST_CASE("the Fourier phase carries alpha", "[theta][fourier]") {
  // At alpha != 1 only exp(2 pi i alpha N xi) reproduces det Q^L.
  std::vector<double> xis;
  for (int i = 0; i < 16; ++i) xis.push_back(0.05 + 0.11 * i);
  for (double alpha : {0.7, 1.6}) {
    const RationalLattice lat(alpha, 1, 2);
    const ColumnSet L({0}, 2);
    const WindowSpec g = gaussian_window();
    const double x = alpha / 2.0;
    CHECK(fourier_consistency(g, lat, L, x, 12, xis, PhaseConvention::scaled) <= 1e-8);
    CHECK(fourier_consistency(g, lat, L, x, 12, xis, PhaseConvention::literal) > 1e-2);
  }
}
