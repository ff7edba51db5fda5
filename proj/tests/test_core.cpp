#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <thread>

#include "gaborzak/errors.hpp"
#include "gaborzak/lattice.hpp"
#include "gaborzak/window.hpp"
#include "support.hpp"

using namespace gaborzak;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using testing::Rng;

TEST_CASE("make_lattice reduces and derives beta", "[core][lattice]") {
  const auto a = make_lattice(1.0, 2, 3);
  CHECK(a.p() == 2);
  CHECK(a.q() == 3);
  CHECK_THAT(a.beta(), WithinRel(2.0 / 3.0, 1e-15));

  const auto b = make_lattice(1.0, 2, 4);
  CHECK(b.p() == 1);
  CHECK(b.q() == 2);
  CHECK_THAT(b.beta(), WithinRel(0.5, 1e-15));

  const auto c = make_lattice(0.5, 1, 1);
  CHECK_THAT(c.beta(), WithinRel(2.0, 1e-15));
  CHECK_THAT(c.alpha() * c.beta(), WithinRel(1.0, 1e-15));

  CHECK(make_lattice(1.0, 3, 2).undersampled());
  CHECK_FALSE(make_lattice(1.0, 2, 3).undersampled());
}

TEST_CASE("make_lattice rejects non-positive input", "[core][lattice]") {
  CHECK_THROWS_AS(make_lattice(0.0, 1, 1), ConfigError);
  CHECK_THROWS_AS(make_lattice(-1.0, 1, 1), ConfigError);
  CHECK_THROWS_AS(make_lattice(1.0, 0, 1), ConfigError);
  CHECK_THROWS_AS(make_lattice(1.0, 1, -2), ConfigError);
  CHECK_THROWS_AS(make_lattice(std::nan(""), 1, 1), ConfigError);
}

TEST_CASE("lattice density relation holds for random fractions", "[core][lattice][property]") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const double alpha = rng.uniform(0.1, 5.0);
    const long p = rng.integer(1, 40), q = rng.integer(1, 40);
    const auto l = make_lattice(alpha, p, q);
    CHECK(std::gcd(l.p(), l.q()) == 1);
    CHECK(static_cast<long>(l.p()) * q == static_cast<long>(l.q()) * p);
    CHECK_THAT(l.alpha() * l.beta(), WithinRel(static_cast<double>(p) / q, 1e-14));
  }
}

TEST_CASE("window point values", "[core][window]") {
  CHECK(gaussian_window()(0.0) == cplx(1.0, 0.0));
  CHECK(hermite_window(1)(0.0) == cplx(0.0, 0.0));
  CHECK_THAT(std::abs(gaussian_window(2.0)(0.5)), WithinRel(std::exp(-0.5), 1e-15));

  const WindowSpec combo(windows::ShiftedGaussianCombo{{{cplx(2.0, -1.0), 0.5, 0.75}}});
  for (double x : {-1.3, 0.0, 0.4, 2.2}) {
    const cplx expect = cplx(2.0, -1.0) * std::polar(1.0, 2.0 * kPi * 0.75 * x) *
                        std::exp(-kPi * (x - 0.5) * (x - 0.5));
    CHECK(std::abs(combo(x) - expect) < 1e-14);
  }

  const WindowSpec cosh_w(windows::ExpPolyGaussian{{{1.0, 1.0}, {1.0, -1.0}}, kPi});
  for (double x : {-2.0, -0.3, 0.0, 1.7}) {
    CHECK_THAT(cosh_w(x).real(), WithinRel(2.0 * std::cosh(x) * std::exp(-kPi * x * x), 1e-13));
  }
}

TEST_CASE("hermite functions match the physicists' polynomials", "[core][window]") {
  for (int n = 0; n <= 12; ++n) {
    const WindowSpec h = hermite_window(n);
    const double sign = n % 2 ? -1.0 : 1.0;
    for (double x = -3.0; x <= 3.0; x += 0.173) {
      CHECK(std::abs(h(x).real() - sign * testing::reference_hermite(n, x)) < 1e-10);
    }
  }
}

TEST_CASE("hermite functions are orthonormal", "[core][window][property]") {
  const double h = 1.0 / 128.0;
  for (int m = 0; m <= 6; ++m) {
    for (int n = m; n <= 6; ++n) {
      const WindowSpec a = hermite_window(m), b = hermite_window(n);
      double acc = 0.0;
      for (int i = -1280; i <= 1280; ++i) acc += (a(i * h) * std::conj(b(i * h))).real();
      CHECK_THAT(acc * h, WithinAbs(m == n ? 1.0 : 0.0, 1e-8));
    }
  }
}

// Inverse Fourier transform of exp(-pi xi^2) / (1 + 2 pi i delta xi) in closed form:
// the Gaussian convolved with the one-sided exponential (1/delta) e^{-x/delta} 1_{x>0}.
static double one_pole_reference(double delta, double x) {
  if (delta < 0.0) return one_pole_reference(-delta, -x);
  const double c = 1.0 / (2.0 * kPi * delta);
  return 0.5 / delta * std::exp(1.0 / (4.0 * kPi * delta * delta) - x / delta) *
         std::erfc(std::sqrt(kPi) * (c - x));
}

TEST_CASE("totally positive windows against closed forms", "[core][window]") {
  const WindowSpec plain(windows::TotallyPositiveGaussian{{}, kPi});
  for (double x = -4.0; x <= 4.0; x += 0.37) {
    CHECK(std::abs(plain(x) - std::exp(-kPi * x * x)) < 1e-12);
  }
  for (double delta : {0.5, 0.3, -0.2}) {
    const WindowSpec tp(windows::TotallyPositiveGaussian{{delta}, kPi});
    for (double x = -2.5; x <= 2.5; x += 0.31) {
      CHECK(std::abs(tp(x) - one_pole_reference(delta, x)) < 1e-11);
    }
  }
}

TEST_CASE("rational window with unit denominator equals the polynomial window", "[core][window]") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<cplx> c;
    const int deg = static_cast<int>(rng.integer(0, 4));
    for (int i = 0; i <= deg; ++i) c.push_back(rng.complex(2.0));
    const double gamma = rng.uniform(1.0, 5.0);
    const WindowSpec poly(windows::PolyGaussian{c, gamma});
    const WindowSpec rat(windows::RationalGaussian{c, {1.0}, gamma});
    for (int i = 0; i < 20; ++i) {
      const double x = rng.uniform(-4.0, 4.0);
      CHECK(std::abs(poly(x) - rat(x)) <= 1e-14 * (1.0 + std::abs(poly(x))));
    }
  }
}

TEST_CASE("single shifted term at the origin is the Gaussian", "[core][window]") {
  const WindowSpec combo(windows::ShiftedGaussianCombo{{{1.0, 0.0, 0.0}}});
  const WindowSpec g = gaussian_window();
  for (double x = -5.0; x <= 5.0; x += 0.01) CHECK(combo(x) == g(x));
}

TEST_CASE("ill-posed windows are rejected", "[core][window]") {
  CHECK_THROWS_AS(gaussian_window(0.0), ConfigError);
  CHECK_THROWS_AS(gaussian_window(-1.0), ConfigError);
  CHECK_THROWS_AS(hermite_window(-1), ConfigError);
  // x^2 - 1 vanishes at +-1
  CHECK_THROWS_AS(WindowSpec(windows::RationalGaussian{{1.0}, {-1.0, 0.0, 1.0}, kPi}), ConfigError);
  // (x - 0.3)^2 touches zero without a sign change
  CHECK_THROWS_AS(WindowSpec(windows::RationalGaussian{{1.0}, {0.09, -0.6, 1.0}, kPi}), ConfigError);
  CHECK_NOTHROW(WindowSpec(windows::RationalGaussian{{1.0}, {1.0, 0.0, 1.0}, kPi}));
  CHECK_THROWS_AS(WindowSpec(windows::ExpPolyGaussian{{{1.0, 0.0}}, 0.0}), ConfigError);
  CHECK_THROWS_AS(bump_window({1.0, 0.5}), ConfigError);
}

TEST_CASE("empty coefficient list is the zero window", "[core][window]") {
  const WindowSpec zero(windows::PolyGaussian{{}, kPi});
  for (double x : {-1.0, 0.0, 2.5}) CHECK(zero(x) == cplx{});
  CHECK(std::isfinite(zero.envelope().C));
}

TEST_CASE("compact bump vanishes outside its support", "[core][window]") {
  const WindowSpec b = bump_window({0.0, 1.0});
  CHECK(b(0.5) == cplx(1.0, 0.0));
  for (double x : {-3.0, -1e-9, 0.0, 1.0, 1.0 + 1e-12, 7.5}) CHECK(b(x) == cplx{});
  CHECK(b(0.25).real() > 0.0);

  const WindowSpec shifted = bump_window({1.0, 2.0});
  CHECK(shifted(1.5) == cplx(1.0, 0.0));
  CHECK(shifted(0.5) == cplx{});
}

TEST_CASE("decay envelope examples", "[core][envelope]") {
  const DecayEnvelope g = decay_envelope(gaussian_window());
  CHECK(g.a == 1.0);
  const double peak = std::exp(1.0 / (4.0 * kPi));  // max of exp(-pi x^2 + |x|)
  CHECK(g.C >= peak);
  CHECK(g.C <= 1.06 * peak);

  const DecayEnvelope b = decay_envelope(bump_window());
  REQUIRE(b.support.has_value());
  CHECK(b.support->lo == 0.0);
  CHECK(b.support->hi == 1.0);
  CHECK(b(1.5) == 0.0);
  CHECK(b(-0.1) == 0.0);

  // Independent scan of |h_3(x)| e^{|x|} from the reference formula.
  const DecayEnvelope h3 = decay_envelope(hermite_window(3));
  double scan = 0.0;
  for (double x = -6.0; x <= 6.0; x += 1e-4) {
    scan = std::max(scan, std::abs(testing::reference_hermite(3, x)) * std::exp(std::abs(x)));
  }
  CHECK(h3.C >= scan * (1.0 - 1e-9));
  CHECK(h3.C <= 1.1 * scan);

  const DecayEnvelope tp = decay_envelope(WindowSpec(windows::TotallyPositiveGaussian{{0.5, -0.25}, kPi}));
  CHECK_THAT(tp.a, WithinRel(0.5 / (2.0 * kPi * 0.5), 1e-15));
}

TEST_CASE("decay envelopes dominate the windows", "[core][envelope][property]") {
  Rng rng(2024);
  auto zoo = testing::decaying_zoo();
  zoo.push_back({"hermite 10", hermite_window(10)});
  zoo.push_back({"rational (x+i)/(x^2+4)", WindowSpec(windows::RationalGaussian{{cplx(0, 1), 1.0}, {4.0, 0.0, 1.0}, 2.0})});
  zoo.push_back({"totally positive [0.5]", WindowSpec(windows::TotallyPositiveGaussian{{0.5}, kPi})});
  zoo.push_back({"bump", bump_window({-0.5, 1.5})});
  for (const auto& [name, w] : zoo) {
    INFO(name);
    const DecayEnvelope& env = w.envelope();
    const double X = std::max(env.valid_radius, 1.0);
    for (int i = 0; i < 1000; ++i) {
      const double x = rng.uniform(-3.0 * X, 3.0 * X);
      CHECK(std::abs(w(x)) <= env(x) + 1e-12);
    }
  }
}

TEST_CASE("windows are safe to evaluate concurrently", "[core][window]") {
  const WindowSpec tp(windows::TotallyPositiveGaussian{{0.3, -0.2}, kPi});
  std::vector<cplx> serial(400), parallel(400);
  for (int i = 0; i < 400; ++i) serial[i] = tp(-4.0 + 0.02 * i);
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([&, t] {
      for (int i = t; i < 400; i += 4) parallel[i] = tp(-4.0 + 0.02 * i);
    });
  }
  for (auto& th : pool) th.join();
  CHECK(serial == parallel);
}
