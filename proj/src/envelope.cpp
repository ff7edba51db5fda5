#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "gaborzak/errors.hpp"
#include "window_impl.hpp"

namespace gaborzak {

namespace {

// Analytic bound |g(x)| <= tail(|x|) for |x| >= from. The prefactor of
// exp(-gamma x^2) has logarithmic derivative at most degree/x + rate, which
// fixes where tail(x) * exp(a x) starts to decrease.
struct TailMajorant {
  std::function<double(double)> tail;
  double from = 0.0;
  double degree = 0.0;
  double rate = 0.0;
  double gamma = kPi;
};

double poly_abs(const std::vector<cplx>& c, double ax) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * ax + std::abs(*it);
  return acc;
}

double poly_abs(const std::vector<double>& c, double ax) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * ax + std::abs(*it);
  return acc;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

TailMajorant gaussian_family_majorant(const WindowSpec::Impl& impl) {
  return std::visit(
      overloaded{
          [](const windows::Gaussian& g) {
            return TailMajorant{[=](double x) { return std::exp(-g.gamma * x * x); }, 0.0, 0.0, 0.0,
                                g.gamma};
          },
          [&](const windows::Hermite& g) {
            const auto c = impl.hermite;
            return TailMajorant{[c](double x) { return poly_abs(c, x) * std::exp(-kPi * x * x); },
                                0.0, static_cast<double>(g.n), 0.0, kPi};
          },
          [](const windows::PolyGaussian& g) {
            return TailMajorant{
                [=](double x) { return poly_abs(g.coeffs, x) * std::exp(-g.gamma * x * x); }, 0.0,
                static_cast<double>(g.coeffs.size() - 1), 0.0, g.gamma};
          },
          [](const windows::RationalGaussian& g) {
            // For |x| >= 2 max|root|, |Q(x)| >= |q_d| (|x|/2)^d.
            const auto& q = g.denominator;
            const int d = static_cast<int>(q.size()) - 1;
            double cauchy = 0.0;
            for (int i = 0; i < d; ++i) cauchy = std::max(cauchy, std::abs(q[i] / q[d]));
            const double from = d > 0 ? 2.0 * (1.0 + cauchy) : 0.0;
            const double lead = std::abs(q[d]);
            return TailMajorant{[=](double x) {
                                  return poly_abs(g.numerator, x) * std::pow(2.0 / x, d) / lead *
                                         std::exp(-g.gamma * x * x);
                                },
                                from, static_cast<double>(g.numerator.size() - 1), 0.0, g.gamma};
          },
          [](const windows::ExpPolyGaussian& g) {
            double rate = 0.0;
            for (const auto& t : g.terms) rate = std::max(rate, std::abs(t.lambda.real()));
            return TailMajorant{[=](double x) {
                                  double acc = 0.0;
                                  for (const auto& t : g.terms) {
                                    acc += std::abs(t.a) *
                                           std::exp(std::abs(t.lambda.real()) * x - g.gamma * x * x);
                                  }
                                  return acc;
                                },
                                0.0, 0.0, rate, g.gamma};
          },
          [](const windows::ShiftedGaussianCombo& g) {
            double rate = 0.0;
            for (const auto& t : g.terms) rate = std::max(rate, 2.0 * kPi * std::abs(t.a));
            return TailMajorant{[=](double x) {
                                  double acc = 0.0;
                                  for (const auto& t : g.terms) {
                                    acc += std::abs(t.d) * std::exp(-kPi * t.a * t.a +
                                                                    2.0 * kPi * std::abs(t.a) * x -
                                                                    kPi * x * x);
                                  }
                                  return acc;
                                },
                                0.0, 0.0, rate, kPi};
          },
          [](const auto&) -> TailMajorant {
            throw std::logic_error("gaussian_family_majorant: unsupported window");
          },
      },
      impl.params);
}

double scan_max(const WindowSpec::Impl& impl, double a, double radius, double step) {
  const int m = static_cast<int>(std::ceil(radius / step));
  double best = 0.0;
  for (int i = -m; i <= m; ++i) {
    const double x = std::clamp(i * step, -radius, radius);
    best = std::max(best, std::abs(impl.eval(x)) * std::exp(a * std::abs(x)));
  }
  return best;
}

// Checks the bound on a grid offset from the one used to build it, out to
// twice the certified radius, so that both the scanned core and the analytic
// tail are exercised.
void validate(const WindowSpec::Impl& impl, const DecayEnvelope& env, double step) {
  const double reach = 2.0 * env.valid_radius + 1.0;
  const int m = static_cast<int>(std::ceil(reach / step));
  for (int i = -m; i < m; ++i) {
    const double x = (i + 0.5) * step;
    const double v = std::abs(impl.eval(x));
    if (v > env(x) + 1e-14) {
      throw NumericalError("decay envelope validation failed at x = " + std::to_string(x),
                           v - env(x));
    }
  }
}

constexpr double kSafety = 1.05;

}  // namespace

DecayEnvelope build_envelope(const WindowSpec::Impl& impl) {
  DecayEnvelope env;
  const double tiny = std::numeric_limits<double>::min();

  if (const auto* bump = std::get_if<windows::CompactBump>(&impl.params)) {
    const double reach = std::max(std::abs(bump->support.lo), std::abs(bump->support.hi));
    env.a = 1.0;
    env.C = std::exp(reach);  // |g| <= 1 on the support
    env.valid_radius = reach;
    env.support = bump->support;
    return env;
  }

  if (const auto* tp = std::get_if<windows::TotallyPositiveGaussian>(&impl.params)) {
    double delta_max = 0.0;
    for (double d : tp->deltas) delta_max = std::max(delta_max, std::abs(d));
    env.a = delta_max > 0.0 ? 0.5 / (2.0 * kPi * delta_max) : 1.0;
    const double excess = impl.tp.decay_rate - env.a;
    const double peak = std::max(std::abs(impl.eval(0.0)), 1e-300);
    env.valid_radius = std::max(1.0, std::log(impl.tp.c_analytic / (1e-3 * peak)) / excess);
    const double step = std::min(1.0 / 64.0, env.valid_radius / 512.0);
    env.C = std::max({kSafety * scan_max(impl, env.a, env.valid_radius, step),
                      impl.tp.c_analytic * std::exp(-excess * env.valid_radius), tiny});
    validate(impl, env, step);
    return env;
  }

  const TailMajorant maj = gaussian_family_majorant(impl);
  env.a = 1.0;
  const double ar = env.a + maj.rate;
  const double turn = (ar + std::sqrt(ar * ar + 8.0 * maj.gamma * maj.degree)) / (4.0 * maj.gamma);
  env.valid_radius = std::max({1.0, maj.from, turn});
  // Past the turning point the majorant decreases, so pushing the radius out
  // until it drops below the scanned maximum keeps C close to the true peak.
  double step = 0.0, scanned = 0.0, tail_at_radius = 0.0;
  for (int iter = 0; iter < 40; ++iter) {
    step = std::min(1.0 / 256.0, env.valid_radius / 2048.0);
    scanned = kSafety * scan_max(impl, env.a, env.valid_radius, step);
    tail_at_radius = maj.tail(env.valid_radius) * std::exp(env.a * env.valid_radius);
    if (tail_at_radius <= scanned) break;
    env.valid_radius *= 1.25;
  }
  env.C = std::max({scanned, tail_at_radius, tiny});
  validate(impl, env, step);
  return env;
}

}  // namespace gaborzak
