#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gaborzak/errors.hpp"
#include "window_impl.hpp"

namespace gaborzak {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::vector<cplx> trim(std::vector<cplx> c) {
  while (!c.empty() && c.back() == cplx{}) c.pop_back();
  return c;
}

void require_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ConfigError("window: gamma must be positive and finite");
  }
}

std::vector<double> hermite_coefficients(int n) {
  std::vector<double> p{1.0};
  for (int m = 0; m < n; ++m) {
    std::vector<double> next(p.size() + 1, 0.0);
    for (std::size_t i = 1; i < p.size(); ++i) next[i - 1] += static_cast<double>(i) * p[i];
    for (std::size_t i = 0; i < p.size(); ++i) next[i + 1] -= 4.0 * kPi * p[i];
    p = std::move(next);
  }
  return p;
}

// p_n(x) = (-1)^n (2 pi)^{n/2} H_n(sqrt(2 pi) x), evaluated through the
// three-term recurrence of the physicists' H_n. Same polynomial as the
// coefficient recurrence, without the cancellation of a monomial Horner sum.
double hermite_poly(int n, double x) {
  const double u = std::sqrt(2.0 * kPi) * x;
  double prev = 1.0;
  double cur = 2.0 * u;
  if (n == 0) return 1.0;
  for (int m = 1; m < n; ++m) {
    const double next = 2.0 * u * cur - 2.0 * m * prev;
    prev = cur;
    cur = next;
  }
  const double scale = std::pow(2.0 * kPi, 0.5 * n);
  return (n % 2 ? -scale : scale) * cur;
}

// ||p_n exp(-pi x^2)||_2 by trapezoid; the integrand is entire with Gaussian
// decay, so the rule is spectrally accurate.
double hermite_norm(int n) {
  const double half_width = 8.0 + std::sqrt(static_cast<double>(n));
  const double h = 1.0 / 256.0;
  const int m = static_cast<int>(std::ceil(half_width / h));
  double acc = 0.0;
  for (int i = -m; i <= m; ++i) {
    const double x = i * h;
    const double v = hermite_poly(n, x) * std::exp(-kPi * x * x);
    acc += v * v;
  }
  return std::sqrt(acc * h);
}

// Smallest value of |Q(x)| / (1 + |x|)^deg on a dense grid containing all
// real roots, with golden-section refinement around each grid minimum.
double denominator_floor(const std::vector<cplx>& q) {
  const int deg = static_cast<int>(q.size()) - 1;
  if (deg == 0) return std::abs(q[0]);
  double cauchy = 0.0;
  for (int i = 0; i < deg; ++i) cauchy = std::max(cauchy, std::abs(q[i] / q[deg]));
  const double range = cauchy + 2.0;
  const double h = std::max(1e-3, range / 2e5);
  const int m = static_cast<int>(std::ceil(range / h));
  auto f = [&](double x) { return std::abs(horner(q, x)) / std::pow(1.0 + std::abs(x), deg); };

  std::vector<double> vals(2 * m + 1);
  for (int i = -m; i <= m; ++i) vals[i + m] = f(i * h);
  double best = *std::min_element(vals.begin(), vals.end());
  for (int i = 1; i + 1 < static_cast<int>(vals.size()); ++i) {
    if (vals[i] > vals[i - 1] || vals[i] > vals[i + 1]) continue;
    double lo = (i - m - 1) * h;
    double hi = (i - m + 1) * h;
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 80; ++it) {
      const double a = hi - ratio * (hi - lo);
      const double b = lo + ratio * (hi - lo);
      if (f(a) < f(b)) hi = b; else lo = a;
    }
    best = std::min(best, f(0.5 * (lo + hi)));
  }
  return best;
}

TotallyPositiveTable build_tp_table(const windows::TotallyPositiveGaussian& tp) {
  TotallyPositiveTable t;
  double delta_max = 0.0;
  int poles = 0;
  for (double d : tp.deltas) {
    if (!std::isfinite(d)) throw ConfigError("window: totally positive deltas must be finite");
    if (d != 0.0) ++poles;
    delta_max = std::max(delta_max, std::abs(d));
  }
  // Contour shift by s keeps |1 + 2 pi i delta (xi + i s)| >= 1/2.
  const double s = poles > 0 ? 1.0 / (4.0 * kPi * delta_max) : 1.0;
  t.decay_rate = 2.0 * kPi * s;
  t.c_analytic = std::sqrt(kPi / tp.gamma) * std::exp(tp.gamma * s * s) * std::pow(2.0, poles);
  t.period_margin = std::log(4.0 * t.c_analytic / 1e-17) / t.decay_rate;
  t.underflow_radius =
      (std::log(t.c_analytic) - std::log(std::numeric_limits<double>::min())) / t.decay_rate;

  // Frequency cut-off: |ghat| <= exp(-gamma xi^2), tail below 1e-18.
  double cutoff = 1.0;
  while (std::exp(-tp.gamma * cutoff * cutoff) * (1.0 + 1.0 / (tp.gamma * cutoff)) > 1e-18) {
    cutoff += 0.01;
  }
  const double period_max = t.underflow_radius + t.period_margin;
  t.step = 1.0 / period_max;
  const auto count = static_cast<std::size_t>(std::floor(cutoff / t.step)) + 1;
  t.ghat.resize(count);
  for (std::size_t n = 0; n < count; ++n) {
    const double xi = static_cast<double>(n) * t.step;
    cplx v = std::exp(-tp.gamma * xi * xi);
    for (double d : tp.deltas) v /= cplx(1.0, 2.0 * kPi * d * xi);
    t.ghat[n] = v;
  }
  return t;
}

cplx eval_totally_positive(const TotallyPositiveTable& t, double x) {
  const double ax = std::abs(x);
  if (ax > t.underflow_radius) return 0.0;
  const double period_max = 1.0 / t.step;
  const auto stride = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(period_max / (ax + t.period_margin))));
  const double h = static_cast<double>(stride) * t.step;
  const std::size_t count = t.ghat.size();

  // ghat(-xi) = conj(ghat(xi)), so g is real.
  double acc = 0.0;
  cplx twiddle = 1.0;
  const cplx rotate = std::polar(1.0, 2.0 * kPi * std::remainder(x * h, 1.0));
  std::size_t k = 1;
  for (std::size_t n = stride; n < count; n += stride, ++k) {
    if ((k & 31u) == 0) {
      twiddle = std::polar(1.0, 2.0 * kPi * std::remainder(x * h * static_cast<double>(k), 1.0));
    } else {
      twiddle *= rotate;
    }
    acc += (t.ghat[n] * twiddle).real();
  }
  return h * (t.ghat[0].real() + 2.0 * acc);
}

}  // namespace

cplx horner(const std::vector<cplx>& coeffs, double x) {
  cplx acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double DecayEnvelope::operator()(double x) const {
  if (support && !(x >= support->lo && x <= support->hi)) return 0.0;
  return C * std::exp(-a * std::abs(x));
}

cplx WindowSpec::Impl::eval(double x) const {
  return std::visit(
      overloaded{
          [&](const windows::Gaussian& g) -> cplx { return std::exp(-g.gamma * x * x); },
          [&](const windows::Hermite& g) -> cplx {
            return hermite_scale * hermite_poly(g.n, x) * std::exp(-kPi * x * x);
          },
          [&](const windows::PolyGaussian& g) -> cplx {
            return horner(g.coeffs, x) * std::exp(-g.gamma * x * x);
          },
          [&](const windows::RationalGaussian& g) -> cplx {
            return horner(g.numerator, x) / horner(g.denominator, x) *
                   std::exp(-g.gamma * x * x);
          },
          [&](const windows::ExpPolyGaussian& g) -> cplx {
            cplx acc = 0.0;
            for (const auto& t : g.terms) acc += t.a * std::exp(t.lambda * x - g.gamma * x * x);
            return acc;
          },
          [&](const windows::TotallyPositiveGaussian&) -> cplx {
            return eval_totally_positive(tp, x);
          },
          [&](const windows::ShiftedGaussianCombo& g) -> cplx {
            cplx acc = 0.0;
            for (const auto& t : g.terms) {
              const double u = x - t.a;
              acc += t.d * std::polar(std::exp(-kPi * u * u), 2.0 * kPi * t.b * x);
            }
            return acc;
          },
          [&](const windows::CompactBump& g) -> cplx {
            const double t = (x - g.support.lo) / g.support.width();
            if (!(t > 0.0 && t < 1.0)) return 0.0;
            return std::exp(g.smoothness * (4.0 - 1.0 / (t * (1.0 - t))));
          },
      },
      params);
}

WindowSpec::WindowSpec(WindowParams params) {
  auto impl = std::make_shared<Impl>();
  std::visit(
      overloaded{
          [&](windows::Gaussian& g) { require_gamma(g.gamma); },
          [&](windows::Hermite& g) {
            if (g.n < 0 || g.n > 40) throw ConfigError("window: Hermite order must be in [0, 40]");
            auto c = hermite_coefficients(g.n);
            const double norm = hermite_norm(g.n);
            for (double& v : c) v /= norm;
            impl->hermite_scale = 1.0 / norm;
            impl->hermite = std::move(c);
          },
          [&](windows::PolyGaussian& g) {
            require_gamma(g.gamma);
            g.coeffs = trim(std::move(g.coeffs));
            if (g.coeffs.empty()) g.coeffs.push_back(0.0);
          },
          [&](windows::RationalGaussian& g) {
            require_gamma(g.gamma);
            g.numerator = trim(std::move(g.numerator));
            g.denominator = trim(std::move(g.denominator));
            if (g.numerator.empty()) g.numerator.push_back(0.0);
            if (g.denominator.empty()) throw ConfigError("window: rational denominator is zero");
            double scale = 0.0;
            for (const auto& c : g.denominator) scale += std::abs(c);
            if (denominator_floor(g.denominator) <= 1e-9 * scale) {
              throw ConfigError("window: rational denominator has a (numerically) real root");
            }
          },
          [&](windows::ExpPolyGaussian& g) { require_gamma(g.gamma); },
          [&](windows::TotallyPositiveGaussian& g) {
            require_gamma(g.gamma);
            impl->tp = build_tp_table(g);
          },
          [&](windows::ShiftedGaussianCombo&) {},
          [&](windows::CompactBump& g) {
            if (!(g.support.hi > g.support.lo) || !std::isfinite(g.support.lo) ||
                !std::isfinite(g.support.hi)) {
              throw ConfigError("window: bump support must be a finite interval with lo < hi");
            }
            if (!(g.smoothness > 0.0)) throw ConfigError("window: bump smoothness must be > 0");
          },
      },
      params);
  impl->params = std::move(params);
  impl->envelope = build_envelope(*impl);
  impl_ = std::move(impl);
}

cplx WindowSpec::operator()(double x) const { return impl_->eval(x); }

const WindowParams& WindowSpec::params() const noexcept { return impl_->params; }

const DecayEnvelope& WindowSpec::envelope() const noexcept { return impl_->envelope; }

std::optional<Interval> WindowSpec::support() const noexcept { return impl_->envelope.support; }

bool WindowSpec::is_compact_bump() const noexcept {
  return std::holds_alternative<windows::CompactBump>(impl_->params);
}

std::string WindowSpec::label() const {
  std::ostringstream os;
  os.precision(6);
  std::visit(overloaded{
                 [&](const windows::Gaussian& g) { os << "gaussian(gamma=" << g.gamma << ")"; },
                 [&](const windows::Hermite& g) { os << "hermite(n=" << g.n << ")"; },
                 [&](const windows::PolyGaussian& g) {
                   os << "poly_gaussian(deg=" << g.coeffs.size() - 1 << ",gamma=" << g.gamma << ")";
                 },
                 [&](const windows::RationalGaussian& g) {
                   os << "rational_gaussian(num_deg=" << g.numerator.size() - 1
                      << ",den_deg=" << g.denominator.size() - 1 << ",gamma=" << g.gamma << ")";
                 },
                 [&](const windows::ExpPolyGaussian& g) {
                   os << "exp_poly_gaussian(terms=" << g.terms.size() << ",gamma=" << g.gamma << ")";
                 },
                 [&](const windows::TotallyPositiveGaussian& g) {
                   os << "totally_positive(deltas=[";
                   for (std::size_t i = 0; i < g.deltas.size(); ++i) os << (i ? "," : "") << g.deltas[i];
                   os << "],gamma=" << g.gamma << ")";
                 },
                 [&](const windows::ShiftedGaussianCombo& g) {
                   os << "shifted_gaussian_combo(terms=" << g.terms.size() << ")";
                 },
                 [&](const windows::CompactBump& g) {
                   os << "compact_bump(support=[" << g.support.lo << "," << g.support.hi << "])";
                 },
             },
             impl_->params);
  return os.str();
}

cplx eval_window(const WindowSpec& w, double x) { return w(x); }

const DecayEnvelope& decay_envelope(const WindowSpec& w) { return w.envelope(); }

WindowSpec gaussian_window(double gamma) { return WindowSpec(windows::Gaussian{gamma}); }

WindowSpec hermite_window(int n) { return WindowSpec(windows::Hermite{n}); }

WindowSpec bump_window(Interval support, double smoothness) {
  return WindowSpec(windows::CompactBump{support, smoothness});
}

}  // namespace gaborzak
