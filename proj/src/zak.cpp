#include "gaborzak/zak.hpp"

#include <cmath>

#include "gaborzak/errors.hpp"

namespace gaborzak {

cplx unit_phase(double t) { return std::polar(1.0, 2.0 * kPi * (t - std::nearbyint(t))); }

Truncation zak_truncation(const DecayEnvelope& env, double alpha, double x, double eps) {
  if (!(eps > 0.0)) throw ConfigError("zak: eps must be positive");
  if (!(alpha > 0.0)) throw ConfigError("zak: alpha must be positive");
  const double decay = env.a * alpha;
  const double geometric = 2.0 * env.C / (-std::expm1(-decay));
  auto tail = [&](double k) { return geometric * std::exp(env.a * std::abs(x) - decay * (k + 1.0)); };

  const double needed = (std::log(geometric / eps) + env.a * std::abs(x)) / decay - 1.0;
  if (needed > static_cast<double>(kMaxZakRadius)) {
    throw NumericalError("zak: tolerance unreachable within the truncation cap",
                         tail(static_cast<double>(kMaxZakRadius)));
  }
  Truncation t;
  t.radius = std::max(0L, static_cast<long>(std::ceil(needed)));
  t.bound = tail(static_cast<double>(t.radius));
  return t;
}

ZakSeries::ZakSeries(const WindowSpec& w, double alpha, double x, double eps)
    : alpha_(alpha), x_(x) {
  auto push = [&](long k) {
    shifts_.push_back(k);
    samples_.push_back(w(x - alpha * static_cast<double>(k)));
  };
  if (const auto support = w.support()) {
    // Only shifts with x - alpha k inside the support contribute.
    if (!(alpha > 0.0)) throw ConfigError("zak: alpha must be positive");
    const auto k_lo = static_cast<long>(std::ceil((x - support->hi) / alpha));
    const auto k_hi = static_cast<long>(std::floor((x - support->lo) / alpha));
    radius_ = 0;
    for (long m = 0;; ++m) {
      const bool pos = m >= k_lo && m <= k_hi;
      const bool neg = m > 0 && -m >= k_lo && -m <= k_hi;
      if (pos) push(m);
      if (neg) push(-m);
      if (pos || neg) radius_ = m;
      if (m > std::max(std::abs(k_lo), std::abs(k_hi))) break;
    }
    bound_ = 0.0;
    return;
  }
  const Truncation t = zak_truncation(w.envelope(), alpha, x, eps);
  radius_ = t.radius;
  bound_ = t.bound;
  shifts_.reserve(2 * radius_ + 1);
  samples_.reserve(2 * radius_ + 1);
  push(0);
  for (long m = 1; m <= radius_; ++m) {
    push(m);
    push(-m);
  }
}

cplx ZakSeries::operator()(double xi) const {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < shifts_.size(); ++i) {
    if (samples_[i] == cplx{}) continue;
    acc += samples_[i] * unit_phase(alpha_ * static_cast<double>(shifts_[i]) * xi);
  }
  return acc;
}

ZakValue zak(const WindowSpec& w, double alpha, double x, double xi, double eps) {
  const ZakSeries series(w, alpha, x, eps);
  return {series(xi), series.truncation_bound(), series.radius()};
}

std::vector<cplx> vector_zak(const WindowSpec& w, const RationalLattice& lattice, double x,
                             double xi, double eps) {
  std::vector<cplx> out;
  out.reserve(lattice.p());
  for (int r = 0; r < lattice.p(); ++r) {
    out.push_back(zak(w, lattice.alpha(), x + lattice.alpha() * r / lattice.p(), xi, eps).value);
  }
  return out;
}

}  // namespace gaborzak
