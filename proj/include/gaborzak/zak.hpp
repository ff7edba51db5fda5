#pragma once

#include <vector>

#include "gaborzak/lattice.hpp"
#include "gaborzak/window.hpp"

namespace gaborzak {

/// Default absolute truncation tolerance for every Zak-type series.
inline constexpr double kDefaultEps = 1e-12;

/// Hard cap on the truncation radius K of a single Zak series.
inline constexpr long kMaxZakRadius = 1'000'000;

struct ZakValue {
  cplx value;
  double truncation_bound = 0.0;  // certified bound on the omitted tail
  long terms_used = 0;            // truncation radius K
};

/// Smallest K with sum_{|k|>K} C exp(-a(alpha|k| - |x|)) <= eps, and that sum.
struct Truncation {
  long radius = 0;
  double bound = 0.0;
};

Truncation zak_truncation(const DecayEnvelope& env, double alpha, double x, double eps);

/// The samples g(x - alpha k), |k| <= K, of one Zak series at fixed x.
///
/// Evaluating at many xi reuses the samples, which is how matrix assembly
/// and grid scans share work across columns. Terms are summed in the order
/// k = 0, 1, -1, 2, -2, ... so results do not depend on the caller.
class ZakSeries {
 public:
  ZakSeries(const WindowSpec& w, double alpha, double x, double eps = kDefaultEps);

  cplx operator()(double xi) const;

  double x() const noexcept { return x_; }
  long radius() const noexcept { return radius_; }
  double truncation_bound() const noexcept { return bound_; }

 private:
  double alpha_;
  double x_;
  long radius_ = 0;
  double bound_ = 0.0;
  std::vector<long> shifts_;
  std::vector<cplx> samples_;
};

/// Z_alpha g(x, xi) = sum_k g(x - alpha k) exp(2 pi i alpha k xi), truncated
/// with a certified tail bound. Exact for compactly supported windows.
/// Throws NumericalError when eps needs K > kMaxZakRadius.
ZakValue zak(const WindowSpec& w, double alpha, double x, double xi, double eps = kDefaultEps);

/// (Z_alpha g(x + alpha r / p, xi))_{r = 0..p-1}
std::vector<cplx> vector_zak(const WindowSpec& w, const RationalLattice& lattice, double x,
                             double xi, double eps = kDefaultEps);

/// exp(2 pi i t), with t reduced modulo 1 first.
cplx unit_phase(double t);

}  // namespace gaborzak
