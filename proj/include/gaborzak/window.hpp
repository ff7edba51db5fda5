#pragma once

#include <complex>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gaborzak {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double width() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return x > lo && x < hi; }
};

// Window families. Polynomial coefficient lists are in ascending order of
// power: {c0, c1, c2} means c0 + c1 x + c2 x^2.
namespace windows {

/// exp(-gamma x^2)
struct Gaussian {
  double gamma = kPi;
};

/// L2-normalised Hermite function p_n(x) exp(-pi x^2).
struct Hermite {
  int n = 0;
};

/// P(x) exp(-gamma x^2)
struct PolyGaussian {
  std::vector<cplx> coeffs;
  double gamma = kPi;
};

/// P(x)/Q(x) exp(-gamma x^2); Q must not vanish on the real line.
struct RationalGaussian {
  std::vector<cplx> numerator;
  std::vector<cplx> denominator;
  double gamma = kPi;
};

struct ExpTerm {
  cplx a;
  cplx lambda;
};

/// sum_j a_j exp(lambda_j x) * exp(-gamma x^2)
struct ExpPolyGaussian {
  std::vector<ExpTerm> terms;
  double gamma = kPi;
};

/// Inverse Fourier transform of exp(-gamma xi^2) prod_j (1 + 2 pi i delta_j xi)^-1.
struct TotallyPositiveGaussian {
  std::vector<double> deltas;
  double gamma = kPi;
};

/// d * M_b T_a phi with phi(x) = exp(-pi x^2).
struct ShiftedTerm {
  cplx d;
  double a = 0.0;
  double b = 0.0;
};

struct ShiftedGaussianCombo {
  std::vector<ShiftedTerm> terms;
};

/// exp(s (4 - 1/(t(1-t)))) with t the support coordinate rescaled to (0, 1).
/// Peak value 1 at the midpoint, identically zero outside the open support.
struct CompactBump {
  Interval support{0.0, 1.0};
  double smoothness = 1.0;
};

}  // namespace windows

using WindowParams = std::variant<windows::Gaussian, windows::Hermite, windows::PolyGaussian,
                                  windows::RationalGaussian, windows::ExpPolyGaussian,
                                  windows::TotallyPositiveGaussian, windows::ShiftedGaussianCombo,
                                  windows::CompactBump>;

/// Certified bound |g(x)| <= C exp(-a |x|).
///
/// The bound holds on all of R. valid_radius is the radius beyond which it
/// follows from an analytic majorant; inside it, C comes from a dense scan.
/// Compactly supported windows also carry their support, outside of which
/// the window is exactly zero.
struct DecayEnvelope {
  double C = 1.0;
  double a = 1.0;
  double valid_radius = 0.0;
  std::optional<Interval> support;

  double operator()(double x) const;
};

/// Immutable, validated window function. Cheap to copy (shared state).
class WindowSpec {
 public:
  explicit WindowSpec(WindowParams params);

  cplx operator()(double x) const;

  const WindowParams& params() const noexcept;
  const DecayEnvelope& envelope() const noexcept;
  std::optional<Interval> support() const noexcept;
  bool is_compact_bump() const noexcept;

  /// Short stable identifier, e.g. "hermite(n=3)".
  std::string label() const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
};

cplx eval_window(const WindowSpec& w, double x);
const DecayEnvelope& decay_envelope(const WindowSpec& w);

// Convenience constructors for the common windows.
WindowSpec gaussian_window(double gamma = kPi);
WindowSpec hermite_window(int n);
WindowSpec bump_window(Interval support = {0.0, 1.0}, double smoothness = 1.0);

}  // namespace gaborzak
