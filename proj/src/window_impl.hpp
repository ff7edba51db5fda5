#pragma once

#include <vector>

#include "gaborzak/window.hpp"

namespace gaborzak {

// Trapezoid table for the inverse Fourier integral of a totally positive
// window. Values ghat(n h) are stored for n >= 0 on the finest step; coarser
// steps are obtained by striding, chosen per evaluation point so that the
// periodisation error sum_{m != 0} g(x + m/h) stays below 1e-17.
struct TotallyPositiveTable {
  double step = 0.0;              // finest node spacing h_min
  std::vector<cplx> ghat;         // ghat(n * step), n = 0..count-1
  double decay_rate = 0.0;        // rho in |g(x)| <= c_analytic exp(-rho |x|)
  double c_analytic = 0.0;
  double period_margin = 0.0;     // P0: required period is |x| + P0
  double underflow_radius = 0.0;  // beyond this |g| < DBL_MIN
};

struct WindowSpec::Impl {
  WindowParams params;
  DecayEnvelope envelope;
  std::vector<double> hermite;  // normalised p_n coefficients, ascending
  double hermite_scale = 1.0;   // 1 / ||p_n exp(-pi x^2)||
  TotallyPositiveTable tp;

  cplx eval(double x) const;
};

// Builds and validates the decay envelope for an otherwise complete Impl.
DecayEnvelope build_envelope(const WindowSpec::Impl& impl);

cplx horner(const std::vector<cplx>& coeffs, double x);

}  // namespace gaborzak
