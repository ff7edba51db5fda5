#pragma once

#include <functional>
#include <vector>

#include "gaborzak/window.hpp"

namespace gaborzak {

/// Uniform samples f(n * step) for n = first, ..., first + values.size() - 1.
struct SampledSignal {
  double step = 1.0 / 64.0;
  long first = 0;
  std::vector<cplx> values;

  double time(std::size_t i) const { return static_cast<double>(first + static_cast<long>(i)) * step; }
  long last() const { return first + static_cast<long>(values.size()) - 1; }

  /// Trapezoid L2 norm (the rule is exact up to the sampled tails).
  double norm() const;
};

/// Samples f on the grid n * step covering [-half_width, half_width].
SampledSignal sample_signal(const std::function<cplx(double)>& f, double step, double half_width);

}  // namespace gaborzak
