#include "gaborzak/signal.hpp"

#include <cmath>

#include "gaborzak/errors.hpp"

namespace gaborzak {

double SampledSignal::norm() const {
  double acc = 0.0;
  for (const cplx& v : values) acc += std::norm(v);
  return std::sqrt(acc * step);
}

SampledSignal sample_signal(const std::function<cplx(double)>& f, double step, double half_width) {
  if (!(step > 0.0) || !(half_width > 0.0)) throw ConfigError("sample_signal: bad grid");
  SampledSignal s;
  s.step = step;
  const long m = static_cast<long>(std::ceil(half_width / step - 1e-9));
  s.first = -m;
  s.values.reserve(2 * m + 1);
  for (long n = -m; n <= m; ++n) s.values.push_back(f(static_cast<double>(n) * step));
  return s;
}

}  // namespace gaborzak
