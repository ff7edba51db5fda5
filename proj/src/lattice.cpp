#include "gaborzak/lattice.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "gaborzak/errors.hpp"

namespace gaborzak {

RationalLattice::RationalLattice(double alpha, std::int64_t p, std::int64_t q) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ConfigError("lattice: alpha must be a positive finite number");
  }
  if (p <= 0 || q <= 0) {
    throw ConfigError("lattice: p and q must be positive integers");
  }
  const std::int64_t g = std::gcd(p, q);
  p /= g;
  q /= g;
  if (p > std::numeric_limits<int>::max() || q > std::numeric_limits<int>::max()) {
    throw ConfigError("lattice: reduced p/q does not fit in int");
  }
  alpha_ = alpha;
  p_ = static_cast<int>(p);
  q_ = static_cast<int>(q);
}

std::string RationalLattice::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << "alpha=" << alpha_ << " p=" << p_ << " q=" << q_ << " beta=" << beta();
  return os.str();
}

RationalLattice make_lattice(double alpha, std::int64_t p, std::int64_t q) {
  return RationalLattice(alpha, p, q);
}

}  // namespace gaborzak
