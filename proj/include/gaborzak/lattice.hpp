#pragma once

#include <cstdint>
#include <string>

namespace gaborzak {

/// Time-frequency lattice alpha*Z x beta*Z with alpha*beta = p/q, gcd(p, q) = 1.
///
/// beta is never stored; it is always derived from (alpha, p, q) so the
/// density relation holds by construction.
class RationalLattice {
 public:
  RationalLattice(double alpha, std::int64_t p, std::int64_t q);

  double alpha() const noexcept { return alpha_; }
  int p() const noexcept { return p_; }
  int q() const noexcept { return q_; }
  double beta() const noexcept { return static_cast<double>(p_) / (q_ * alpha_); }
  double density() const noexcept { return static_cast<double>(p_) / q_; }

  /// True when p > q: the system cannot be complete (rank bound).
  bool undersampled() const noexcept { return p_ > q_; }

  std::string to_string() const;

  friend bool operator==(const RationalLattice&, const RationalLattice&) = default;

 private:
  double alpha_;
  int p_;
  int q_;
};

RationalLattice make_lattice(double alpha, std::int64_t p, std::int64_t q);

}  // namespace gaborzak
