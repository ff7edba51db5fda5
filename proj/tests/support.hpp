#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gaborzak/window.hpp"

namespace testing {

using gaborzak::cplx;
using gaborzak::kPi;
using gaborzak::WindowSpec;
namespace win = gaborzak::windows;

// Small deterministic generator for property tests. Raw mt19937_64 output is
// mapped by hand so draws are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  long integer(long lo, long hi) {
    return lo + static_cast<long>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  cplx complex(double r) { return {uniform(-r, r), uniform(-r, r)}; }

 private:
  std::mt19937_64 gen_;
};

struct NamedWindow {
  std::string name;
  WindowSpec w;
};

inline WindowSpec rational_inverse_quadratic() {
  return WindowSpec(win::RationalGaussian{{1.0}, {1.0, 0.0, 1.0}, kPi});
}

inline WindowSpec two_term_combo() {
  return WindowSpec(win::ShiftedGaussianCombo{{{1.0, 0.0, 0.0}, {cplx(0.5, 0.25), 0.5, 0.75}}});
}

// Window families with exponential decay in time and frequency.
inline std::vector<NamedWindow> decaying_zoo() {
  return {
      {"gaussian", gaborzak::gaussian_window()},
      {"gaussian(gamma=2)", gaborzak::gaussian_window(2.0)},
      {"hermite1", gaborzak::hermite_window(1)},
      {"hermite3", gaborzak::hermite_window(3)},
      {"poly x^2+1", WindowSpec(win::PolyGaussian{{1.0, 0.0, 1.0}, kPi})},
      {"rational 1/(1+x^2)", rational_inverse_quadratic()},
      {"cosh", WindowSpec(win::ExpPolyGaussian{{{1.0, 1.0}, {1.0, -1.0}}, kPi})},
      {"totally positive [0.3,-0.2]", WindowSpec(win::TotallyPositiveGaussian{{0.3, -0.2}, kPi})},
      {"shifted combo", two_term_combo()},
  };
}

// Normalised Hermite functions from the physicists' polynomials:
// h_n(x) = 2^{1/4} / sqrt(2^n n!) H_n(sqrt(2 pi) x) exp(-pi x^2).
inline double reference_hermite(int n, double x) {
  const double u = std::sqrt(2.0 * kPi) * x;
  double h0 = 1.0, h1 = 2.0 * u;
  double hn = n == 0 ? h0 : h1;
  for (int m = 1; m < n; ++m) {
    hn = 2.0 * u * h1 - 2.0 * m * h0;
    h0 = h1;
    h1 = hn;
  }
  double norm = std::pow(2.0, 0.25);
  for (int m = 1; m <= n; ++m) norm /= std::sqrt(2.0 * m);
  return norm * hn * std::exp(-kPi * x * x);
}

// Direct Zak sum with a fixed generous range, no envelope involved.
template <class F>
cplx brute_zak(const F& f, double alpha, double x, double xi, int range = 60) {
  cplx acc = 0.0;
  for (int k = -range; k <= range; ++k) {
    acc += f(x - alpha * k) * std::polar(1.0, 2.0 * kPi * alpha * k * xi);
  }
  return acc;
}

// Signed sum over the permutations sigma of L:
// sum sgn(sigma) exp(2 pi i sum_j [-p sigma(l_j) k_j / q + j sigma(l_j) / q]).
inline cplx permutation_c(const std::vector<int>& L, const std::vector<long>& k, int p, int q) {
  std::vector<int> perm(p);
  std::iota(perm.begin(), perm.end(), 0);
  cplx acc = 0.0;
  do {
    int inversions = 0;
    for (int a = 0; a < p; ++a) {
      for (int b = a + 1; b < p; ++b) inversions += perm[a] > perm[b];
    }
    double phase = 0.0;
    for (int j = 0; j < p; ++j) {
      const double l = L[perm[j]];
      phase += (-static_cast<double>(p) * l * static_cast<double>(k[j]) + j * l) / q;
    }
    acc += (inversions % 2 ? -1.0 : 1.0) * std::polar(1.0, 2.0 * kPi * phase);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc;
}

inline void for_each_k(int p, long r, const std::function<void(const std::vector<long>&)>& body) {
  std::vector<long> k(p, -r);
  while (true) {
    body(k);
    int j = p - 1;
    while (j >= 0 && k[j] == r) k[j--] = -r;
    if (j < 0) return;
    ++k[j];
  }
}

}  // namespace testing
