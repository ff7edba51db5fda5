#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gaborzak/lattice.hpp"
#include "gaborzak/window.hpp"

namespace gaborzak {

using TestFunction = std::function<cplx(double)>;

/// Finite Gabor section {M_{beta l} T_{alpha k} g : |k| <= K, |l| <= Lambda},
/// sampled on [-T, T] with T = max(8, 4 alpha K) and step 1/64.
struct GaborSection {
  std::string window_id;
  RationalLattice lattice{1.0, 1, 1};
  int K = 0;
  int Lambda = 0;
  double half_width = 8.0;
  double step = 1.0 / 64.0;
  std::vector<double> grid;
  Eigen::MatrixXcd atoms;  // grid.size() x atom count
  Eigen::MatrixXcd gram;   // step * atoms^* atoms
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

GaborSection make_section(const WindowSpec& w, const RationalLattice& lattice, int K, int Lambda);

enum class SolveMethod { ridge, pinv };

struct SolveOptions {
  SolveMethod method = SolveMethod::ridge;
  std::optional<double> ridge;  // default 1e-10 trace(G) / dim
  double pinv_cutoff = 1e-10;   // relative to the largest eigenvalue of G
};

/// ||f - P f|| / ||f|| with P the (regularised) projection onto the section.
double residual(const TestFunction& f, const GaborSection& section, const SolveOptions& options = {});

struct SweepRow {
  int size = 0;
  double residual = 0.0;
};

/// Residual for K = Lambda = size, for each size. Rejects f = 0.
std::vector<SweepRow> residual_sweep(const TestFunction& f, const WindowSpec& w,
                                     const RationalLattice& lattice, const std::vector<int>& sizes,
                                     const SolveOptions& options = {});

/// sqrt(2) exp(-2 pi x^2), unit norm.
TestFunction narrow_gaussian();

/// Unit-norm exp(-pi x^2 / 4) times a random trigonometric polynomial with
/// frequencies m / 4, |m| <= 8, coefficients drawn from mt19937_64(seed).
TestFunction random_bandlimited(std::uint64_t seed = 20240607);

}  // namespace gaborzak
