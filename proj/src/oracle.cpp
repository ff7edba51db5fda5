#include "gaborzak/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "gaborzak/errors.hpp"
#include "gaborzak/parallel.hpp"
#include "gaborzak/zak.hpp"

namespace gaborzak {

GaborSection make_section(const WindowSpec& w, const RationalLattice& lattice, int K, int Lambda) {
  if (K < 0 || Lambda < 0) throw ConfigError("make_section: negative section size");
  GaborSection s;
  s.window_id = w.label();
  s.lattice = lattice;
  s.K = K;
  s.Lambda = Lambda;
  s.half_width = std::max(8.0, 4.0 * lattice.alpha() * K);
  const long m = static_cast<long>(std::ceil(s.half_width / s.step));
  for (long n = -m; n <= m; ++n) s.grid.push_back(static_cast<double>(n) * s.step);

  const long rows = static_cast<long>(s.grid.size());
  const int cols = (2 * K + 1) * (2 * Lambda + 1);
  s.atoms.resize(rows, cols);
  parallel_for(static_cast<std::size_t>(2 * K + 1), [&](std::size_t ki) {
    const int k = static_cast<int>(ki) - K;
    for (long n = 0; n < rows; ++n) {
      const double t = s.grid[n];
      const cplx g = w(t - lattice.alpha() * k);
      for (int l = -Lambda; l <= Lambda; ++l) {
        const int c = static_cast<int>(ki) * (2 * Lambda + 1) + (l + Lambda);
        s.atoms(n, c) = g == cplx{} ? cplx{} : g * unit_phase(lattice.beta() * l * t);
      }
    }
  });

  // Column blocks of the Gram matrix go to separate workers.
  s.gram.resize(cols, cols);
  const std::size_t blocks = std::max<std::size_t>(1, std::min<std::size_t>(cols, 16));
  parallel_for(blocks, [&](std::size_t b) {
    const long lo = static_cast<long>(b) * cols / static_cast<long>(blocks);
    const long hi = static_cast<long>(b + 1) * cols / static_cast<long>(blocks);
    if (hi > lo) {
      s.gram.middleCols(lo, hi - lo).noalias() =
          s.step * (s.atoms.adjoint() * s.atoms.middleCols(lo, hi - lo));
    }
  });
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(
                                 s.gram, Eigen::EigenvaluesOnly)
                                 .eigenvalues();
  s.lambda_min = ev.minCoeff();
  s.lambda_max = ev.maxCoeff();
  return s;
}

double residual(const TestFunction& f, const GaborSection& s, const SolveOptions& opt) {
  Eigen::VectorXcd fv(static_cast<long>(s.grid.size()));
  for (long n = 0; n < fv.size(); ++n) fv(n) = f(s.grid[n]);
  const double fnorm = std::sqrt(s.step) * fv.norm();
  if (!(fnorm > 0.0)) throw ConfigError("residual: test function vanishes on the section grid");

  const Eigen::VectorXcd b = s.step * (s.atoms.adjoint() * fv);
  const long dim = s.gram.rows();
  Eigen::VectorXcd a;
  if (opt.method == SolveMethod::ridge) {
    const double ridge = opt.ridge.value_or(1e-10 * s.gram.trace().real() / static_cast<double>(dim));
    if (ridge < 0.0) throw ConfigError("residual: ridge must be nonnegative");
    Eigen::MatrixXcd m = s.gram;
    m.diagonal().array() += ridge;
    a = m.ldlt().solve(b);
  } else {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(s.gram);
    const double cut = opt.pinv_cutoff * eig.eigenvalues().maxCoeff();
    Eigen::VectorXcd proj = eig.eigenvectors().adjoint() * b;
    for (long i = 0; i < dim; ++i) {
      const double lam = eig.eigenvalues()(i);
      proj(i) = lam > cut && lam > 0.0 ? proj(i) / lam : cplx{};
    }
    a = eig.eigenvectors() * proj;
  }
  const Eigen::VectorXcd r = fv - s.atoms * a;
  return std::sqrt(s.step) * r.norm() / fnorm;
}

std::vector<SweepRow> residual_sweep(const TestFunction& f, const WindowSpec& w,
                                     const RationalLattice& lattice, const std::vector<int>& sizes,
                                     const SolveOptions& options) {
  if (!f) throw ConfigError("residual_sweep: no test function");
  std::vector<SweepRow> rows;
  for (int size : sizes) {
    const GaborSection s = make_section(w, lattice, size, size);
    rows.push_back({size, residual(f, s, options)});
  }
  return rows;
}

TestFunction narrow_gaussian() {
  return [](double x) { return cplx{std::sqrt(2.0) * std::exp(-2.0 * kPi * x * x), 0.0}; };
}

TestFunction random_bandlimited(std::uint64_t seed) {
  constexpr int M = 8;
  std::mt19937_64 gen(seed);
  // Raw generator output mapped to [-1, 1); distributions are not portable.
  auto draw = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-52 - 1.0; };
  std::vector<cplx> c;
  for (int m = -M; m <= M; ++m) {
    const double re = draw();
    const double im = draw();
    c.emplace_back(re, im);
  }
  auto raw = [c](double x) {
    cplx acc = 0.0;
    for (int m = -M; m <= M; ++m) acc += c[m + M] * unit_phase(m * x / 4.0);
    return acc * std::exp(-kPi * x * x / 4.0);
  };
  // Normalise on a grid wide enough for the exp(-pi x^2 / 4) envelope.
  const double h = 1.0 / 64.0;
  double acc = 0.0;
  for (int n = -64 * 12; n <= 64 * 12; ++n) acc += std::norm(raw(n * h));
  const double scale = 1.0 / std::sqrt(acc * h);
  return [raw, scale](double x) { return raw(x) * scale; };
}

}  // namespace gaborzak
