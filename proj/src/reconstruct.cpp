#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "gaborzak/errors.hpp"
#include "gaborzak/parallel.hpp"
#include "gaborzak/zibulski.hpp"

namespace gaborzak {

namespace {

long floor_div(long a, long b) {
  long d = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --d;
  return d;
}

long ceil_div(long a, long b) { return -floor_div(-a, b); }

// Working copy of the signal on a larger index range of the same grid.
struct Grid {
  double h;
  long lo;
  std::vector<cplx> v;
  double t(long n) const { return static_cast<double>(n) * h; }
  long hi() const { return lo + static_cast<long>(v.size()) - 1; }
  cplx at(long n) const { return n < lo || n > hi() ? cplx{} : v[n - lo]; }
};

}  // namespace

ReconstructResult reconstruct(const SampledSignal& f, const WindowSpec& w,
                              const RationalLattice& lattice, const ReconstructOptions& opt) {
  if (f.values.empty()) throw ConfigError("reconstruct: empty signal");
  if (!(opt.pinv_tol > 0.0) || !(opt.coeff_tol > 0.0)) {
    throw ConfigError("reconstruct: tolerances must be positive");
  }
  const double alpha = lattice.alpha();
  const double beta = lattice.beta();
  const int p = lattice.p();
  const double h = f.step;
  const long mx = std::lround(alpha / (p * h));
  if (mx < 1 || std::abs(static_cast<double>(mx) * p * h - alpha) > 1e-9 * alpha) {
    throw ConfigError("reconstruct: sample step must divide alpha / p");
  }
  const long per = p * mx;  // samples per alpha

  ReconstructResult res;
  res.signal = f;
  const double fnorm = f.norm();
  if (fnorm == 0.0) {
    std::fill(res.signal.values.begin(), res.signal.values.end(), cplx{});
    return res;
  }

  // Window reach: beyond D from its centre the window contributes less than
  // coeff_tol to any coefficient of f.
  const DecayEnvelope& env = w.envelope();
  double l1 = 0.0;
  for (const cplx& v : f.values) l1 += std::abs(v);
  l1 *= h;
  const double reach = std::max(1.0, std::log(std::max(l1 * env.C, 1.0) / opt.coeff_tol) / env.a);
  const long reach_n = static_cast<long>(std::ceil(reach / h));
  auto g_at = [&](long n, long k) { return w(static_cast<double>(n) * h - alpha * static_cast<double>(k)); };

  // Gabor coefficients c_kl = <f, M_{beta l} T_{alpha k} g> by trapezoid.
  const long k_lo = static_cast<long>(std::floor((f.time(0) - reach) / alpha));
  const long k_hi = static_cast<long>(std::ceil((f.time(f.values.size() - 1) + reach) / alpha));
  const long nk = k_hi - k_lo + 1;
  std::vector<std::vector<cplx>> windowed(nk);
  std::vector<long> win_lo(nk);
  parallel_for(static_cast<std::size_t>(nk), [&](std::size_t i) {
    const long k = k_lo + static_cast<long>(i);
    const long centre = k * per;
    const long a = std::max(f.first, centre - reach_n);
    const long b = std::min(f.last(), centre + reach_n);
    win_lo[i] = a;
    for (long n = a; n <= b; ++n) windowed[i].push_back(f.values[n - f.first] * std::conj(g_at(n, k)));
  });

  const long lambda_cap = std::max(1L, static_cast<long>(std::floor(1.0 / (2.0 * h * beta))) - 1);
  // coeffs[i][l + lambda] for l in [-lambda, lambda], grown as needed.
  std::vector<std::vector<cplx>> plus(nk), minus(nk);
  auto coeff = [&](std::size_t i, long l) {
    cplx acc = 0.0;
    for (std::size_t m = 0; m < windowed[i].size(); ++m) {
      const double t = static_cast<double>(win_lo[i] + static_cast<long>(m)) * h;
      acc += windowed[i][m] * unit_phase(-beta * static_cast<double>(l) * t);
    }
    return acc * h;
  };
  long lambda = 0;
  int quiet = 0;
  for (long l = 0; l <= lambda_cap; ++l) {
    std::vector<double> peak(nk, 0.0);
    parallel_for(static_cast<std::size_t>(nk), [&](std::size_t i) {
      plus[i].push_back(coeff(i, l));
      minus[i].push_back(l == 0 ? plus[i][0] : coeff(i, -l));
      peak[i] = std::max(std::abs(plus[i].back()), std::abs(minus[i].back()));
    });
    lambda = l;
    const double top = *std::max_element(peak.begin(), peak.end());
    quiet = top < opt.coeff_tol ? quiet + 1 : 0;
    if (quiet >= 2) break;
  }
  res.time_shifts = static_cast<int>(nk);
  res.frequency_radius = static_cast<int>(lambda);

  // S f on a working grid wide enough that S f is negligible outside it.
  Grid sf{h, k_lo * per - reach_n, {}};
  sf.v.assign(static_cast<std::size_t>(k_hi * per + reach_n - sf.lo + 1), cplx{});
  {
    std::vector<std::vector<cplx>> parts(nk);
    parallel_for(static_cast<std::size_t>(nk), [&](std::size_t i) {
      const long k = k_lo + static_cast<long>(i);
      const long centre = k * per;
      auto& out = parts[i];
      out.resize(2 * reach_n + 1);
      for (long n = centre - reach_n; n <= centre + reach_n; ++n) {
        const double t = static_cast<double>(n) * h;
        cplx acc = plus[i][0];
        for (long l = 1; l <= lambda; ++l) {
          const cplx e = unit_phase(beta * static_cast<double>(l) * t);
          acc += plus[i][l] * e + minus[i][l] * std::conj(e);
        }
        out[n - centre + reach_n] = acc * g_at(n, k);
      }
    });
    // Fixed-order reduction keeps the result independent of threading.
    for (long i = 0; i < nk; ++i) {
      const long start = (k_lo + i) * per - reach_n;
      for (std::size_t m = 0; m < parts[i].size(); ++m) sf.v[start - sf.lo + m] += parts[i][m];
    }
  }

  // Vector Zak grid: x_i = i h (i < mx), shifts r mx, xi_j = j / (alpha M).
  const long kz_lo = ceil_div(-sf.hi(), per);
  const long kz_hi = floor_div(per - 1 - sf.lo, per);
  long m_xi = kz_hi - kz_lo + 1;
  if (m_xi % 2) ++m_xi;
  res.x_cells = static_cast<int>(mx);
  res.xi_cells = static_cast<int>(m_xi);

  const std::size_t cells = static_cast<std::size_t>(mx) * m_xi;
  std::vector<Eigen::VectorXcd> zsf(cells);
  std::vector<Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>> eig(cells);
  parallel_for(static_cast<std::size_t>(mx), [&](std::size_t i) {
    std::vector<ZakSeries> rows;
    rows.reserve(p);
    const double x = static_cast<double>(i) * h;
    for (int j = 0; j < p; ++j) rows.emplace_back(w, alpha, x + alpha * j / p, opt.eps);
    for (long jx = 0; jx < m_xi; ++jx) {
      const double xi = static_cast<double>(jx) / (alpha * static_cast<double>(m_xi));
      Eigen::VectorXcd v(p);
      for (int r = 0; r < p; ++r) {
        const long m = static_cast<long>(i) + r * mx;
        cplx acc = 0.0;
        for (long k = kz_lo; k <= kz_hi; ++k) {
          const cplx s = sf.at(m - k * per);
          if (s == cplx{}) continue;
          acc += s * unit_phase(static_cast<double>((k * jx) % m_xi) / static_cast<double>(m_xi));
        }
        v(r) = acc;
      }
      const std::size_t c = i * m_xi + jx;
      zsf[c] = v;
      eig[c].compute(assemble_from_series(rows, lattice, xi).A);
    }
  });

  double lambda_ref = 0.0;
  for (const auto& e : eig) lambda_ref = std::max(lambda_ref, e.eigenvalues().maxCoeff());
  const double cut = opt.pinv_tol * lambda_ref;
  const double scale = alpha / p;  // Z S f = (alpha / p) A Z f

  // (alpha/p)^-1 pinv(A) applied cellwise, then the inverse vector Zak transform.
  std::vector<Eigen::VectorXcd> zf(cells);
  std::vector<char> was_cut(cells, 0);
  for (std::size_t c = 0; c < cells; ++c) {
    const auto& e = eig[c];
    const Eigen::VectorXcd proj = e.eigenvectors().adjoint() * zsf[c];
    Eigen::VectorXcd scaled = Eigen::VectorXcd::Zero(p);
    for (int r = 0; r < p; ++r) {
      const double lam = e.eigenvalues()(r);
      if (lam < cut || lam <= 0.0) {
        was_cut[c] = 1;
        continue;
      }
      scaled(r) = proj(r) / (scale * lam);
    }
    zf[c] = e.eigenvectors() * scaled;
    if (was_cut[c]) {
      const long i = static_cast<long>(c) / m_xi;
      const long jx = static_cast<long>(c) % m_xi;
      res.cutoff_cells.emplace_back(static_cast<double>(i) * h,
                                    static_cast<double>(jx) / (alpha * static_cast<double>(m_xi)));
    }
  }
  res.cutoff_fraction = static_cast<double>(res.cutoff_cells.size()) / static_cast<double>(cells);
  res.unstable = res.cutoff_fraction > opt.unstable_fraction;

  // f(t_m - alpha k) = M^-1 sum_j Zf(t_m, xi_j) exp(-2 pi i k j / M)
  for (std::size_t n = 0; n < res.signal.values.size(); ++n) {
    const long idx = f.first + static_cast<long>(n);
    const long m = ((idx % per) + per) % per;
    const long k = (m - idx) / per;
    const long i = m % mx;
    const long r = m / mx;
    cplx acc = 0.0;
    for (long jx = 0; jx < m_xi; ++jx) {
      const long kk = ((k % m_xi) * jx) % m_xi;
      acc += zf[i * m_xi + jx](r) * unit_phase(-static_cast<double>(kk) / static_cast<double>(m_xi));
    }
    res.signal.values[n] = acc / static_cast<double>(m_xi);
  }

  double err = 0.0;
  for (std::size_t n = 0; n < f.values.size(); ++n) err += std::norm(res.signal.values[n] - f.values[n]);
  res.relative_error = std::sqrt(err * h) / fnorm;
  return res;
}

}  // namespace gaborzak
