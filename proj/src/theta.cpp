#include "gaborzak/theta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "gaborzak/errors.hpp"
#include "gaborzak/parallel.hpp"
#include "gaborzak/zibulski.hpp"

namespace gaborzak {

ColumnSet::ColumnSet(std::vector<int> columns, int q) : cols_(std::move(columns)) {
  if (q < 1) throw ConfigError("ColumnSet: q must be positive");
  if (cols_.empty()) throw ConfigError("ColumnSet: empty column set");
  for (std::size_t m = 0; m < cols_.size(); ++m) {
    if (cols_[m] < 0 || cols_[m] >= q) throw ConfigError("ColumnSet: column out of range");
    if (m > 0 && cols_[m] <= cols_[m - 1]) throw ConfigError("ColumnSet: columns must increase");
  }
}

std::string ColumnSet::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t m = 0; m < cols_.size(); ++m) os << (m ? "," : "") << cols_[m];
  os << '}';
  return os.str();
}

std::vector<ColumnSet> ColumnSet::all(int p, int q) {
  if (p < 1 || p > q) throw ConfigError("ColumnSet::all: need 1 <= p <= q");
  std::vector<ColumnSet> out;
  std::vector<int> c(p);
  std::iota(c.begin(), c.end(), 0);
  while (true) {
    out.emplace_back(c, q);
    int m = p - 1;
    while (m >= 0 && c[m] == q - p + m) --m;
    if (m < 0) break;
    ++c[m];
    for (int i = m + 1; i < p; ++i) c[i] = c[i - 1] + 1;
  }
  return out;
}

namespace {

long mod(long a, long q) { return ((a % q) + q) % q; }

// Determinant for a tuple of row residues; zero when two residues coincide.
cplx c_from_residues(const ColumnSet& cols, const std::vector<long>& res, int q) {
  const int p = cols.size();
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < j; ++i) {
      if (res[i] == res[j]) return 0.0;
    }
  }
  if (p == 1) return unit_phase(static_cast<double>(mod(cols[0] * res[0], q)) / q);
  Eigen::MatrixXcd m(p, p);
  for (int j = 0; j < p; ++j) {
    for (int c = 0; c < p; ++c) m(j, c) = unit_phase(static_cast<double>(mod(cols[c] * res[j], q)) / q);
  }
  return m.partialPivLu().determinant();
}

// c indexed by the residue tuple, filled once per column set when small.
class CoeffTable {
 public:
  CoeffTable(const ColumnSet& cols, int p, int q) : cols_(cols), p_(p), q_(q) {
    double size = std::pow(static_cast<double>(q), p);
    if (size > static_cast<double>(1 << 20)) return;
    table_.resize(static_cast<std::size_t>(size));
    std::vector<long> res(p, 0);
    for (std::size_t idx = 0; idx < table_.size(); ++idx) {
      std::size_t t = idx;
      for (int j = 0; j < p; ++j) {
        res[j] = static_cast<long>(t % q);
        t /= q;
      }
      table_[idx] = c_from_residues(cols_, res, q);
    }
  }

  cplx operator()(const std::vector<long>& res) const {
    if (table_.empty()) return c_from_residues(cols_, res, q_);
    std::size_t idx = 0;
    for (int j = p_ - 1; j >= 0; --j) idx = idx * q_ + static_cast<std::size_t>(res[j]);
    return table_[idx];
  }

 private:
  ColumnSet cols_;
  int p_;
  int q_;
  std::vector<cplx> table_;
};

double factorial(int p) {
  double f = 1.0;
  for (int i = 2; i <= p; ++i) f *= i;
  return f;
}

// Samples g(x + alpha j/p - alpha k) for k in [lo_j, hi_j], with the
// certified bound on everything outside the box (independent of N).
struct RowSamples {
  std::vector<long> lo;
  std::vector<long> hi;
  std::vector<std::vector<cplx>> g;
  std::vector<std::vector<long>> residue;  // (j - p k) mod q
  double bound = 0.0;
  long radius = 0;
};

constexpr double kMaxTerms = 5e7;

RowSamples sample_rows(const WindowSpec& w, const RationalLattice& lat, double x, double eps) {
  const int p = lat.p();
  const double alpha = lat.alpha();
  RowSamples s;
  s.lo.resize(p);
  s.hi.resize(p);
  if (const auto sup = w.support()) {
    for (int j = 0; j < p; ++j) {
      const double xj = x + alpha * j / p;
      s.lo[j] = static_cast<long>(std::ceil((xj - sup->hi) / alpha));
      s.hi[j] = static_cast<long>(std::floor((xj - sup->lo) / alpha));
      s.radius = std::max({s.radius, std::abs(s.lo[j]), std::abs(s.hi[j])});
    }
  } else if (p == 1) {
    // Exactly one term; the caller evaluates it directly.
  } else {
    const DecayEnvelope& env = w.envelope();
    const double q_geo = -std::expm1(-env.a * alpha);
    const double xmax = std::abs(x) + alpha;
    const double whole = 2.0 * env.C / q_geo;
    const double lead = factorial(p) * p * 2.0 * env.C * std::exp(env.a * xmax) / q_geo *
                        std::pow(whole, p - 1);
    const double need = std::log(lead / eps) / (env.a * alpha) - 1.0;
    const double k = std::max(0.0, std::ceil(need));
    if (std::pow(2.0 * k + 1.0, p - 1) > kMaxTerms) {
      const double kc = std::floor((std::pow(kMaxTerms, 1.0 / (p - 1)) - 1.0) / 2.0);
      throw NumericalError("theta: truncation box too large for the requested eps",
                           lead * std::exp(-env.a * alpha * (kc + 1.0)));
    }
    s.radius = static_cast<long>(k);
    s.bound = lead * std::exp(-env.a * alpha * (k + 1.0));
    for (int j = 0; j < p; ++j) {
      s.lo[j] = -s.radius;
      s.hi[j] = s.radius;
    }
  }
  if (p == 1 && !w.support()) return s;
  s.g.resize(p);
  s.residue.resize(p);
  for (int j = 0; j < p; ++j) {
    const double xj = x + alpha * j / p;
    for (long k = s.lo[j]; k <= s.hi[j]; ++k) {
      s.g[j].push_back(w(xj - alpha * static_cast<double>(k)));
      s.residue[j].push_back(mod(j - static_cast<long>(p) * k, lat.q()));
    }
  }
  return s;
}

ThetaValue sum_theta(const WindowSpec& w, const RationalLattice& lat, const RowSamples& s,
                     const CoeffTable& c, double x, long N) {
  const int p = lat.p();
  const int q = lat.q();
  ThetaValue out;
  out.radius = s.radius;
  out.error_bound = s.bound;
  constexpr double u = std::numeric_limits<double>::epsilon();
  std::vector<long> res(p);

  if (p == 1 && s.g.empty()) {
    res[0] = mod(-N, q);
    out.value = w(x - lat.alpha() * static_cast<double>(N)) * c(res);
    out.rounding = 4.0 * u * std::abs(out.value);
    return out;
  }
  for (int j = 0; j < p; ++j) {
    if (s.lo[j] > s.hi[j]) return out;
  }

  const int last = p - 1;
  std::vector<long> k(p);
  for (int j = 0; j < last; ++j) k[j] = s.lo[j];
  long partial = 0;
  for (int j = 0; j < last; ++j) partial += k[j];
  double abs_sum = 0.0;
  long terms = 0;
  while (true) {
    const long kl = N - partial;
    if (kl >= s.lo[last] && kl <= s.hi[last]) {
      cplx prod = s.g[last][kl - s.lo[last]];
      for (int j = 0; j < last && prod != cplx{}; ++j) prod *= s.g[j][k[j] - s.lo[j]];
      if (prod != cplx{}) {
        for (int j = 0; j < last; ++j) res[j] = s.residue[j][k[j] - s.lo[j]];
        res[last] = s.residue[last][kl - s.lo[last]];
        const cplx term = prod * c(res);
        out.value += term;
        abs_sum += std::abs(term);
        ++terms;
      }
    }
    // odometer over the free indices k_0 .. k_{p-2}
    int j = last - 1;
    while (j >= 0 && k[j] == s.hi[j]) {
      partial -= k[j] - s.lo[j];
      k[j] = s.lo[j];
      --j;
    }
    if (j < 0) break;
    ++k[j];
    ++partial;
  }
  out.rounding = (static_cast<double>(terms) + p * p * p + 4.0) * u * std::max(abs_sum, 1e-300) *
                 factorial(p);
  return out;
}

}  // namespace

cplx c_coeff(const ColumnSet& cols, const std::vector<long>& k, int p, int q) {
  if (cols.size() != p || static_cast<int>(k.size()) != p) {
    throw ConfigError("c_coeff: need p columns and p indices");
  }
  std::vector<long> res(p);
  for (int j = 0; j < p; ++j) res[j] = mod(j - static_cast<long>(p) * k[j], q);
  return c_from_residues(cols, res, q);
}

ThetaValue theta(const WindowSpec& w, const RationalLattice& lattice, const ColumnSet& cols, double x,
                 long N, double eps) {
  if (cols.size() != lattice.p()) throw ConfigError("theta: column set size must equal p");
  if (!(eps > 0.0)) throw ConfigError("theta: eps must be positive");
  const RowSamples s = sample_rows(w, lattice, x, eps);
  const CoeffTable c(cols, lattice.p(), lattice.q());
  return sum_theta(w, lattice, s, c, x, N);
}

ThetaValue gaussian_s0(const RationalLattice& lattice, const ColumnSet& cols, long N, double eps) {
  const int p = lattice.p();
  const int q = lattice.q();
  if (cols.size() != p) throw ConfigError("gaussian_s0: column set size must equal p");
  const double a2 = kPi * lattice.alpha() * lattice.alpha();
  ThetaValue out;
  std::vector<long> k(p, 0);
  if (p == 1) {
    k[0] = N;
    out.value = std::exp(-a2 * static_cast<double>(N * N)) * c_coeff(cols, k, p, q);
    return out;
  }
  // Omitted terms have some |k_j| > K (j < p-1); bound with |c| <= p!.
  const double s = 2.0 / -std::expm1(-a2);
  auto tail = [&](long K) {
    const double t = 2.0 * std::exp(-a2 * K * K) / -std::expm1(-a2 * (2.0 * K + 1.0));
    return factorial(p) * (p - 1) * t * std::pow(s, p - 2);
  };
  long K = 1;
  while (tail(K) > eps) ++K;
  out.radius = K;
  out.error_bound = tail(K);

  const CoeffTable c(cols, p, q);
  std::vector<long> res(p);
  const int last = p - 1;
  for (int j = 0; j < last; ++j) k[j] = -K;
  while (true) {
    long partial = 0;
    double e = 0.0;
    for (int j = 0; j < last; ++j) {
      const double d = static_cast<double>(j) / p - static_cast<double>(k[j]);
      e += d * d;
      partial += k[j];
    }
    k[last] = N - partial;
    const double d = static_cast<double>(last) / p - static_cast<double>(k[last]);
    e += d * d;
    for (int j = 0; j < p; ++j) res[j] = mod(j - static_cast<long>(p) * k[j], q);
    out.value += std::exp(-a2 * e) * c(res);
    int j = last - 1;
    while (j >= 0 && k[j] == K) k[j--] = -K;
    if (j < 0) break;
    ++k[j];
  }
  return out;
}

std::string to_string(CertificateStatus s) {
  switch (s) {
    case CertificateStatus::witness: return "witness";
    case CertificateStatus::incomplete_by_density: return "incomplete_by_density";
    default: return "no_witness";
  }
}

CertificateResult completeness_certificate(const WindowSpec& w, const RationalLattice& lattice,
                                           const CertificateSearch& search) {
  CertificateResult out;
  if (search.x_samples < 1 || search.n_min > search.n_max || !(search.tau > 0.0)) {
    throw ConfigError("completeness_certificate: bad search parameters");
  }
  if (lattice.undersampled()) {
    out.status = CertificateStatus::incomplete_by_density;
    out.note = "p > q: Q has rank at most q < p, so the system is incomplete";
    return out;
  }
  if (w.support()) {
    out.status = CertificateStatus::no_witness;
    out.note =
        "compactly supported window: the Theta criterion only characterises completeness for "
        "windows with exponential decay in time and frequency; no certificate attempted";
    return out;
  }

  const auto sets = ColumnSet::all(lattice.p(), lattice.q());
  std::vector<CoeffTable> tables;
  for (const auto& cs : sets) tables.emplace_back(cs, lattice.p(), lattice.q());
  const long n_count = search.n_max - search.n_min + 1;
  const std::size_t per_x = sets.size() * static_cast<std::size_t>(n_count);

  struct Slot {
    ThetaValue v;
    bool ok = false;
  };
  std::vector<Slot> slots(per_x * search.x_samples);
  parallel_for(static_cast<std::size_t>(search.x_samples), [&](std::size_t i) {
    const double x = static_cast<double>(i) * lattice.alpha() / search.x_samples;
    const RowSamples s = sample_rows(w, lattice, x, search.eps);
    for (std::size_t c = 0; c < sets.size(); ++c) {
      for (long n = 0; n < n_count; ++n) {
        Slot& slot = slots[i * per_x + c * n_count + n];
        slot.v = sum_theta(w, lattice, s, tables[c], x, search.n_min + n);
        slot.ok = std::abs(slot.v.value) - slot.v.error_bound - slot.v.rounding > search.tau;
      }
    }
  });
  out.candidates = static_cast<long>(slots.size());

  // Scan order: columns, then N, then x.
  double best = -1.0;
  for (std::size_t c = 0; c < sets.size(); ++c) {
    for (long n = 0; n < n_count; ++n) {
      for (int i = 0; i < search.x_samples; ++i) {
        const Slot& slot = slots[i * per_x + c * n_count + n];
        if (!slot.ok || !(std::abs(slot.v.value) > best)) continue;
        best = std::abs(slot.v.value);
        out.witness = ThetaWitness{sets[c],
                                   static_cast<double>(i) * lattice.alpha() / search.x_samples,
                                   search.n_min + n,
                                   slot.v.value,
                                   slot.v.error_bound,
                                   slot.v.rounding};
      }
    }
  }
  if (out.witness) {
    out.status = CertificateStatus::witness;
    out.note = "nonzero Theta coefficient: the system is complete";
  } else {
    out.status = CertificateStatus::no_witness;
    out.note = "no witness in the searched range; this does not show incompleteness";
  }
  return out;
}

cplx det_q_columns(const WindowSpec& w, const RationalLattice& lattice, const ColumnSet& cols,
                   double x, double xi, double eps) {
  const ZZMatrices m = assemble(w, lattice, x, xi, eps);
  const int p = lattice.p();
  Eigen::MatrixXcd sub(p, p);
  for (int c = 0; c < p; ++c) sub.col(c) = m.Q.col(cols[c]);
  return p == 1 ? sub(0, 0) : sub.partialPivLu().determinant();
}

double fourier_consistency(const WindowSpec& w, const RationalLattice& lattice, const ColumnSet& cols,
                           double x, long n_max, const std::vector<double>& xi_samples,
                           PhaseConvention phase) {
  const double scale = phase == PhaseConvention::scaled ? lattice.alpha() : 1.0;
  std::vector<cplx> coeffs;
  for (long n = -n_max; n <= n_max; ++n) coeffs.push_back(theta(w, lattice, cols, x, n).value);
  double worst = 0.0;
  for (double xi : xi_samples) {
    cplx series = 0.0;
    for (long n = -n_max; n <= n_max; ++n) {
      series += coeffs[n + n_max] * unit_phase(scale * static_cast<double>(n) * xi);
    }
    worst = std::max(worst, std::abs(det_q_columns(w, lattice, cols, x, xi) - series));
  }
  return worst;
}

}  // namespace gaborzak
