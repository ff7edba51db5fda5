#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gaborzak/lattice.hpp"
#include "gaborzak/window.hpp"
#include "gaborzak/zak.hpp"

namespace gaborzak {

/// p distinct, strictly increasing column indices from {0, ..., q-1}.
class ColumnSet {
 public:
  ColumnSet(std::vector<int> columns, int q);

  const std::vector<int>& columns() const noexcept { return cols_; }
  int size() const noexcept { return static_cast<int>(cols_.size()); }
  int operator[](int m) const { return cols_[m]; }
  std::string to_string() const;

  /// All C(q, p) column sets in lexicographic order.
  static std::vector<ColumnSet> all(int p, int q);

 private:
  std::vector<int> cols_;
};

/// det[omega^{l_m (j - p k_j)}]_{j,m} with omega = exp(2 pi i / q).
///
/// Row j depends on k only through (j - p k_j) mod q, so the value is
/// exactly q-periodic in every k_j and exactly zero when two rows coincide.
cplx c_coeff(const ColumnSet& cols, const std::vector<long>& k, int p, int q);

struct ThetaValue {
  cplx value;
  double error_bound = 0.0;  // certified truncation bound
  double rounding = 0.0;     // floating-point estimate, not certified
  long radius = 0;           // per-coordinate cap K
};

/// Theta_g^L(x, N): sum over k in Z^p with sum k_j = N of
/// prod_j g(x + alpha j/p - alpha k_j) c(L, k).
ThetaValue theta(const WindowSpec& w, const RationalLattice& lattice, const ColumnSet& cols, double x,
                 long N, double eps = kDefaultEps);

/// Leading coefficient s_0(N) of Theta for P(x) exp(-pi x^2) with monic P.
ThetaValue gaussian_s0(const RationalLattice& lattice, const ColumnSet& cols, long N,
                       double eps = kDefaultEps);

struct ThetaWitness {
  ColumnSet columns;
  double x = 0.0;
  long N = 0;
  cplx value;
  double error_bound = 0.0;
  double rounding = 0.0;
};

struct CertificateSearch {
  long n_min = -8;
  long n_max = 8;
  int x_samples = 64;  // x = i alpha / x_samples
  double tau = 1e-6;
  double eps = kDefaultEps;
};

enum class CertificateStatus { witness, no_witness, incomplete_by_density };

std::string to_string(CertificateStatus s);

struct CertificateResult {
  CertificateStatus status = CertificateStatus::no_witness;
  std::optional<ThetaWitness> witness;
  long candidates = 0;  // (columns, N, x) triples evaluated
  std::string note;
};

/// Searches for (L, x, N) with |Theta| - error_bound - rounding > tau. The
/// largest such |Theta| wins, ties broken by lexicographic scan order. A
/// witness certifies completeness; no witness certifies nothing.
CertificateResult completeness_certificate(const WindowSpec& w, const RationalLattice& lattice,
                                           const CertificateSearch& search = {});

/// det of the p x p submatrix of Q_g(x, xi) on the given columns.
cplx det_q_columns(const WindowSpec& w, const RationalLattice& lattice, const ColumnSet& cols,
                   double x, double xi, double eps = kDefaultEps);

enum class PhaseConvention {
  scaled,   // exp(2 pi i alpha N xi)
  literal,  // exp(2 pi i N xi)
};

/// max over xi of |det Q^L(x, xi) - sum_{|N| <= n_max} Theta(x, N) e(N xi)|.
double fourier_consistency(const WindowSpec& w, const RationalLattice& lattice, const ColumnSet& cols,
                           double x, long n_max, const std::vector<double>& xi_samples,
                           PhaseConvention phase = PhaseConvention::scaled);

}  // namespace gaborzak
