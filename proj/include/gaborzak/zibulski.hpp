#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gaborzak/lattice.hpp"
#include "gaborzak/signal.hpp"
#include "gaborzak/window.hpp"
#include "gaborzak/zak.hpp"

namespace gaborzak {

/// Default relative rank tolerance for sigma_p / sigma_1.
inline constexpr double kDefaultRankTol = 1e-8;

/// Zibulski-Zeevi matrices at one point (x, xi).
struct ZZMatrices {
  Eigen::MatrixXcd Q;               // p x q, Q_jk = Z g(x + alpha j/p, xi - beta k) e^{2 pi i jk/q}
  Eigen::MatrixXcd A;               // p x p, A = Q Q^*
  Eigen::VectorXd singular_values;  // of Q, descending, length min(p, q)

  /// |det A| from an LU factorisation of A (independent of the SVD).
  double det_abs() const;
  /// sigma_p(Q); zero when p > q.
  double sigma_min() const;
  double sigma_max() const;
};

ZZMatrices assemble(const WindowSpec& w, const RationalLattice& lattice, double x, double xi,
                    double eps = kDefaultEps);

/// Same as assemble, from the p Zak series at x + alpha j / p.
ZZMatrices assemble_from_series(const std::vector<ZakSeries>& rows, const RationalLattice& lattice,
                                double xi);

struct FieldPoint {
  double x = 0.0;
  double xi = 0.0;
  double det_abs = 0.0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  bool deficient = false;
};

struct SummaryStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

/// Sampled Zibulski-Zeevi data on the cell midpoints of the fundamental
/// domain [0, alpha/p) x [0, 1/alpha). Points are stored x-major.
struct ZZField {
  RationalLattice lattice{1.0, 1, 1};
  std::string window_id;
  int nx = 0;
  int nxi = 0;
  double eps = kDefaultEps;
  double tau_rank = kDefaultRankTol;
  std::vector<FieldPoint> points;
  SummaryStats det_abs;
  SummaryStats sigma_min;
  SummaryStats sigma_max;
  double deficient_fraction = 0.0;
};

/// A point is rank deficient when sigma_p / sigma_1 < tau_rank, or when
/// sigma_1 < tau_rank outright (zero rows).
ZZField grid_scan(const WindowSpec& w, const RationalLattice& lattice, int nx, int nxi,
                  double eps = kDefaultEps, double tau_rank = kDefaultRankTol);

/// Grid estimates (alpha/p) min sigma_p^2 and (alpha/p) max sigma_1^2 of the
/// optimal frame bounds. With this Zak normalisation the vector Zak transform
/// of S f is (alpha/p) A_g times that of f.
struct FrameBoundEstimate {
  double lower = 0.0;
  double upper = 0.0;
};

FrameBoundEstimate frame_bounds(const ZZField& field);

enum class Answer { yes, no, inconclusive };

std::string to_string(Answer a);

struct VerdictOptions {
  double deficient_threshold = 0.01;  // "no" above this fraction on both grids
  double decay_factor = 3.0;          // lower-bound decay per doubling that means "not a frame"
  double stability = 0.05;            // relative change that counts as "stable"
  double near_zero = 1e-3;            // sigma_p below this * max sigma_1 counts as near a zero
};

struct VerdictEvidence {
  double deficient_coarse = 0.0;
  double deficient_fine = 0.0;
  double near_zero_coarse = 0.0;
  double near_zero_fine = 0.0;
  double lower_coarse = 0.0;
  double lower_fine = 0.0;
  double upper_fine = 0.0;
  double min_det_coarse = 0.0;
  double min_det_fine = 0.0;
};

/// Numerical verdicts. These never certify anything: "complete: yes" here
/// means no rank deficiency was seen, which cannot decide an a.e. statement.
struct Verdict {
  Answer complete = Answer::inconclusive;
  Answer frame = Answer::inconclusive;
  std::string complete_reason;
  std::string frame_reason;
  VerdictEvidence evidence;
};

/// Compares a scan with its refinement (fine should have twice the cells
/// per axis).
Verdict verdict(const ZZField& coarse, const ZZField& fine, const VerdictOptions& options = {});

struct ReconstructOptions {
  double eps = kDefaultEps;
  double pinv_tol = 1e-8;     // eigenvalues of A below pinv_tol * max eigenvalue are dropped
  double coeff_tol = 1e-10;   // omitted Gabor coefficients stay below this
  double unstable_fraction = 0.5;
};

struct ReconstructResult {
  SampledSignal signal;           // on the input grid
  double relative_error = 0.0;    // ||f_rec - f|| / ||f||, or absolute when f = 0
  double cutoff_fraction = 0.0;   // share of Zak cells where the pinv cutoff fired
  bool unstable = false;          // cutoff_fraction > unstable_fraction
  std::vector<std::pair<double, double>> cutoff_cells;  // (x, xi) of those cells
  int time_shifts = 0;            // number of k used in S f
  int frequency_radius = 0;       // |l| <= this
  int x_cells = 0;
  int xi_cells = 0;
};

/// Computes S f from truncated Gabor coefficients, moves to the vector Zak
/// domain, applies (alpha/p)^-1 pinv(A_g) and inverts the vector Zak transform
/// on the same grid. The sample step must divide alpha / p.
ReconstructResult reconstruct(const SampledSignal& f, const WindowSpec& w,
                              const RationalLattice& lattice, const ReconstructOptions& options = {});

}  // namespace gaborzak
