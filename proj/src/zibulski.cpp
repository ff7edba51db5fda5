#include "gaborzak/zibulski.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gaborzak/errors.hpp"
#include "gaborzak/parallel.hpp"

namespace gaborzak {

double ZZMatrices::det_abs() const {
  if (A.size() == 0) return 0.0;
  return std::abs(A.partialPivLu().determinant());
}

double ZZMatrices::sigma_min() const {
  const auto p = A.rows();
  if (singular_values.size() < p) return 0.0;
  return singular_values(p - 1);
}

double ZZMatrices::sigma_max() const {
  return singular_values.size() > 0 ? singular_values(0) : 0.0;
}

ZZMatrices assemble_from_series(const std::vector<ZakSeries>& rows, const RationalLattice& lattice,
                                double xi) {
  const int p = lattice.p();
  const int q = lattice.q();
  if (static_cast<int>(rows.size()) != p) throw ConfigError("assemble: need one Zak series per row");
  ZZMatrices m;
  m.Q.resize(p, q);
  for (int j = 0; j < p; ++j) {
    for (int k = 0; k < q; ++k) {
      // j k mod q keeps the phase argument small.
      const double twist = static_cast<double>((static_cast<long>(j) * k) % q) / q;
      m.Q(j, k) = rows[j](xi - lattice.beta() * k) * unit_phase(twist);
    }
  }
  m.A = m.Q * m.Q.adjoint();
  m.singular_values = Eigen::JacobiSVD<Eigen::MatrixXcd>(m.Q).singularValues();
  return m;
}

ZZMatrices assemble(const WindowSpec& w, const RationalLattice& lattice, double x, double xi,
                    double eps) {
  std::vector<ZakSeries> rows;
  rows.reserve(lattice.p());
  for (int j = 0; j < lattice.p(); ++j) {
    rows.emplace_back(w, lattice.alpha(), x + lattice.alpha() * j / lattice.p(), eps);
  }
  return assemble_from_series(rows, lattice, xi);
}

namespace {

SummaryStats summarize(const std::vector<FieldPoint>& pts, double FieldPoint::*member) {
  SummaryStats s;
  if (pts.empty()) return s;
  s.min = std::numeric_limits<double>::infinity();
  s.max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const auto& pt : pts) {
    const double v = pt.*member;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
    sum += v;
  }
  s.mean = sum / static_cast<double>(pts.size());
  return s;
}

}  // namespace

ZZField grid_scan(const WindowSpec& w, const RationalLattice& lattice, int nx, int nxi, double eps,
                  double tau_rank) {
  if (nx < 2 || nxi < 2) throw ConfigError("grid_scan: grid needs at least 2 x 2 points");
  if (!(tau_rank > 0.0)) throw ConfigError("grid_scan: tau_rank must be positive");
  const int p = lattice.p();
  const double alpha = lattice.alpha();
  const double dx = alpha / p / nx;
  const double dxi = 1.0 / alpha / nxi;

  ZZField field;
  field.lattice = lattice;
  field.window_id = w.label();
  field.nx = nx;
  field.nxi = nxi;
  field.eps = eps;
  field.tau_rank = tau_rank;
  field.points.resize(static_cast<std::size_t>(nx) * nxi);

  parallel_for(static_cast<std::size_t>(nx), [&](std::size_t i) {
    const double x = (static_cast<double>(i) + 0.5) * dx;
    std::vector<ZakSeries> rows;
    rows.reserve(p);
    for (int j = 0; j < p; ++j) rows.emplace_back(w, alpha, x + alpha * j / p, eps);
    for (int jxi = 0; jxi < nxi; ++jxi) {
      const double xi = (jxi + 0.5) * dxi;
      const ZZMatrices m = assemble_from_series(rows, lattice, xi);
      FieldPoint& pt = field.points[i * nxi + jxi];
      pt.x = x;
      pt.xi = xi;
      pt.det_abs = m.det_abs();
      pt.sigma_min = m.sigma_min();
      pt.sigma_max = m.sigma_max();
      pt.deficient = pt.sigma_max < tau_rank || pt.sigma_min < tau_rank * pt.sigma_max;
    }
  });

  field.det_abs = summarize(field.points, &FieldPoint::det_abs);
  field.sigma_min = summarize(field.points, &FieldPoint::sigma_min);
  field.sigma_max = summarize(field.points, &FieldPoint::sigma_max);
  const auto bad = std::count_if(field.points.begin(), field.points.end(),
                                 [](const FieldPoint& pt) { return pt.deficient; });
  field.deficient_fraction = static_cast<double>(bad) / static_cast<double>(field.points.size());
  return field;
}

FrameBoundEstimate frame_bounds(const ZZField& field) {
  if (field.points.empty()) return {};
  const double a = field.lattice.alpha() / field.lattice.p();
  return {a * field.sigma_min.min * field.sigma_min.min, a * field.sigma_max.max * field.sigma_max.max};
}

std::string to_string(Answer a) {
  switch (a) {
    case Answer::yes: return "yes";
    case Answer::no: return "no";
    default: return "inconclusive";
  }
}

namespace {

double near_zero_fraction(const ZZField& f, double rel) {
  if (f.points.empty()) return 0.0;
  const double cut = rel * f.sigma_max.max;
  const auto n = std::count_if(f.points.begin(), f.points.end(),
                               [&](const FieldPoint& pt) { return pt.sigma_min < cut; });
  return static_cast<double>(n) / static_cast<double>(f.points.size());
}

}  // namespace

Verdict verdict(const ZZField& coarse, const ZZField& fine, const VerdictOptions& opt) {
  if (!(coarse.lattice == fine.lattice)) throw ConfigError("verdict: fields use different lattices");
  Verdict v;
  VerdictEvidence& e = v.evidence;
  e.deficient_coarse = coarse.deficient_fraction;
  e.deficient_fine = fine.deficient_fraction;
  e.near_zero_coarse = near_zero_fraction(coarse, opt.near_zero);
  e.near_zero_fine = near_zero_fraction(fine, opt.near_zero);
  const FrameBoundEstimate bc = frame_bounds(coarse);
  const FrameBoundEstimate bf = frame_bounds(fine);
  e.lower_coarse = bc.lower;
  e.lower_fine = bf.lower;
  e.upper_fine = bf.upper;
  e.min_det_coarse = coarse.det_abs.min;
  e.min_det_fine = fine.det_abs.min;

  if (coarse.lattice.undersampled()) {
    v.complete = Answer::no;
    v.complete_reason = "p > q: rank of Q is at most q < p everywhere";
  } else if (e.deficient_coarse > opt.deficient_threshold && e.deficient_fine > opt.deficient_threshold) {
    v.complete = Answer::no;
    v.complete_reason = "rank deficient on a set of positive measure at both refinements";
  } else if (e.deficient_coarse == 0.0 && e.deficient_fine == 0.0 &&
             e.near_zero_fine <= e.near_zero_coarse) {
    v.complete = Answer::yes;
    v.complete_reason = "no rank deficient grid point; near-singular region does not grow";
  } else {
    v.complete = Answer::inconclusive;
    v.complete_reason = "rank deficiency not stable under refinement";
  }

  const double change = bf.lower > 0.0 ? std::abs(bc.lower - bf.lower) / bf.lower : 0.0;
  if (v.complete == Answer::no) {
    v.frame = Answer::no;
    v.frame_reason = "not complete";
  } else if (bf.lower <= 0.0 && bc.lower <= 0.0) {
    v.frame = Answer::no;
    v.frame_reason = "lower bound estimate vanishes";
  } else if (bf.lower <= 0.0 || bc.lower >= opt.decay_factor * bf.lower) {
    v.frame = Answer::no;
    v.frame_reason = "lower bound estimate decays under refinement";
  } else if (change <= opt.stability) {
    v.frame = Answer::yes;
    v.frame_reason = "lower bound estimate stable under refinement";
  } else {
    v.frame = Answer::inconclusive;
    v.frame_reason = "lower bound estimate neither stable nor decaying";
  }
  return v;
}

}  // namespace gaborzak
