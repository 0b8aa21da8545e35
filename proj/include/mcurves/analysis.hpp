#pragma once

// Aesthetic measurements on curvature profiles: logarithmic curvature graphs
// (LCG), the monotone-curvature test and stress markers.
//
// LCG axes: u = log rho, v = log |rho ds/drho| with rho = 1/kappa. For a
// log-aesthetic curve rho ds/drho = rho^alpha / lambda, so the graph is the
// line v = alpha u - log lambda.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcurves/error.hpp"
#include "mcurves/pseudospiral.hpp"

namespace mcurves {

struct LcgPoint {
  double u = 0.0;
  double v = 0.0;
};

struct LcgReport {
  std::vector<LcgPoint> points;
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
  std::size_t dropped = 0;  // samples discarded for vanishing drho/ds
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

/// Ordinary least squares v = slope u + intercept. Centered sums keep the
/// fit stable when u is far from zero.
inline LineFit fit_line(std::span<const LcgPoint> pts) {
  if (pts.size() < 3) throw Error(ErrorCode::DegenerateLcg, "fewer than 3 usable LCG points");
  const double n = static_cast<double>(pts.size());
  double mu = 0.0, mv = 0.0;
  for (const auto& p : pts) {
    mu += p.u;
    mv += p.v;
  }
  mu /= n;
  mv /= n;
  double suu = 0.0, suv = 0.0;
  for (const auto& p : pts) {
    suu += (p.u - mu) * (p.u - mu);
    suv += (p.u - mu) * (p.v - mv);
  }
  const double span_u = std::max_element(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.u < b.u; })->u -
                        std::min_element(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.u < b.u; })->u;
  if (!(span_u > 1e-12 * std::max(1.0, std::abs(mu)))) {
    throw Error(ErrorCode::DegenerateLcg, "log radius of curvature does not vary");
  }
  LineFit fit;
  fit.slope = suv / suu;
  fit.intercept = mv - fit.slope * mu;
  double ss = 0.0;
  for (const auto& p : pts) {
    const double r = p.v - (fit.slope * p.u + fit.intercept);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

inline LcgReport make_lcg_report(std::vector<LcgPoint> points, std::size_t dropped) {
  const LineFit fit = fit_line(points);
  return {std::move(points), fit.slope, fit.intercept, fit.rms_residual, dropped};
}

/// LCG from an analytic curvature profile and its derivative at n uniform
/// stations over [s_begin, s_end].
inline LcgReport lcg_analytic(const std::function<double(double)>& kappa,
                              const std::function<double(double)>& dkappa, double s_begin,
                              double s_end, std::size_t n) {
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "LCG needs at least 3 stations");
  if (!(s_end > s_begin)) throw Error(ErrorCode::InvalidArgument, "empty arc-length range");
  std::vector<LcgPoint> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = s_begin + (s_end - s_begin) * static_cast<double>(i) / static_cast<double>(n - 1);
    const double k = kappa(s);
    const double dk = dkappa(s);
    if (!(k > 0.0)) throw Error(ErrorCode::InvalidArgument, "curvature must be positive for an LCG");
    // drho/ds = -kappa' / kappa^2
    const double drho = -dk / (k * k);
    if (drho == 0.0) {
      throw Error(ErrorCode::DegenerateLcg, "drho/ds vanishes at s = " + std::to_string(s));
    }
    const double rho = 1.0 / k;
    pts.push_back({std::log(rho), std::log(std::abs(rho / drho))});
  }
  return make_lcg_report(std::move(pts), 0);
}

/// LCG of a log-aesthetic curve over [s_begin, s_end] from the closed-form
/// curvature and its derivative.
inline LcgReport lcg_analytic(const NaturalEquation& eq, double s_begin, double s_end, std::size_t n) {
  eq.check_domain(s_begin);
  eq.check_domain(s_end);
  return lcg_analytic([&](double s) { return curvature(eq, s); },
                      [&](double s) { return curvature_derivative(eq, s); }, s_begin, s_end, n);
}

namespace detail {

/// Second-order finite-difference derivative of y(s) on a possibly
/// non-uniform grid: centered three-point stencil inside, one-sided
/// three-point stencils at the ends.
inline std::vector<double> derivative(std::span<const double> s, std::span<const double> y) {
  const std::size_t n = s.size();
  std::vector<double> d(n);
  auto three_point = [&](std::size_t i0, std::size_t i1, std::size_t i2, std::size_t at) {
    const double x0 = s[i0], x1 = s[i1], x2 = s[i2], x = s[at];
    // Derivative of the Lagrange interpolant through the three points.
    const double l0 = ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2));
    const double l1 = ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2));
    const double l2 = ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1));
    return l0 * y[i0] + l1 * y[i1] + l2 * y[i2];
  };
  d[0] = three_point(0, 1, 2, 0);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = three_point(i - 1, i, i + 1, i);
  d[n - 1] = three_point(n - 3, n - 2, n - 1, n - 1);
  return d;
}

}  // namespace detail

/// LCG from sampled (s, kappa). drho/ds comes from finite differences at
/// the native spacing; samples with |drho/ds| below drop_tolerance are
/// discarded. The default tolerance is 1e-10 * max(rho) / (s range).
inline LcgReport lcg_from_samples(std::span<const double> s, std::span<const double> kappa,
                                  std::optional<double> drop_tolerance = std::nullopt) {
  if (s.size() != kappa.size()) throw Error(ErrorCode::InvalidArgument, "s and kappa lengths differ");
  if (s.size() < 5) throw Error(ErrorCode::InvalidArgument, "LCG from samples needs at least 5 samples");
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i] > s[i - 1])) throw Error(ErrorCode::InvalidArgument, "arc length must be strictly increasing");
  }
  std::vector<double> rho(kappa.size());
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    if (!(kappa[i] > 0.0) || !std::isfinite(kappa[i])) {
      throw Error(ErrorCode::InvalidArgument, "curvature must be positive at every sample");
    }
    rho[i] = 1.0 / kappa[i];
  }
  const std::vector<double> drho = detail::derivative(s, rho);
  const double tol = drop_tolerance.value_or(1e-10 * *std::max_element(rho.begin(), rho.end()) /
                                             (s.back() - s.front()));
  std::vector<LcgPoint> pts;
  pts.reserve(s.size());
  std::size_t dropped = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(std::abs(drho[i]) > tol)) {
      ++dropped;
      continue;
    }
    pts.push_back({std::log(rho[i]), std::log(std::abs(rho[i] / drho[i]))});
  }
  if (pts.size() < 3) {
    throw Error(ErrorCode::DegenerateLcg, std::to_string(dropped) + " of " + std::to_string(s.size()) +
                                              " samples have vanishing drho/ds");
  }
  return make_lcg_report(std::move(pts), dropped);
}

inline LcgReport lcg_from_samples(const SampledCurve& curve, std::optional<double> drop_tolerance = std::nullopt) {
  std::vector<double> s, k;
  s.reserve(curve.samples.size());
  k.reserve(curve.samples.size());
  for (const auto& c : curve.samples) {
    s.push_back(c.s);
    k.push_back(std::abs(c.kappa));
  }
  return lcg_from_samples(s, k, drop_tolerance);
}

// -- monotone curvature ------------------------------------------------------

enum class Direction { Decreasing, Increasing, Constant, NonMonotone };

constexpr std::string_view to_string(Direction d) noexcept {
  switch (d) {
    case Direction::Decreasing: return "decreasing";
    case Direction::Increasing: return "increasing";
    case Direction::Constant: return "constant";
    case Direction::NonMonotone: return "non-monotone";
  }
  return "";
}

struct CurvatureViolation {
  double s = 0.0;
  double kappa = 0.0;
};

struct MonotonicityReport {
  bool is_monotone = true;
  Direction direction = Direction::Constant;
  std::vector<CurvatureViolation> violations;
  double tolerance = 0.0;
};

/// Classifies a curvature profile. The direction is set by the first sample
/// that moves more than `tolerance` away from an earlier one; a violation is
/// any later sample that moves back past the running extremum by more than
/// `tolerance`. This is equivalent to comparing every ordered pair.
/// Default tolerance: 1e-12 * max |kappa|.
inline MonotonicityReport check_monotone(std::span<const double> s, std::span<const double> kappa,
                                         std::optional<double> tolerance = std::nullopt) {
  if (s.size() != kappa.size()) throw Error(ErrorCode::InvalidArgument, "s and kappa lengths differ");
  if (s.size() < 2) throw Error(ErrorCode::InvalidArgument, "monotonicity check needs at least 2 samples");
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i] > s[i - 1])) throw Error(ErrorCode::InvalidArgument, "arc length must be strictly increasing");
  }
  double kmax = 0.0;
  for (double k : kappa) kmax = std::max(kmax, std::abs(k));
  MonotonicityReport report;
  report.tolerance = tolerance.value_or(1e-12 * kmax);
  const double tol = report.tolerance;

  double lo = kappa[0];
  double hi = kappa[0];
  Direction dir = Direction::Constant;
  for (std::size_t j = 1; j < kappa.size(); ++j) {
    const double k = kappa[j];
    const bool rises = k > lo + tol;
    const bool falls = k < hi - tol;
    if (dir == Direction::Constant) {
      if (falls && !rises) dir = Direction::Decreasing;
      else if (rises && !falls) dir = Direction::Increasing;
    } else if ((dir == Direction::Decreasing && rises) || (dir == Direction::Increasing && falls)) {
      report.violations.push_back({s[j], k});
    }
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  report.is_monotone = report.violations.empty();
  report.direction = report.is_monotone ? dir : Direction::NonMonotone;
  return report;
}

inline MonotonicityReport check_monotone(const SampledCurve& curve, std::optional<double> tolerance = std::nullopt) {
  std::vector<double> s, k;
  for (const auto& c : curve.samples) {
    s.push_back(c.s);
    k.push_back(c.kappa);
  }
  return check_monotone(s, k, tolerance);
}

// -- stress markers ------------------------------------------------------------

/// Curvature extremum and steepest curvature change along a sampled curve,
/// the measurable stand-ins for visually marked stress ranges.
struct StressMarker {
  double s_at_max_kappa = 0.0;
  double kappa_max = 0.0;
  double s_at_max_kappa_slope = 0.0;
  double kappa_slope_max = 0.0;  // max |dkappa/ds| between consecutive samples
};

/// Ties (values within a relative 1e-9 of the maximum) resolve to the
/// smallest arc length. The slope location is the left end of the steepest
/// sample interval.
inline StressMarker stress_marker(std::span<const double> s, std::span<const double> kappa) {
  if (s.size() != kappa.size()) throw Error(ErrorCode::InvalidArgument, "s and kappa lengths differ");
  if (s.size() < 3) throw Error(ErrorCode::InvalidArgument, "stress marker needs at least 3 samples");
  constexpr double tie = 1e-9;
  StressMarker m;
  m.kappa_max = *std::max_element(kappa.begin(), kappa.end());
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    if (kappa[i] >= m.kappa_max - tie * std::abs(m.kappa_max)) {
      m.s_at_max_kappa = s[i];
      break;
    }
  }
  std::vector<double> slope(s.size() - 1);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    slope[i] = std::abs((kappa[i + 1] - kappa[i]) / (s[i + 1] - s[i]));
  }
  m.kappa_slope_max = *std::max_element(slope.begin(), slope.end());
  for (std::size_t i = 0; i < slope.size(); ++i) {
    if (slope[i] >= m.kappa_slope_max - tie * m.kappa_slope_max) {
      m.s_at_max_kappa_slope = s[i];
      break;
    }
  }
  return m;
}

inline StressMarker stress_marker(const SampledCurve& curve) {
  std::vector<double> s, k;
  for (const auto& c : curve.samples) {
    s.push_back(c.s);
    k.push_back(std::abs(c.kappa));
  }
  return stress_marker(s, k);
}

}  // namespace mcurves
