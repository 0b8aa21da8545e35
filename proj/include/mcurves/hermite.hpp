#pragma once

// Two-point G1 Hermite fitting with log-aesthetic segments.
//
// A segment is normalized so it starts at the origin heading along +x and
// turns counterclockwise by delta_theta. Its chord then makes an angle psi
// with the start tangent; fitting means finding lambda so that psi matches
// the chord direction of the problem, after which a similarity transform
// places the normalized curve onto the data.
//
// The scan runs in U = log(rho at the segment end), which is monotone in
// lambda for a fixed turning and stays finite near the turning bound where
// lambda itself stops resolving the configuration:
//
//   lambda(U) = expm1((alpha - 1) U) / ((alpha - 1) delta_theta)
//   theta(u)  = delta_theta * expm1((alpha - 1) u) / expm1((alpha - 1) U)
//   psi(U)    = arg  integral_0^U  e^(alpha (u - U)) e^(i theta(u)) du
//
// A segment traversed from its low-curvature end and mirrored turns the same
// way with psi replaced by delta_theta - psi; the `reversed` flag selects
// that orientation. Together both orientations cover chord angles on both
// sides of delta_theta / 2.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "mcurves/error.hpp"
#include "mcurves/pseudospiral.hpp"
#include "mcurves/quadrature.hpp"

namespace mcurves {

struct HermiteProblem {
  Point2 p_start;
  Point2 p_end;
  Point2 t_start{1.0, 0.0};
  Point2 t_end{1.0, 0.0};
  double alpha = 0.0;
};

struct Similarity {
  double rotation = 0.0;  // radians, applied after the optional mirror
  double scale = 1.0;
  Point2 translation;
  bool mirror = false;  // reflect y before rotating
};

struct LambdaGrid {
  double min = 1e-6;
  double max = 1e6;
  std::size_t count = 97;

  std::vector<double> values() const {
    if (!(min > 0.0) || !(max >= min) || count < 1) {
      throw Error(ErrorCode::InvalidArgument, "lambda grid needs 0 < min <= max and count >= 1");
    }
    std::vector<double> v(count);
    if (count == 1) {
      v[0] = min;
      return v;
    }
    const double lmin = std::log(min), lmax = std::log(max);
    for (std::size_t i = 0; i < count; ++i) {
      v[i] = std::exp(lmin + (lmax - lmin) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    v.front() = min;
    v.back() = max;
    return v;
  }
};

struct AlternativeSolution {
  double lambda = 0.0;
  bool reversed = false;
  double residual = 0.0;
};

struct FittedSegment {
  NaturalEquation equation{0.0, 1.0};
  double s_total = 0.0;  // arc length of the normalized segment
  Similarity transform;
  bool reversed = false;  // traversed from the low-curvature end
  double residual = 0.0;  // |psi achieved - psi target|, radians
  double delta_theta = 0.0;  // normalized (positive) turning
  double psi_target = 0.0;   // normalized chord angle
  std::vector<AlternativeSolution> alternatives;

  /// lambda of the placed curve (curvature measured in world units).
  double world_lambda() const { return equation.lambda() / transform.scale; }
  double world_length() const { return s_total * transform.scale; }
};

struct RegionSample {
  double lambda = 0.0;
  double psi = 0.0;
  bool reversed = false;
};

struct DrawableRegion {
  double alpha = 0.0;
  double delta_theta = 0.0;
  double psi_min = 0.0;
  double psi_max = 0.0;
  std::vector<RegionSample> boundary_samples;
};

namespace hermite {

inline constexpr double kGuardLogRadius = 27.631021115928547;  // -log(1e-12), matches the domain guard
inline constexpr double kMaxExpArgument = 700.0;               // keeps arc lengths finite
inline constexpr double kNielsenMaxLogRadius = 1e6;

inline bool is_exponential(double alpha) { return std::abs(alpha) < NaturalEquation::kBranchSnap; }
inline bool is_logarithmic(double alpha) { return std::abs(alpha - 1.0) < NaturalEquation::kBranchSnap; }

/// Largest log radius at which a segment can end: the domain guard for
/// alpha < 0, finite arc length for alpha > 0.
inline double max_log_radius(double alpha) {
  if (is_exponential(alpha)) return kNielsenMaxLogRadius;
  if (alpha < 0.0) return kGuardLogRadius / -alpha;
  return kMaxExpArgument / alpha;
}

inline double lambda_at_log_radius(double alpha, double log_radius, double delta_theta) {
  if (is_logarithmic(alpha)) return log_radius / delta_theta;
  const double a1 = is_exponential(alpha) ? -1.0 : alpha - 1.0;
  return std::expm1(a1 * log_radius) / (a1 * delta_theta);
}

/// Log radius reached after turning delta_theta, or NaN if never reached.
inline double log_radius_at_lambda(double alpha, double lambda, double delta_theta) {
  if (is_logarithmic(alpha)) return lambda * delta_theta;
  const double a1 = is_exponential(alpha) ? -1.0 : alpha - 1.0;
  const double x = lambda * a1 * delta_theta;
  if (x <= -1.0) return std::numeric_limits<double>::quiet_NaN();
  return std::log1p(x) / a1;
}

/// Chord angle of the forward (decreasing-curvature) segment.
inline double chord_angle_at_log_radius(double alpha, double log_radius, double delta_theta) {
  const double U = log_radius;
  const bool log_branch = is_logarithmic(alpha);
  const double a = is_exponential(alpha) ? 0.0 : alpha;
  const double a1 = is_exponential(alpha) ? -1.0 : alpha - 1.0;
  const double denom = log_branch ? U : std::expm1(a1 * U);
  auto f = [&](double u) {
    const double w = std::exp(a * (u - U));
    const double th = delta_theta * (log_branch ? u : std::expm1(a1 * u)) / denom;
    return std::array<double, 2>{w * std::cos(th), w * std::sin(th)};
  };
  // Every tangent lies within delta_theta / 2 of the bisector, so the chord
  // is at least cos(delta_theta / 2) times the weight integral. Using that as
  // the absolute scale keeps a component that cancels to ~0 from stalling.
  const double weight = a == 0.0 ? U : -std::expm1(-a * U) / a;
  const double floor = 1e-15 * std::cos(0.5 * delta_theta) * weight;
  const auto cuts = detail::geometric_breakpoints(0.0, U);
  const auto r = integrate_components<2>(f, 0.0, U, Tolerance{std::max(floor, 1e-300), 1e-13}, cuts);
  return std::atan2(r[1].value, r[0].value);
}

struct ScanPoint {
  double log_radius;
  double lambda;
  double psi;  // forward orientation
};

/// psi over the lambda grid (unreachable entries skipped). When the turning
/// bound of alpha < 1 falls inside the grid, extra samples approach it in
/// log radius. `below` adds decades under grid.min for the near-circular
/// limit.
inline std::vector<ScanPoint> scan(double alpha, double delta_theta, const LambdaGrid& grid, int below = 0) {
  const double u_cap = max_log_radius(alpha);
  std::vector<double> lambdas;
  for (int k = below; k >= 1; --k) lambdas.push_back(grid.min * std::pow(10.0, -k));
  const auto values = grid.values();
  lambdas.insert(lambdas.end(), values.begin(), values.end());

  std::vector<ScanPoint> pts;
  for (double l : lambdas) {
    const double U = log_radius_at_lambda(alpha, l, delta_theta);
    if (!(U > 0.0) || !(U <= u_cap)) continue;
    pts.push_back({U, l, chord_angle_at_log_radius(alpha, U, delta_theta)});
  }

  if (alpha < 1.0 && !is_logarithmic(alpha)) {
    const double a1 = is_exponential(alpha) ? -1.0 : alpha - 1.0;
    const double lambda_bound = 1.0 / (-a1 * delta_theta);
    const double u_start = pts.empty() ? log_radius_at_lambda(alpha, grid.min, delta_theta) : pts.back().log_radius;
    if (lambda_bound > grid.min && lambda_bound <= grid.max && u_start > 0.0 && u_start < u_cap) {
      constexpr int steps = 48;
      const double ratio = std::pow(u_cap / u_start, 1.0 / steps);
      for (int k = 1; k <= steps; ++k) {
        const double U = (k == steps) ? u_cap : u_start * std::pow(ratio, k);
        const double l = lambda_at_log_radius(alpha, U, delta_theta);
        pts.push_back({U, l, chord_angle_at_log_radius(alpha, U, delta_theta)});
      }
    }
  }
  return pts;
}

inline void check_turning(double delta_theta) {
  if (!(delta_theta > 0.0) || !(delta_theta < std::numbers::pi)) {
    throw Error(ErrorCode::DegenerateInput, "turning angle must lie in (0, pi)");
  }
}

}  // namespace hermite

/// Angle of the chord of the normalized segment (alpha, lambda) that turns
/// by delta_theta, measured from its start tangent.
inline double chord_angle(double alpha, double lambda, double delta_theta) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  if (!(delta_theta > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta_theta must be positive");
  const double U = hermite::log_radius_at_lambda(alpha, lambda, delta_theta);
  if (!(U > 0.0) || !(U <= hermite::max_log_radius(alpha))) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "alpha = " << alpha << ", lambda = " << lambda << " cannot turn by " << delta_theta;
    if (alpha < 1.0 && !hermite::is_logarithmic(alpha)) {
      msg << " (turning bound " << turning_limit(NaturalEquation(alpha, lambda)) << ")";
    } else {
      msg << " (arc length not representable)";
    }
    throw Error(ErrorCode::TurningUnreachable, msg.str());
  }
  return hermite::chord_angle_at_log_radius(alpha, U, delta_theta);
}

/// Chord-angle range achievable by single segments of the given alpha and
/// turning, sampled over the lambda grid in both orientations.
inline DrawableRegion drawable_region(double alpha, double delta_theta, const LambdaGrid& grid = {}) {
  hermite::check_turning(delta_theta);
  const auto pts = hermite::scan(alpha, delta_theta, grid);
  if (pts.empty()) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "no lambda in [" << grid.min << ", " << grid.max << "] turns alpha = " << alpha << " by " << delta_theta;
    throw Error(ErrorCode::EmptyRegion, msg.str());
  }
  DrawableRegion region{alpha, delta_theta, std::numeric_limits<double>::infinity(),
                        -std::numeric_limits<double>::infinity(), {}};
  region.boundary_samples.reserve(2 * pts.size());
  for (bool reversed : {false, true}) {
    for (const auto& p : pts) {
      const double psi = reversed ? delta_theta - p.psi : p.psi;
      region.boundary_samples.push_back({p.lambda, psi, reversed});
      region.psi_min = std::min(region.psi_min, psi);
      region.psi_max = std::max(region.psi_max, psi);
    }
  }
  return region;
}

namespace hermite {

inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }

struct Normalized {
  double delta_theta;  // > 0 after mirroring
  double psi;          // chord angle from start tangent, mirrored with delta_theta
  bool mirror;
  double start_angle;
  double chord;
};

inline Normalized normalize(const HermiteProblem& p) {
  const double nt0 = std::hypot(p.t_start.x, p.t_start.y);
  const double nt1 = std::hypot(p.t_end.x, p.t_end.y);
  if (!(nt0 > 0.0) || !(nt1 > 0.0) || !std::isfinite(nt0) || !std::isfinite(nt1)) {
    throw Error(ErrorCode::DegenerateInput, "tangent vectors must be nonzero and finite");
  }
  const Point2 t0{p.t_start.x / nt0, p.t_start.y / nt0};
  const Point2 t1{p.t_end.x / nt1, p.t_end.y / nt1};
  const Point2 c{p.p_end.x - p.p_start.x, p.p_end.y - p.p_start.y};
  const double chord = std::hypot(c.x, c.y);
  if (!(chord > 0.0) || !std::isfinite(chord)) throw Error(ErrorCode::DegenerateInput, "endpoints coincide");
  double dtheta = std::atan2(cross(t0, t1), dot(t0, t1));
  double psi = std::atan2(cross(t0, c), dot(t0, c));
  if (std::abs(dtheta) <= 1e-12) throw Error(ErrorCode::DegenerateInput, "tangents are parallel (zero turning)");
  if (std::abs(dtheta) >= std::numbers::pi - 1e-12) {
    throw Error(ErrorCode::DegenerateInput, "turning of pi or more is not supported");
  }
  const bool mirror = dtheta < 0.0;
  if (mirror) {
    dtheta = -dtheta;
    psi = -psi;
  }
  return {dtheta, psi, mirror, std::atan2(t0.y, t0.x), chord};
}

struct Bracketed {
  double log_radius;
  double lambda;
  double psi;
  bool reversed;
};

/// Bisection in log(U) on psi(U) - target between two scan points whose
/// residuals differ in sign.
inline Bracketed bisect(double alpha, double delta_theta, double target, bool reversed, ScanPoint lo,
                        ScanPoint hi) {
  auto residual = [&](double psi) { return (reversed ? delta_theta - psi : psi) - target; };
  double flo = residual(lo.psi);
  ScanPoint best = std::abs(flo) <= std::abs(residual(hi.psi)) ? lo : hi;
  double ua = lo.log_radius, ub = hi.log_radius;
  for (int it = 0; it < 200; ++it) {
    if (ub - ua <= 1e-13 * ub) break;
    const double um = std::sqrt(ua * ub);
    const double psi = chord_angle_at_log_radius(alpha, um, delta_theta);
    const double fm = residual(psi);
    if (std::abs(fm) < std::abs(residual(best.psi))) best = {um, 0.0, psi};
    if (fm == 0.0) break;
    if ((fm < 0.0) == (flo < 0.0)) {
      ua = um;
      flo = fm;
    } else {
      ub = um;
    }
  }
  return {best.log_radius, lambda_at_log_radius(alpha, best.log_radius, delta_theta), best.psi, reversed};
}

}  // namespace hermite

/// Solves the G1 Hermite problem for the problem's alpha. Every bracket of
/// psi(lambda) - psi* found on the grid (in either orientation) is refined;
/// the smallest-lambda solution is returned and the rest are listed in
/// `alternatives`. `tol` bounds the chord-angle residual in radians.
inline FittedSegment fit_g1(const HermiteProblem& problem, double tol = 1e-10, const LambdaGrid& grid = {}) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  if (!std::isfinite(problem.alpha)) throw Error(ErrorCode::InvalidArgument, "alpha must be finite");
  const auto norm = hermite::normalize(problem);
  const double dth = norm.delta_theta;
  const double target = norm.psi;
  const double alpha = problem.alpha;

  auto no_solution = [&](const std::vector<hermite::ScanPoint>& pts) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "alpha = " << alpha << ", delta_theta = " << dth << ": chord angle " << target;
    if (pts.empty()) {
      msg << " (no reachable lambda)";
    } else {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (const auto& p : pts) {
        lo = std::min({lo, p.psi, dth - p.psi});
        hi = std::max({hi, p.psi, dth - p.psi});
      }
      msg << " outside drawable range [" << lo << ", " << hi << "]";
    }
    return Error(ErrorCode::NoSolution, msg.str());
  };

  // A turning curve's chord always lies strictly between its end tangents.
  if (!(target > 0.0) || !(target < dth)) throw no_solution({});

  const auto pts = hermite::scan(alpha, dth, grid, 10);
  if (pts.empty()) throw no_solution(pts);

  std::vector<hermite::Bracketed> roots;
  for (bool reversed : {false, true}) {
    auto res = [&](const hermite::ScanPoint& p) { return (reversed ? dth - p.psi : p.psi) - target; };
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const double f0 = res(pts[i]);
      const double f1 = res(pts[i + 1]);
      if (f0 == 0.0) {
        roots.push_back({pts[i].log_radius, pts[i].lambda, pts[i].psi, reversed});
      } else if ((f0 < 0.0) != (f1 < 0.0) && f1 != 0.0) {
        roots.push_back(hermite::bisect(alpha, dth, target, reversed, pts[i], pts[i + 1]));
      }
    }
    if (res(pts.back()) == 0.0) roots.push_back({pts.back().log_radius, pts.back().lambda, pts.back().psi, reversed});
  }
  if (roots.empty()) {
    // Near-circular limit: psi -> delta_theta / 2 as lambda -> 0.
    const auto best = std::min_element(pts.begin(), pts.end(), [&](const auto& a, const auto& b) {
      return std::abs(a.psi - target) < std::abs(b.psi - target);
    });
    if (std::abs(best->psi - target) <= tol) {
      roots.push_back({best->log_radius, best->lambda, best->psi, false});
    } else if (std::abs(dth - best->psi - target) <= tol) {
      roots.push_back({best->log_radius, best->lambda, best->psi, true});
    } else {
      throw no_solution(pts);
    }
  }
  std::stable_sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) { return a.lambda < b.lambda; });

  const auto& root = roots.front();
  const NaturalEquation eq(alpha, root.lambda);
  const double s_total = std::min(arc_length_at_log_radius(eq, root.log_radius), eq.s_limit());
  const Point2 end = evaluate_point(eq, s_total);
  // Chord of the oriented template in its own frame.
  double chord_len = std::hypot(end.x, end.y);
  double achieved = std::atan2(end.y, end.x);
  if (root.reversed) achieved = dth - achieved;

  FittedSegment seg;
  seg.equation = eq;
  seg.s_total = s_total;
  seg.reversed = root.reversed;
  seg.delta_theta = dth;
  seg.psi_target = target;
  seg.residual = std::abs(achieved - target);
  seg.transform.mirror = norm.mirror;
  seg.transform.rotation = norm.start_angle;
  seg.transform.scale = norm.chord / chord_len;
  seg.transform.translation = problem.p_start;
  for (std::size_t i = 1; i < roots.size(); ++i) {
    const double r = std::abs((roots[i].reversed ? dth - roots[i].psi : roots[i].psi) - target);
    seg.alternatives.push_back({roots[i].lambda, roots[i].reversed, r});
  }
  if (seg.residual > tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "bisection stalled at residual " << seg.residual << " (tol " << tol << ")";
    throw Error(ErrorCode::NoSolution, msg.str());
  }
  return seg;
}

/// World-space samples of a fitted segment at n uniform arc-length stations,
/// ordered from the problem's start point to its end point.
inline SampledCurve sample_segment(const FittedSegment& seg, std::size_t n) {
  const auto local = sample_curve(seg.equation, seg.s_total, n);
  SampledCurve out;
  out.equation = seg.equation;
  out.start = {seg.transform.translation.x, seg.transform.translation.y, seg.transform.rotation};
  out.scale = seg.transform.scale;
  out.mirrored = seg.transform.mirror;
  out.samples.reserve(n);
  const double dth = seg.delta_theta;
  const auto& last = local.samples.back();
  const double c = std::cos(dth), sn = std::sin(dth);
  for (std::size_t j = 0; j < n; ++j) {
    CurveSample tpl;
    if (!seg.reversed) {
      tpl = local.samples[j];
    } else {
      // conj(e^(-i dth) (N(S) - N(S - sigma)))
      const auto& src = local.samples[n - 1 - j];
      const double dx = last.x - src.x, dy = last.y - src.y;
      const double rx = c * dx + sn * dy;
      const double ry = -sn * dx + c * dy;
      tpl = {seg.s_total - src.s, rx, -ry, dth - src.theta, src.kappa};
    }
    out.samples.push_back(place(tpl, out.start, out.scale, out.mirrored));
  }
  return out;
}

/// Intersection of the two tangent lines (the control-triangle apex), if
/// the lines are not parallel.
inline std::optional<Point2> control_apex(const HermiteProblem& p) {
  const double d = hermite::cross(p.t_start, p.t_end);
  if (std::abs(d) < 1e-14 * std::hypot(p.t_start.x, p.t_start.y) * std::hypot(p.t_end.x, p.t_end.y)) {
    return std::nullopt;
  }
  const Point2 c{p.p_end.x - p.p_start.x, p.p_end.y - p.p_start.y};
  const double a = hermite::cross(c, p.t_end) / d;
  return Point2{p.p_start.x + a * p.t_start.x, p.p_start.y + a * p.t_start.y};
}

}  // namespace mcurves
