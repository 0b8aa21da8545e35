#pragma once

// Log-aesthetic curves (pseudospirals) given by their natural equation
//
//   kappa(s) = exp(-lambda s)                        alpha == 0
//   kappa(s) = (lambda alpha s + 1)^(-1 / alpha)     otherwise
//
// All curves start at the origin heading along +x with kappa(0) = 1 and turn
// counterclockwise. Placement and size come from a similarity transform.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mcurves/error.hpp"
#include "mcurves/quadrature.hpp"

namespace mcurves {

/// Which closed form applies. Values of alpha within 1e-12 of 0 or 1 snap to
/// the exponential / logarithmic branch.
enum class Branch { Exponential, Logarithmic, Power };

class NaturalEquation {
 public:
  static constexpr double kBranchSnap = 1e-12;
  static constexpr double kDomainGuard = 1e-12;

  NaturalEquation(double alpha, double lambda) : alpha_(alpha), lambda_(lambda) {
    if (!std::isfinite(alpha)) {
      throw Error(ErrorCode::InvalidArgument, "alpha must be finite");
    }
    if (!std::isfinite(lambda) || !(lambda > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "lambda must be a positive finite number");
    }
    if (std::abs(alpha) < kBranchSnap) {
      branch_ = Branch::Exponential;
    } else if (std::abs(alpha - 1.0) < kBranchSnap) {
      branch_ = Branch::Logarithmic;
    } else {
      branch_ = Branch::Power;
    }
    s_max_domain_ = (alpha < 0.0 && branch_ == Branch::Power)
                        ? -1.0 / (lambda * alpha)
                        : std::numeric_limits<double>::infinity();
  }

  double alpha() const noexcept { return alpha_; }
  double lambda() const noexcept { return lambda_; }
  Branch branch() const noexcept { return branch_; }

  /// Supremum of arc length where the natural equation is defined.
  double s_max_domain() const noexcept { return s_max_domain_; }

  /// Largest arc length accepted by evaluators.
  double s_limit() const noexcept {
    return std::isfinite(s_max_domain_) ? (1.0 - kDomainGuard) * s_max_domain_ : s_max_domain_;
  }

  void check_domain(double s) const {
    if (!(s >= 0.0) || s > s_limit()) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "arc length " << s << " outside [0, s_max_domain = " << s_max_domain_ << ")";
      throw Error(ErrorCode::DomainExceeded, msg.str());
    }
  }

  friend bool operator==(const NaturalEquation&, const NaturalEquation&) = default;

 private:
  double alpha_;
  double lambda_;
  Branch branch_ = Branch::Power;
  double s_max_domain_ = 0.0;
};

// -- closed forms -----------------------------------------------------------

inline double curvature(const NaturalEquation& eq, double s) {
  eq.check_domain(s);
  const double a = eq.alpha();
  const double l = eq.lambda();
  switch (eq.branch()) {
    case Branch::Exponential: return std::exp(-l * s);
    case Branch::Logarithmic: return 1.0 / (1.0 + l * s);
    case Branch::Power: return std::exp(-std::log1p(l * a * s) / a);
  }
  return 0.0;
}

/// d(kappa)/ds = -lambda * kappa^(alpha + 1).
inline double curvature_derivative(const NaturalEquation& eq, double s) {
  const double k = curvature(eq, s);
  switch (eq.branch()) {
    case Branch::Exponential: return -eq.lambda() * k;
    case Branch::Logarithmic: return -eq.lambda() * k * k;
    case Branch::Power: return -eq.lambda() * std::pow(k, eq.alpha() + 1.0);
  }
  return 0.0;
}

/// log of the radius of curvature, log(1 / kappa(s)). This is the variable
/// used internally for position integrals because it stays well scaled when
/// the arc length itself grows exponentially.
inline double log_radius(const NaturalEquation& eq, double s) {
  eq.check_domain(s);
  const double a = eq.alpha();
  const double l = eq.lambda();
  switch (eq.branch()) {
    case Branch::Exponential: return l * s;
    case Branch::Logarithmic: return std::log1p(l * s);
    case Branch::Power: return std::log1p(l * a * s) / a;
  }
  return 0.0;
}

/// Inverse of log_radius.
inline double arc_length_at_log_radius(const NaturalEquation& eq, double u) {
  const double a = eq.alpha();
  const double l = eq.lambda();
  switch (eq.branch()) {
    case Branch::Exponential: return u / l;
    case Branch::Logarithmic: return std::expm1(u) / l;
    case Branch::Power: return std::expm1(a * u) / (l * a);
  }
  return 0.0;
}

/// Tangent angle as a function of log radius u.
inline double turning_angle_at_log_radius(const NaturalEquation& eq, double u) {
  const double a = eq.alpha();
  const double l = eq.lambda();
  switch (eq.branch()) {
    case Branch::Exponential: return -std::expm1(-u) / l;
    case Branch::Logarithmic: return u / l;
    case Branch::Power: return std::expm1((a - 1.0) * u) / (l * (a - 1.0));
  }
  return 0.0;
}

/// theta(s) = integral of kappa over [0, s].
///   alpha = 0: (1 - e^(-lambda s)) / lambda
///   alpha = 1: ln(1 + lambda s) / lambda
///   otherwise: ((1 + lambda alpha s)^((alpha - 1) / alpha) - 1) / (lambda (alpha - 1))
inline double turning_angle(const NaturalEquation& eq, double s) {
  return turning_angle_at_log_radius(eq, log_radius(eq, s));
}

/// Supremum of the turning angle over the whole domain; finite iff alpha < 1.
inline double turning_limit(const NaturalEquation& eq) {
  if (eq.alpha() >= 1.0 || eq.branch() == Branch::Logarithmic) {
    return std::numeric_limits<double>::infinity();
  }
  return 1.0 / (eq.lambda() * (1.0 - eq.alpha()));
}

/// Arc length at which the tangent has turned by theta, or a negative value
/// when the curve never turns that far inside its evaluation domain.
inline double arc_length_at_turning(const NaturalEquation& eq, double theta) {
  if (!(theta >= 0.0)) return -1.0;
  const double a = eq.alpha();
  const double l = eq.lambda();
  double s = -1.0;
  switch (eq.branch()) {
    case Branch::Exponential: {
      const double x = l * theta;
      if (x >= 1.0) return -1.0;
      s = -std::log1p(-x) / l;
      break;
    }
    case Branch::Logarithmic: s = std::expm1(l * theta) / l; break;
    case Branch::Power: {
      const double base = l * (a - 1.0) * theta;
      if (base <= -1.0) return -1.0;
      s = std::expm1(a / (a - 1.0) * std::log1p(base)) / (l * a);
      break;
    }
  }
  if (!std::isfinite(s) || s > eq.s_limit()) return -1.0;
  return s;
}

// -- positions -------------------------------------------------------------

namespace detail {

/// Breakpoints that split [u0, u1] geometrically away from both ends so the
/// initial panels resolve features near either end of very long intervals.
inline std::vector<double> geometric_breakpoints(double u0, double u1) {
  std::vector<double> cuts;
  const double len = u1 - u0;
  if (!(len > 2.0)) return cuts;
  std::vector<double> from_end;
  for (double step = 1.0; step < 0.5 * len; step *= 2.0) {
    cuts.push_back(u0 + step);
    from_end.push_back(u1 - step);
  }
  cuts.push_back(u0 + 0.5 * len);
  cuts.insert(cuts.end(), from_end.rbegin(), from_end.rend());
  return cuts;
}

}  // namespace detail

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Displacement between arc lengths s0 <= s1 on the normalized curve, i.e.
/// the integral of (cos theta, sin theta) ds. Integration runs in the log
/// radius variable u, where ds = e^(alpha u) / lambda du.
inline Point2 displacement(const NaturalEquation& eq, double s0, double s1, double tol = 1e-12) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  if (s1 < s0) throw Error(ErrorCode::InvalidArgument, "s1 must not precede s0");
  const double u0 = log_radius(eq, s0);
  const double u1 = log_radius(eq, s1);
  if (u1 == u0) return {};
  const double a = eq.branch() == Branch::Exponential ? 0.0 : eq.alpha();
  const double inv_l = 1.0 / eq.lambda();
  auto tangent = [&](double u) {
    const double w = std::exp(a * u) * inv_l;
    const double th = turning_angle_at_log_radius(eq, u);
    return std::array<double, 2>{w * std::cos(th), w * std::sin(th)};
  };
  const auto cuts = detail::geometric_breakpoints(u0, u1);
  const auto r = integrate_components<2>(tangent, u0, u1, Tolerance::uniform(tol), cuts);
  return {r[0].value, r[1].value};
}

/// Point at arc length s on the normalized curve (origin start, theta(0) = 0).
inline Point2 evaluate_point(const NaturalEquation& eq, double s, double tol = 1e-12) {
  return displacement(eq, 0.0, s, tol);
}

// -- sampled curves --------------------------------------------------------

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double angle = 0.0;
};

struct CurveSample {
  double s = 0.0;
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double kappa = 0.0;
};

/// Arc-length sampled planar curve. Samples are in world coordinates: the
/// normalized curve is mirrored (optionally), scaled, rotated by pose.angle
/// and translated to (pose.x, pose.y).
struct SampledCurve {
  NaturalEquation equation{0.0, 1.0};
  std::vector<CurveSample> samples;
  Pose start;
  double scale = 1.0;
  bool mirrored = false;
};

inline CurveSample place(const CurveSample& local, const Pose& pose, double scale, bool mirrored) {
  const double c = std::cos(pose.angle);
  const double sn = std::sin(pose.angle);
  const double ly = mirrored ? -local.y : local.y;
  CurveSample out;
  out.s = local.s * scale;
  out.x = pose.x + scale * (c * local.x - sn * ly);
  out.y = pose.y + scale * (sn * local.x + c * ly);
  out.theta = pose.angle + (mirrored ? -local.theta : local.theta);
  out.kappa = (mirrored ? -local.kappa : local.kappa) / scale;
  return out;
}

/// n samples at uniform arc-length stations over [0, s_end]. Positions are
/// accumulated from station-to-station integrals.
inline SampledCurve sample_curve(const NaturalEquation& eq, double s_end, std::size_t n,
                                 const Pose& pose = {}, double tol = 1e-12) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "sample count must be at least 2");
  if (!(s_end > 0.0)) throw Error(ErrorCode::InvalidArgument, "s_end must be positive");
  eq.check_domain(s_end);

  SampledCurve curve{eq, {}, pose, 1.0, false};
  curve.samples.reserve(n);
  Point2 p{};
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = (i + 1 == n) ? s_end : s_end * static_cast<double>(i) / static_cast<double>(n - 1);
    if (i > 0) {
      const Point2 d = displacement(eq, prev, s, tol);
      p.x += d.x;
      p.y += d.y;
    }
    prev = s;
    curve.samples.push_back(place({s, p.x, p.y, turning_angle(eq, s), curvature(eq, s)}, pose, 1.0, false));
  }
  return curve;
}

// -- named members ---------------------------------------------------------

enum class NamedCurve { Euler, Nielsen, LogSpiral, Involute, QuasiCircle };

inline double named_alpha(NamedCurve name) noexcept {
  switch (name) {
    case NamedCurve::Euler: return -1.0;
    case NamedCurve::Nielsen: return 0.0;
    case NamedCurve::LogSpiral: return 1.0;
    case NamedCurve::Involute: return 2.0;
    case NamedCurve::QuasiCircle: return 10.0;
  }
  return 0.0;
}

inline NamedCurve parse_named_curve(std::string_view name) {
  if (name == "euler") return NamedCurve::Euler;
  if (name == "nielsen") return NamedCurve::Nielsen;
  if (name == "log_spiral") return NamedCurve::LogSpiral;
  if (name == "involute") return NamedCurve::Involute;
  if (name == "quasi_circle") return NamedCurve::QuasiCircle;
  throw Error(ErrorCode::UnknownName, "unknown curve name '" + std::string(name) +
                                          "' (expected euler, nielsen, log_spiral, involute, quasi_circle)");
}

inline NaturalEquation named_curve(NamedCurve name, double lambda) {
  return NaturalEquation(named_alpha(name), lambda);
}

inline NaturalEquation named_curve(std::string_view name, double lambda) {
  return named_curve(parse_named_curve(name), lambda);
}

}  // namespace mcurves
