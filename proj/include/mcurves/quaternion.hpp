#pragma once

// Quaternion integral curves: a unit-speed space curve whose tangent is a
// fixed unit vector carried along by a rotation-valued curve q(t),
//
//   C(s) = P0 + integral_0^s  q(u / S) v0 q(u / S)^-1  du.
//
// q(t) is a cumulative-basis quaternion Bezier curve: the vector sum of the
// cumulative Bernstein form is replaced by a product of exponentials.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "mcurves/error.hpp"
#include "mcurves/quadrature.hpp"

namespace mcurves {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double k, Vec3 a) { return {k * a.x, k * a.y, k * a.z}; }
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) { return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x}; }
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

struct UnitQuaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 vec() const { return {x, y, z}; }
  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

  UnitQuaternion conjugate() const { return {w, -x, -y, -z}; }
  UnitQuaternion inverse() const { return conjugate(); }  // unit norm
  UnitQuaternion operator-() const { return {-w, -x, -y, -z}; }

  /// Rescales to unit norm. Throws on a zero or non-finite quaternion.
  UnitQuaternion normalized() const {
    const double n = norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorCode::InvalidArgument, "quaternion cannot be normalized");
    return {w / n, x / n, y / n, z / n};
  }

  friend bool operator==(const UnitQuaternion&, const UnitQuaternion&) = default;
};

inline double dot(const UnitQuaternion& a, const UnitQuaternion& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

/// Hamilton product, renormalized so unit norm does not drift.
inline UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b) {
  const UnitQuaternion r{a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
                         a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
                         a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
                         a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  const double n = r.norm();
  return {r.w / n, r.x / n, r.y / n, r.z / n};
}

/// q v q^-1 for a unit q.
inline Vec3 rotate(const UnitQuaternion& q, Vec3 v) {
  const Vec3 r = q.vec();
  const Vec3 t = 2.0 * cross(r, v);
  return v + q.w * t + cross(r, t);
}

/// Rotation by `angle` radians about `axis` (normalized here).
inline UnitQuaternion axis_angle(Vec3 axis, double angle) {
  const double n = norm(axis);
  if (!(n > 0.0)) throw Error(ErrorCode::InvalidArgument, "rotation axis must be nonzero");
  const double s = std::sin(0.5 * angle) / n;
  return {std::cos(0.5 * angle), s * axis.x, s * axis.y, s * axis.z};
}

/// (cos|v|, sin|v| v/|v|). Note the rotation angle of the result is 2|v|.
inline UnitQuaternion q_exp(Vec3 v) {
  const double a = norm(v);
  if (a == 0.0) return {};
  const double k = std::sin(a) / a;
  return UnitQuaternion{std::cos(a), k * v.x, k * v.y, k * v.z}.normalized();
}

/// Principal logarithm, |result| in [0, pi]. q = -1 has no unique log.
inline Vec3 q_log(const UnitQuaternion& q) {
  const Vec3 v = q.vec();
  const double s = norm(v);
  if (s == 0.0) {
    if (q.w < 0.0) throw Error(ErrorCode::AntipodalSingularity, "log of -1 is not unique");
    return {};
  }
  const double a = std::atan2(s, q.w);
  return (a / s) * v;
}

struct QuaternionCurve {
  std::vector<UnitQuaternion> controls;  // q_0 .. q_n

  std::size_t degree() const { return controls.empty() ? 0 : controls.size() - 1; }
};

namespace qi {

/// Cumulative Bernstein basis values B~_i(t) = sum_{j >= i} B_j(t), i = 0..n.
inline std::vector<double> cumulative_bernstein(std::size_t n, double t) {
  std::vector<double> b(n + 1, 0.0);
  b[0] = 1.0;
  // de Casteljau-style build of B_j^n(t).
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t j = k; j-- > 0;) {
      b[j + 1] += t * b[j];
      b[j] *= 1.0 - t;
    }
  }
  std::vector<double> cum(n + 1, 0.0);
  double acc = 0.0;
  for (std::size_t i = n + 1; i-- > 0;) {
    acc += b[i];
    cum[i] = acc;
  }
  cum[0] = 1.0;
  return cum;
}

/// Relative rotations log(q_{i-1}^-1 q_i) taking the shorter arc, plus the
/// last control after the same sign chaining.
struct Increments {
  std::vector<Vec3> logs;
  UnitQuaternion last;
};

inline Increments increments(const QuaternionCurve& c) {
  Increments out;
  if (c.controls.empty()) return out;
  out.logs.reserve(c.controls.size() - 1);
  UnitQuaternion prev = c.controls.front();
  for (std::size_t i = 1; i < c.controls.size(); ++i) {
    UnitQuaternion q = c.controls[i];
    if (dot(prev, q) < 0.0) q = -q;
    out.logs.push_back(q_log(prev.inverse() * q));
    prev = q;
  }
  out.last = prev;
  return out;
}

inline void validate(const QuaternionCurve& c) {
  if (c.controls.empty()) throw Error(ErrorCode::EmptyInput, "quaternion curve needs at least one control");
  for (const auto& q : c.controls) {
    if (!(std::abs(q.norm() - 1.0) <= 1e-12)) {
      throw Error(ErrorCode::InvalidArgument, "quaternion controls must have unit norm");
    }
  }
}

inline UnitQuaternion evaluate(const UnitQuaternion& q0, const Increments& incr, double t) {
  // The basis is exactly 0 or 1 at the ends; return the controls untouched.
  if (t == 0.0) return q0;
  if (t == 1.0) return incr.last;
  const auto cum = cumulative_bernstein(incr.logs.size(), t);
  UnitQuaternion q = q0;
  for (std::size_t i = 0; i < incr.logs.size(); ++i) q = q * q_exp(cum[i + 1] * incr.logs[i]);
  return q;
}

}  // namespace qi

/// q(t) = q0 * prod_i exp(log(q_{i-1}^-1 q_i) B~_i(t)). Controls are chained
/// onto the shorter arc, so q(1) equals q_n up to sign (same rotation).
inline UnitQuaternion eval_quaternion_curve(const QuaternionCurve& c, double t) {
  qi::validate(c);
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::InvalidArgument, "t must lie in [0, 1]");
  return qi::evaluate(c.controls.front(), qi::increments(c), t);
}

struct QiCurveSpec {
  Vec3 p0;
  Vec3 v0{1.0, 0.0, 0.0};
  QuaternionCurve qcurve;
  double s_total = 1.0;
};

struct QiFrame {
  Vec3 point;
  Vec3 tangent;
};

struct QiSample {
  double s = 0.0;
  Vec3 point;
  Vec3 tangent;
};

namespace qi {

inline void validate(const QiCurveSpec& spec) {
  validate(spec.qcurve);
  if (!(std::abs(norm(spec.v0) - 1.0) <= 1e-12)) throw Error(ErrorCode::InvalidArgument, "v0 must be a unit vector");
  if (!(spec.s_total > 0.0) || !std::isfinite(spec.s_total)) {
    throw Error(ErrorCode::InvalidArgument, "s_total must be positive");
  }
}

/// Evaluates tangents and integrates them with the increments computed once.
class Integrator {
 public:
  explicit Integrator(const QiCurveSpec& spec) : spec_(spec), incr_((validate(spec), increments(spec.qcurve))) {}

  Vec3 tangent(double s) const {
    const double t = std::clamp(s / spec_.s_total, 0.0, 1.0);
    return rotate(evaluate(spec_.qcurve.controls.front(), incr_, t), spec_.v0);
  }

  Vec3 displacement(double s0, double s1, double tol) const {
    auto f = [&](double u) {
      const Vec3 d = tangent(u);
      return std::array<double, 3>{d.x, d.y, d.z};
    };
    const auto r = integrate_components<3>(f, s0, s1, Tolerance::uniform(tol));
    return {r[0].value, r[1].value, r[2].value};
  }

  void check(double s) const {
    if (!(s >= 0.0 && s <= spec_.s_total)) throw Error(ErrorCode::InvalidArgument, "s must lie in [0, s_total]");
  }

 private:
  const QiCurveSpec& spec_;
  Increments incr_;
};

}  // namespace qi

inline Vec3 qi_point(const QiCurveSpec& spec, double s, double tol = 1e-12) {
  const qi::Integrator in(spec);
  in.check(s);
  return spec.p0 + in.displacement(0.0, s, tol);
}

inline QiFrame qi_frame(const QiCurveSpec& spec, double s, double tol = 1e-12) {
  const qi::Integrator in(spec);
  in.check(s);
  return {spec.p0 + in.displacement(0.0, s, tol), in.tangent(s)};
}

/// n samples at uniform arc-length stations, positions accumulated station
/// to station.
inline std::vector<QiSample> sample_qi(const QiCurveSpec& spec, std::size_t n, double tol = 1e-12) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "sample count must be at least 2");
  const qi::Integrator in(spec);
  std::vector<QiSample> out;
  out.reserve(n);
  Vec3 p = spec.p0;
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = (i + 1 == n) ? spec.s_total : spec.s_total * static_cast<double>(i) / static_cast<double>(n - 1);
    if (i > 0) p = p + in.displacement(prev, s, tol);
    out.push_back({s, p, in.tangent(s)});
    prev = s;
  }
  return out;
}

/// Full turn about z in three steps, tangent starting along x: a unit circle
/// of circumference 2 pi in the xy plane.
inline QiCurveSpec circle_spec(Vec3 p0 = {}) {
  constexpr double two_pi = 6.283185307179586;
  QiCurveSpec spec;
  spec.p0 = p0;
  spec.v0 = {1.0, 0.0, 0.0};
  spec.s_total = two_pi;
  for (int i = 0; i <= 3; ++i) spec.qcurve.controls.push_back(axis_angle({0.0, 0.0, 1.0}, two_pi * i / 3.0));
  return spec;
}

}  // namespace mcurves
