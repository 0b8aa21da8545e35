#pragma once

// JSON forms of the reports, Hermite problems/solutions and QI specs, plus
// the drawable-region CSV. Points are [x, y] / [x, y, z] arrays and
// quaternions [w, x, y, z].

#include <string>

#include <json.hpp>

#include "mcurves/analysis.hpp"
#include "mcurves/hermite.hpp"
#include "mcurves/quaternion.hpp"
#include "mcurves/render.hpp"

namespace mcurves {

using json = nlohmann::ordered_json;

namespace io {

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::InvalidArgument, std::string("JSON is missing field '") + key + "'");
  }
  return j.at(key);
}

inline double number(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number()) throw Error(ErrorCode::InvalidArgument, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

template <std::size_t N>
std::array<double, N> numbers(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_array() || v.size() != N) {
    throw Error(ErrorCode::InvalidArgument,
                std::string("field '") + key + "' must be an array of " + std::to_string(N) + " numbers");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    if (!v[i].is_number()) throw Error(ErrorCode::InvalidArgument, std::string("field '") + key + "' must hold numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

}  // namespace io

inline void to_json(json& j, const Point2& p) { j = json::array({p.x, p.y}); }
inline void to_json(json& j, const Vec3& v) { j = json::array({v.x, v.y, v.z}); }
inline void to_json(json& j, const UnitQuaternion& q) { j = json::array({q.w, q.x, q.y, q.z}); }

inline void to_json(json& j, const LcgReport& r) {
  json pts = json::array();
  for (const auto& p : r.points) pts.push_back(json::array({p.u, p.v}));
  j = json{{"slope", r.slope}, {"intercept", r.intercept}, {"rms_residual", r.rms_residual},
           {"dropped", r.dropped}, {"points", std::move(pts)}};
}

inline void to_json(json& j, const MonotonicityReport& r) {
  json v = json::array();
  for (const auto& x : r.violations) v.push_back(json{{"s", x.s}, {"kappa", x.kappa}});
  j = json{{"is_monotone", r.is_monotone}, {"direction", to_string(r.direction)}, {"tolerance", r.tolerance},
           {"violations", std::move(v)}};
}

inline void to_json(json& j, const StressMarker& m) {
  j = json{{"s_at_max_kappa", m.s_at_max_kappa},
           {"kappa_max", m.kappa_max},
           {"s_at_max_kappa_slope", m.s_at_max_kappa_slope},
           {"kappa_slope_max", m.kappa_slope_max}};
}

inline void to_json(json& j, const HermiteProblem& p) {
  j = json{{"p_start", p.p_start}, {"p_end", p.p_end}, {"t_start", p.t_start}, {"t_end", p.t_end}, {"alpha", p.alpha}};
}

inline void from_json(const json& j, HermiteProblem& p) {
  auto pt = [&](const char* k) {
    const auto a = io::numbers<2>(j, k);
    return Point2{a[0], a[1]};
  };
  p.p_start = pt("p_start");
  p.p_end = pt("p_end");
  p.t_start = pt("t_start");
  p.t_end = pt("t_end");
  p.alpha = io::number(j, "alpha");
}

inline void to_json(json& j, const FittedSegment& s) {
  json alts = json::array();
  for (const auto& a : s.alternatives) {
    alts.push_back(json{{"lambda", a.lambda}, {"reversed", a.reversed}, {"residual", a.residual}});
  }
  j = json{{"alpha", s.equation.alpha()},
           {"lambda", s.equation.lambda()},
           {"s_total", s.s_total},
           {"reversed", s.reversed},
           {"residual", s.residual},
           {"delta_theta", s.delta_theta},
           {"psi_target", s.psi_target},
           {"transform",
            json{{"rotation", s.transform.rotation},
                 {"scale", s.transform.scale},
                 {"translation", s.transform.translation},
                 {"mirror", s.transform.mirror}}},
           {"world_lambda", s.world_lambda()},
           {"world_length", s.world_length()},
           {"alternatives", std::move(alts)}};
}

inline void to_json(json& j, const DrawableRegion& r) {
  json samples = json::array();
  for (const auto& s : r.boundary_samples) {
    samples.push_back(json{{"lambda", s.lambda}, {"psi", s.psi}, {"reversed", s.reversed}});
  }
  j = json{{"alpha", r.alpha},
           {"delta_theta", r.delta_theta},
           {"psi_min", r.psi_min},
           {"psi_max", r.psi_max},
           {"boundary_samples", std::move(samples)}};
}

inline void to_json(json& j, const QiCurveSpec& s) {
  j = json{{"p0", s.p0}, {"v0", s.v0}, {"s_total", s.s_total}, {"controls", s.qcurve.controls}};
}

inline void from_json(const json& j, QiCurveSpec& s) {
  const auto p0 = io::numbers<3>(j, "p0");
  const auto v0 = io::numbers<3>(j, "v0");
  s.p0 = {p0[0], p0[1], p0[2]};
  s.v0 = {v0[0], v0[1], v0[2]};
  s.s_total = io::number(j, "s_total");
  const auto& c = io::field(j, "controls");
  if (!c.is_array()) throw Error(ErrorCode::InvalidArgument, "field 'controls' must be an array");
  s.qcurve.controls.clear();
  for (const auto& q : c) {
    if (!q.is_array() || q.size() != 4) throw Error(ErrorCode::InvalidArgument, "controls are [w, x, y, z] arrays");
    s.qcurve.controls.push_back({q[0].get<double>(), q[1].get<double>(), q[2].get<double>(), q[3].get<double>()});
  }
}

/// lambda,psi,reversed rows in scan order (forward orientation first).
inline std::string export_region_csv(const DrawableRegion& r) {
  std::string out = "lambda,psi,reversed\n";
  for (const auto& s : r.boundary_samples) out += fmt(s.lambda) + "," + fmt(s.psi) + "," + (s.reversed ? "1" : "0") + "\n";
  return out;
}

}  // namespace mcurves
