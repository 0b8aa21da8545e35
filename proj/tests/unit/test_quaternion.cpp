#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mcurves/quaternion.hpp"
#include "oracles.hpp"

using namespace mcurves;

namespace {

constexpr double kPi = std::numbers::pi;

UnitQuaternion random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return UnitQuaternion{g(rng), g(rng), g(rng), g(rng)}.normalized();
}

Vec3 random_vector(std::mt19937_64& rng, double max_norm) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec3 v;
  do {
    v = {u(rng), u(rng), u(rng)};
  } while (norm(v) > 1.0 || norm(v) == 0.0);
  return max_norm * v;
}

// Same rotation: q and -q.
double rotation_distance(const UnitQuaternion& a, const UnitQuaternion& b) {
  const double plus = std::hypot(std::hypot(a.w - b.w, a.x - b.x), std::hypot(a.y - b.y, a.z - b.z));
  const double minus = std::hypot(std::hypot(a.w + b.w, a.x + b.x), std::hypot(a.y + b.y, a.z + b.z));
  return std::min(plus, minus);
}

QiCurveSpec random_spec(std::mt19937_64& rng, std::size_t degree) {
  std::uniform_real_distribution<double> len(0.5, 5.0);
  QiCurveSpec spec;
  spec.p0 = random_vector(rng, 3.0);
  Vec3 v = random_vector(rng, 1.0);
  spec.v0 = (1.0 / norm(v)) * v;
  spec.s_total = len(rng);
  for (std::size_t i = 0; i <= degree; ++i) spec.qcurve.controls.push_back(random_unit(rng));
  return spec;
}

TEST(QuaternionAlgebra, ExpOfZeroIsIdentity) {
  EXPECT_EQ(q_exp({0.0, 0.0, 0.0}), (UnitQuaternion{1.0, 0.0, 0.0, 0.0}));
}

TEST(QuaternionAlgebra, LogInvertsExp) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const Vec3 v = random_vector(rng, kPi * 0.999);
    const Vec3 back = q_log(q_exp(v));
    EXPECT_LT(norm(back - v), 1e-12);
  }
}

TEST(QuaternionAlgebra, HalfTurnAboutX) {
  const auto q = q_exp({kPi / 2, 0.0, 0.0});
  EXPECT_NEAR(q.w, 0.0, 1e-16);
  EXPECT_NEAR(q.x, 1.0, 1e-16);
  // Rotation by pi about x: matrix diag(1, -1, -1).
  const Vec3 ex = rotate(q, {1, 0, 0}), ey = rotate(q, {0, 1, 0}), ez = rotate(q, {0, 0, 1});
  EXPECT_LT(norm(ex - Vec3{1, 0, 0}), 1e-15);
  EXPECT_LT(norm(ey - Vec3{0, -1, 0}), 1e-15);
  EXPECT_LT(norm(ez - Vec3{0, 0, -1}), 1e-15);
}

TEST(QuaternionAlgebra, RotateMatchesRotationMatrix) {
  // A quarter turn about z sends x to y.
  const auto q = axis_angle({0, 0, 1}, kPi / 2);
  EXPECT_LT(norm(rotate(q, {1, 0, 0}) - Vec3{0, 1, 0}), 1e-15);
}

TEST(QuaternionAlgebra, AntipodalLogThrows) {
  try {
    q_log({-1.0, 0.0, 0.0, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AntipodalSingularity);
  }
}

TEST(QuaternionAlgebra, ProductsStayUnit) {
  std::mt19937_64 rng(9);
  UnitQuaternion q;
  for (int i = 0; i < 10000; ++i) {
    q = q * random_unit(rng);
    ASSERT_LT(std::abs(q.norm() - 1.0), 1e-12);
  }
}

TEST(CumulativeBasis, EndpointsAndPartitions) {
  for (std::size_t n : {1u, 2u, 3u, 5u}) {
    const auto b0 = qi::cumulative_bernstein(n, 0.0);
    const auto b1 = qi::cumulative_bernstein(n, 1.0);
    for (std::size_t i = 1; i <= n; ++i) {
      EXPECT_EQ(b0[i], 0.0);
      EXPECT_EQ(b1[i], 1.0);
    }
    // sum_i B~_i = n t for i >= 1
    const auto b = qi::cumulative_bernstein(n, 0.3);
    double sum = 0.0;
    for (std::size_t i = 1; i <= n; ++i) sum += b[i];
    EXPECT_NEAR(sum, 0.3 * static_cast<double>(n), 1e-15);
  }
}

TEST(QuaternionCurve, EndpointInterpolation) {
  std::mt19937_64 rng(13);
  for (std::size_t n = 1; n <= 4; ++n) {
    QuaternionCurve c;
    for (std::size_t i = 0; i <= n; ++i) c.controls.push_back(random_unit(rng));
    EXPECT_EQ(eval_quaternion_curve(c, 0.0), c.controls.front());
    const auto end = eval_quaternion_curve(c, 1.0);
    EXPECT_TRUE(end == c.controls.back() || -end == c.controls.back());
  }
}

TEST(QuaternionCurve, DegreeOneIsSlerp) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    QuaternionCurve c{{random_unit(rng), random_unit(rng)}};
    const auto& a = c.controls[0];
    const auto& b = c.controls[1];
    for (double t : {0.0, 0.1, 0.37, 0.5, 0.9, 1.0}) {
      const auto q = eval_quaternion_curve(c, t);
      const auto want = oracle::slerp({a.w, a.x, a.y, a.z}, {b.w, b.x, b.y, b.z}, t);
      EXPECT_LT(rotation_distance(q, {want[0], want[1], want[2], want[3]}), 1e-12);
    }
  }
}

TEST(QuaternionCurve, ConstantControls) {
  const auto q = axis_angle({1, 2, 3}, 0.7);
  QuaternionCurve c{{q, q, q}};
  for (double t : {0.0, 0.25, 0.8, 1.0}) EXPECT_LT(rotation_distance(eval_quaternion_curve(c, t), q), 1e-15);
}

TEST(QuaternionCurve, ReversalForDegreeOne) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    QuaternionCurve c{{random_unit(rng), random_unit(rng)}};
    QuaternionCurve r{{c.controls[1], c.controls[0]}};
    for (double t : {0.0, 0.2, 0.5, 0.77, 1.0}) {
      EXPECT_LT(rotation_distance(eval_quaternion_curve(r, t), eval_quaternion_curve(c, 1.0 - t)), 1e-12);
    }
  }
}

TEST(QuaternionCurve, RejectsBadInput) {
  EXPECT_THROW(eval_quaternion_curve(QuaternionCurve{}, 0.5), Error);
  EXPECT_THROW(eval_quaternion_curve(QuaternionCurve{{{2.0, 0, 0, 0}}}, 0.5), Error);
  EXPECT_THROW(eval_quaternion_curve(QuaternionCurve{{UnitQuaternion{}}}, 1.5), Error);
}

TEST(QiCurve, IdentityIsStraightLine) {
  QiCurveSpec spec;
  spec.p0 = {1.0, -2.0, 0.5};
  spec.v0 = {0.0, 0.6, 0.8};
  spec.s_total = 3.0;
  spec.qcurve.controls = {UnitQuaternion{}, UnitQuaternion{}};
  for (double s : {0.0, 0.5, 3.0}) {
    const Vec3 p = qi_point(spec, s);
    EXPECT_LT(norm(p - (spec.p0 + s * spec.v0)), 1e-12);
  }
}

TEST(QiCurve, CircleCloses) {
  const auto spec = circle_spec({0.5, 0.5, 0.0});
  EXPECT_LT(norm(qi_point(spec, spec.s_total) - spec.p0), 1e-9);
  // Quarter of the way round the unit circle started along +x: (1, 1) offset.
  EXPECT_LT(norm(qi_point(spec, spec.s_total / 4) - (spec.p0 + Vec3{1.0, 1.0, 0.0})), 1e-10);
}

TEST(QiCurve, FrameAtStart) {
  std::mt19937_64 rng(23);
  const auto spec = random_spec(rng, 3);
  const auto f = qi_frame(spec, 0.0);
  EXPECT_EQ(f.point, spec.p0);
  EXPECT_LT(norm(f.tangent - rotate(spec.qcurve.controls[0], spec.v0)), 1e-15);
}

TEST(QiCurve, UnitTangentsAndLipschitz) {
  std::mt19937_64 rng(29);
  const auto spec = random_spec(rng, 4);
  std::uniform_real_distribution<double> u(0.0, spec.s_total);
  for (int i = 0; i < 100; ++i) {
    const double s = u(rng);
    EXPECT_NEAR(norm(qi_frame(spec, s).tangent), 1.0, 1e-12);
  }
  for (int i = 0; i < 20; ++i) {
    const double a = u(rng), b = u(rng);
    EXPECT_LE(norm(qi_point(spec, a) - qi_point(spec, b)), std::abs(a - b) + 1e-12);
  }
}

TEST(QiCurve, FiniteDifferenceMatchesTangent) {
  std::mt19937_64 rng(31);
  for (std::size_t deg = 1; deg <= 4; ++deg) {
    const auto spec = random_spec(rng, deg);
    for (double frac : {0.2, 0.5, 0.8}) {
      const double s = frac * spec.s_total, h = 1e-6;
      const Vec3 fd = (1.0 / (2 * h)) * (qi_point(spec, s + h) - qi_point(spec, s - h));
      EXPECT_LT(norm(fd - qi_frame(spec, s).tangent), 1e-6);
    }
  }
}

TEST(QiCurve, UnitSpeedLength) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 8; ++trial) {
    const auto spec = random_spec(rng, 1 + trial % 4);
    const auto fine = sample_qi(spec, 2001);
    auto station = [&](std::size_t k, std::size_t m) {
      const auto& p = fine[k * (2000 / m)].point;
      return std::array<double, 3>{p.x, p.y, p.z};
    };
    EXPECT_NEAR(oracle::richardson_length(station, 1000), spec.s_total, 1e-9);
  }
}

TEST(QiCurve, RotationInvariance) {
  std::mt19937_64 rng(41);
  const auto spec = random_spec(rng, 3);
  const auto r = axis_angle({0.3, -1.0, 2.0}, 1.1);
  QiCurveSpec rotated = spec;
  rotated.p0 = rotate(r, spec.p0);
  rotated.v0 = rotate(r, spec.v0);
  for (auto& q : rotated.qcurve.controls) q = r * q * r.inverse();
  for (double frac : {0.0, 0.3, 0.7, 1.0}) {
    const double s = frac * spec.s_total;
    EXPECT_LT(norm(qi_point(rotated, s) - rotate(r, qi_point(spec, s))), 1e-10);
  }
}

TEST(QiCurve, SamplesMatchPointwise) {
  std::mt19937_64 rng(43);
  const auto spec = random_spec(rng, 2);
  const auto samples = sample_qi(spec, 11);
  ASSERT_EQ(samples.size(), 11u);
  EXPECT_EQ(samples.back().s, spec.s_total);
  for (const auto& smp : samples) EXPECT_LT(norm(smp.point - qi_point(spec, smp.s)), 1e-11);
}

TEST(QiCurve, RejectsBadSpec) {
  auto spec = circle_spec();
  spec.v0 = {1.0, 1.0, 0.0};
  EXPECT_THROW(qi_point(spec, 1.0), Error);
  spec = circle_spec();
  EXPECT_THROW(qi_point(spec, 7.0), Error);
  spec.s_total = 0.0;
  EXPECT_THROW(qi_point(spec, 0.0), Error);
}

}  // namespace
