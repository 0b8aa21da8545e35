#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "mcurves/pseudospiral.hpp"
#include "oracles.hpp"

using namespace mcurves;

namespace {

double in_domain_s(const NaturalEquation& eq, double fraction, double cap) {
  const double top = std::isfinite(eq.s_max_domain()) ? 0.999 * eq.s_max_domain() : cap;
  return fraction * std::min(top, cap);
}

TEST(NaturalEquation, DomainAndValidation) {
  EXPECT_EQ(NaturalEquation(-1.0, 1.0).s_max_domain(), 1.0);
  EXPECT_EQ(NaturalEquation(-0.5, 4.0).s_max_domain(), 0.5);
  EXPECT_TRUE(std::isinf(NaturalEquation(0.0, 2.0).s_max_domain()));
  EXPECT_TRUE(std::isinf(NaturalEquation(3.0, 2.0).s_max_domain()));
  EXPECT_THROW(NaturalEquation(1.0, 0.0), Error);
  EXPECT_THROW(NaturalEquation(1.0, -2.0), Error);
  EXPECT_THROW(NaturalEquation(std::nan(""), 1.0), Error);
}

TEST(NaturalEquation, BranchSnapping) {
  EXPECT_EQ(NaturalEquation(1e-13, 1.0).branch(), Branch::Exponential);
  EXPECT_EQ(NaturalEquation(1.0 - 1e-13, 1.0).branch(), Branch::Logarithmic);
  EXPECT_EQ(NaturalEquation(1e-6, 1.0).branch(), Branch::Power);
  // Near-branch values agree with the snapped closed forms.
  EXPECT_NEAR(turning_angle(NaturalEquation(1e-9, 1.3), 2.0),
              turning_angle(NaturalEquation(0.0, 1.3), 2.0), 1e-8);
  EXPECT_NEAR(turning_angle(NaturalEquation(1.0 + 1e-9, 1.3), 2.0),
              turning_angle(NaturalEquation(1.0, 1.3), 2.0), 1e-8);
}

TEST(Curvature, Examples) {
  EXPECT_EQ(curvature(NaturalEquation(0.0, 1.0), 0.0), 1.0);
  EXPECT_NEAR(curvature(NaturalEquation(-1.0, 0.25), 2.0), 0.5, 1e-15);
  EXPECT_NEAR(curvature(NaturalEquation(2.0, 1.0), 3.0), 0.377964473009227227, 1e-15);
  for (double a : {-2.0, -1.0, 0.0, 0.5, 1.0, 2.0, 10.0}) {
    EXPECT_EQ(curvature(NaturalEquation(a, 0.7), 0.0), 1.0) << a;
  }
}

TEST(Curvature, DomainExceeded) {
  const NaturalEquation euler(-1.0, 1.0);
  for (double s : {1.0, 1.5, -0.1}) {
    try {
      curvature(euler, s);
      FAIL() << "expected DomainExceeded at s=" << s;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::DomainExceeded);
    }
  }
  EXPECT_NO_THROW(curvature(euler, 0.999));
}

TEST(TurningAngle, Examples) {
  for (double a : {-1.0, 0.0, 1.0, 3.0}) EXPECT_EQ(turning_angle(NaturalEquation(a, 2.0), 0.0), 0.0);
  EXPECT_NEAR(turning_angle(NaturalEquation(1.0, 1.0), std::numbers::e - 1.0), 1.0, 1e-15);
  EXPECT_NEAR(turning_angle(NaturalEquation(-1.0, 0.1), 2.0), 1.8, 1e-14);
}

TEST(TurningAngle, MatchesQuadratureOfCurvature) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> alpha(-2.0, 10.0), lambda(0.1, 5.0), frac(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const NaturalEquation eq(alpha(rng), lambda(rng));
    const double s = in_domain_s(eq, frac(rng), 20.0);
    const double numeric = integrate([&](double t) { return curvature(eq, t); }, 0.0, s, 1e-13).value;
    EXPECT_NEAR(turning_angle(eq, s), numeric, 1e-10) << eq.alpha() << " " << eq.lambda() << " " << s;
  }
}

TEST(TurningAngle, DerivativeIsCurvature) {
  const double h = 1e-6;
  for (double a : {-1.0, -0.4, 0.0, 0.5, 1.0, 2.0, 10.0}) {
    const NaturalEquation eq(a, 0.8);
    for (double s : {0.1, 0.5, 1.0}) {
      const double fd = (turning_angle(eq, s + h) - turning_angle(eq, s - h)) / (2 * h);
      const double k = curvature(eq, s);
      EXPECT_NEAR(fd, k, 1e-6 * k) << a << " " << s;
    }
  }
}

TEST(Curvature, StrictlyDecreasing) {
  for (double a : {-1.0, 0.0, 0.5, 1.0, 2.0, 10.0}) {
    const NaturalEquation eq(a, 1.0);
    const double end = in_domain_s(eq, 1.0, 30.0);
    double prev = curvature(eq, 0.0);
    for (int i = 1; i <= 5000; ++i) {
      const double k = curvature(eq, end * i / 5000.0);
      ASSERT_LT(k, prev) << "alpha " << a << " sample " << i;
      prev = k;
    }
    EXPECT_LT(curvature_derivative(eq, 0.5 * end), 0.0);
  }
}

TEST(Curvature, EulerIsAffine) {
  const NaturalEquation eq(-1.0, 0.3);
  const double s0 = 0.0, s1 = 3.0;
  const double k0 = curvature(eq, s0), k1 = curvature(eq, s1);
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double s = 3.2 * i / 1000.0;
    const double line = k0 + (k1 - k0) * (s - s0) / (s1 - s0);
    worst = std::max(worst, std::abs(curvature(eq, s) - line));
  }
  EXPECT_LT(worst, 1e-14);
}

TEST(TurningAngle, NielsenBoundedByInverseLambda) {
  const NaturalEquation eq(0.0, 2.0);
  EXPECT_DOUBLE_EQ(turning_limit(eq), 0.5);
  const double th = turning_angle(eq, 1e6);
  EXPECT_GE(th, 0.999999 / 2.0);
  EXPECT_LE(th, 0.5);
}

TEST(ArcLengthAtTurning, InvertsTurningAngle) {
  for (double a : {-1.0, 0.0, 0.3, 1.0, 2.5}) {
    const NaturalEquation eq(a, 0.9);
    const double s = in_domain_s(eq, 0.6, 4.0);
    EXPECT_NEAR(arc_length_at_turning(eq, turning_angle(eq, s)), s, 1e-12 * (1 + s)) << a;
  }
  EXPECT_LT(arc_length_at_turning(NaturalEquation(0.0, 2.0), 1.0), 0.0);
  EXPECT_LT(arc_length_at_turning(NaturalEquation(-1.0, 1.0), 0.5 + 1e-9), 0.0);
}

TEST(EvaluatePoint, Origin) {
  const auto p = evaluate_point(NaturalEquation(2.0, 1.0), 0.0);
  EXPECT_EQ(p.x, 0.0);
  EXPECT_EQ(p.y, 0.0);
}

TEST(EvaluatePoint, SmallArcTaylor) {
  const auto p = evaluate_point(NaturalEquation(2.0, 1.0), 1e-4);
  EXPECT_NEAR(p.x, 1e-4, 1e-6);
  EXPECT_NEAR(p.y, 5e-9, 5e-11);
}

TEST(EvaluatePoint, LogarithmicSpiralClosedForm) {
  const NaturalEquation eq(1.0, 1.0);
  const auto p = evaluate_point(eq, 5.0);
  const auto q = oracle::log_spiral_point(1.0, turning_angle(eq, 5.0));
  EXPECT_NEAR(p.x, q[0], 1e-8);
  EXPECT_NEAR(p.y, q[1], 1e-8);
  for (double lam : {0.3, 2.0}) {
    const NaturalEquation e2(1.0, lam);
    for (double s : {0.5, 3.0, 40.0}) {
      const auto a = evaluate_point(e2, s);
      const auto b = oracle::log_spiral_point(lam, turning_angle(e2, s));
      EXPECT_NEAR(a.x, b[0], 1e-8 * (1 + std::abs(b[0])));
      EXPECT_NEAR(a.y, b[1], 1e-8 * (1 + std::abs(b[1])));
    }
  }
}

TEST(EvaluatePoint, EulerAgainstDirectArcLengthIntegral) {
  // Direct integration of (cos theta(s), sin theta(s)) in arc length.
  const NaturalEquation eq(-1.0, 0.3);
  const double s = 2.5;
  auto th = [](double t) { return t - 0.15 * t * t; };
  const double x = oracle::simpson([&](double t) { return std::cos(th(t)); }, 0.0, s);
  const double y = oracle::simpson([&](double t) { return std::sin(th(t)); }, 0.0, s);
  const auto p = evaluate_point(eq, s);
  EXPECT_NEAR(p.x, x, 1e-10);
  EXPECT_NEAR(p.y, y, 1e-10);
}

TEST(EvaluatePoint, UnitSpeed) {
  const double h = 1e-6;
  for (double a : {-1.0, 0.0, 0.5, 1.0, 2.0, 10.0}) {
    const NaturalEquation eq(a, 1.0);
    for (double s : {0.2, 0.7}) {
      const auto p = evaluate_point(eq, s + h);
      const auto m = evaluate_point(eq, s - h);
      const double speed = std::hypot(p.x - m.x, p.y - m.y) / (2 * h);
      EXPECT_NEAR(speed, 1.0, 1e-6) << a;
    }
  }
}

TEST(EvaluatePoint, HugeArcLengthStaysFinite) {
  // alpha = 1 with large lambda: arc length is e^(lambda theta) / lambda.
  const NaturalEquation eq(1.0, 200.0);
  const double s = arc_length_at_turning(eq, 3.0);
  ASSERT_GT(s, 1e250);
  const auto p = evaluate_point(eq, s);
  const auto q = oracle::log_spiral_point(200.0, 3.0);
  EXPECT_NEAR(p.x / q[0], 1.0, 1e-9);
  EXPECT_NEAR(p.y / q[1], 1.0, 1e-9);
}

TEST(SampleCurve, EndpointsOnly) {
  const NaturalEquation eq(0.5, 1.0);
  const Pose pose{2.0, -1.0, 0.3};
  const auto c = sample_curve(eq, 1.7, 2, pose);
  ASSERT_EQ(c.samples.size(), 2u);
  EXPECT_EQ(c.samples[0].s, 0.0);
  EXPECT_EQ(c.samples[0].x, 2.0);
  EXPECT_EQ(c.samples[0].y, -1.0);
  EXPECT_EQ(c.samples[0].theta, 0.3);
  EXPECT_EQ(c.samples[1].s, 1.7);
  const auto end = evaluate_point(eq, 1.7);
  const double cx = std::cos(0.3), sx = std::sin(0.3);
  EXPECT_NEAR(c.samples[1].x, 2.0 + cx * end.x - sx * end.y, 1e-12);
  EXPECT_NEAR(c.samples[1].y, -1.0 + sx * end.x + cx * end.y, 1e-12);
}

double polyline_length(const SampledCurve& c) {
  double len = 0.0;
  for (std::size_t i = 1; i < c.samples.size(); ++i) {
    len += std::hypot(c.samples[i].x - c.samples[i - 1].x, c.samples[i].y - c.samples[i - 1].y);
  }
  return len;
}

TEST(SampleCurve, PolylineShorterThanArc) {
  const NaturalEquation eq(-1.0, 0.4);
  const double s_end = 2.0;
  const auto coarse = sample_curve(eq, s_end, 10);
  const auto fine = sample_curve(eq, s_end, 10000);
  EXPECT_LT(polyline_length(coarse), polyline_length(fine));
  EXPECT_LE(polyline_length(fine), s_end);
  EXPECT_NEAR(polyline_length(fine), s_end, 1e-6);
  for (std::size_t i = 1; i < coarse.samples.size(); ++i) {
    const auto& a = coarse.samples[i - 1];
    const auto& b = coarse.samples[i];
    EXPECT_LT(a.s, b.s);
    EXPECT_LE(std::hypot(b.x - a.x, b.y - a.y), b.s - a.s + 1e-15);
  }
}

TEST(SampleCurve, IncrementalMatchesDirect) {
  const NaturalEquation eq(2.0, 0.7);
  const auto c = sample_curve(eq, 5.0, 101);
  for (std::size_t i : {std::size_t{17}, std::size_t{64}, std::size_t{100}}) {
    const auto p = evaluate_point(eq, c.samples[i].s);
    EXPECT_NEAR(c.samples[i].x, p.x, 1e-11);
    EXPECT_NEAR(c.samples[i].y, p.y, 1e-11);
  }
}

TEST(SampleCurve, QuasiCircleFitsCircle) {
  const auto c = sample_curve(named_curve(NamedCurve::QuasiCircle, 1.0), 1.0, 1000);
  std::vector<std::array<double, 2>> pts;
  for (const auto& s : c.samples) pts.push_back({s.x, s.y});
  const auto circle = oracle::fit_circle(pts);
  EXPECT_LT(circle.max_deviation, 0.02 * circle.r);
}

TEST(SampleCurve, Errors) {
  const NaturalEquation euler(-1.0, 1.0);
  EXPECT_THROW(sample_curve(euler, 0.5, 1), Error);
  try {
    sample_curve(euler, 1.2, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DomainExceeded);
  }
}

TEST(NamedCurve, Mapping) {
  const auto euler = named_curve("euler", 1.0);
  EXPECT_EQ(euler.alpha(), -1.0);
  EXPECT_EQ(euler.s_max_domain(), 1.0);
  const auto nielsen = named_curve("nielsen", 2.0);
  EXPECT_EQ(nielsen.alpha(), 0.0);
  EXPECT_TRUE(std::isinf(nielsen.s_max_domain()));
  EXPECT_EQ(named_curve("involute", 1.0).alpha(), 2.0);
  EXPECT_EQ(named_curve("log_spiral", 1.0).alpha(), 1.0);
  EXPECT_EQ(named_curve("quasi_circle", 1.0).alpha(), 10.0);
  try {
    named_curve("cornu", 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownName);
  }
  EXPECT_THROW(named_curve("euler", 0.0), Error);
}

}  // namespace
