#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mcurves/analysis.hpp"
#include "oracles.hpp"

using namespace mcurves;

namespace {

double default_s_end(const NaturalEquation& eq) {
  return eq.alpha() < 0.0 ? 0.9 * eq.s_max_domain() : 3.0 / eq.lambda();
}

TEST(LcgAnalytic, InvolutesHaveSlopeTwo) {
  const NaturalEquation eq(2.0, 1.0);
  const auto r = lcg_analytic(eq, 0.0, 10.0, 200);
  EXPECT_NEAR(r.slope, 2.0, 1e-6);
  EXPECT_LT(r.rms_residual, 1e-9);
  EXPECT_EQ(r.points.size(), 200u);
}

TEST(LcgAnalytic, LogSpiralIsIdentityLine) {
  const auto r = lcg_analytic(NaturalEquation(1.0, 1.0), 0.0, 5.0, 100);
  EXPECT_NEAR(r.slope, 1.0, 1e-9);
  EXPECT_NEAR(r.intercept, 0.0, 1e-9);
  for (const auto& p : r.points) EXPECT_NEAR(p.u, p.v, 1e-9);
}

TEST(LcgAnalytic, CircleIsDegenerate) {
  try {
    lcg_analytic([](double) { return 1.0; }, [](double) { return 0.0; }, 0.0, 1.0, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateLcg);
  }
}

TEST(LcgAnalytic, SlopeAndInterceptRecovery) {
  for (double a : {-1.0, 0.0, 0.5, 1.0, 2.0, 10.0}) {
    for (double l : {0.3, 1.0, 3.0}) {
      const NaturalEquation eq(a, l);
      const auto r = lcg_analytic(eq, 0.0, default_s_end(eq), 500);
      EXPECT_NEAR(r.slope, a, 1e-6) << a << " " << l;
      EXPECT_NEAR(r.intercept, -std::log(l), 1e-6) << a << " " << l;
    }
  }
}

TEST(LcgFromSamples, NielsenAndEuler) {
  {
    const auto c = sample_curve(NaturalEquation(0.0, 1.0), 4.0, 2000);
    EXPECT_NEAR(lcg_from_samples(c).slope, 0.0, 1e-3);
  }
  {
    const auto c = sample_curve(NaturalEquation(-1.0, 0.3), 2.0, 2000);
    EXPECT_NEAR(lcg_from_samples(c).slope, -1.0, 1e-3);
  }
}

TEST(LcgFromSamples, SlopeRecoveryGrid) {
  for (double a : {-1.0, 0.0, 0.5, 1.0, 2.0, 10.0}) {
    for (double l : {0.3, 1.0, 3.0}) {
      const NaturalEquation eq(a, l);
      const auto c = sample_curve(eq, default_s_end(eq), 2000);
      const auto r = lcg_from_samples(c);
      EXPECT_NEAR(r.slope, a, 1e-3) << a << " " << l;
      EXPECT_EQ(r.dropped, 0u);
    }
  }
}

TEST(LcgFromSamples, ExactCircleIsDegenerate) {
  std::vector<double> s, k;
  for (int i = 0; i < 50; ++i) {
    s.push_back(0.1 * i);
    k.push_back(2.0);
  }
  try {
    lcg_from_samples(s, k);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateLcg);
  }
}

TEST(LcgFromSamples, NoisyCircleNeverCrashes) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 1e-3);
  std::vector<double> s, k;
  for (int i = 0; i < 300; ++i) {
    s.push_back(0.01 * i);
    k.push_back(1.0 + noise(rng));
  }
  try {
    const auto r = lcg_from_samples(s, k);
    EXPECT_GT(r.rms_residual, 0.1);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateLcg);
  }
}

TEST(LcgFromSamples, ScaleCovariance) {
  const NaturalEquation eq(0.5, 1.0);
  const auto c = sample_curve(eq, 3.0, 1000);
  std::vector<double> s, k;
  for (const auto& p : c.samples) {
    s.push_back(p.s);
    k.push_back(p.kappa);
  }
  const auto base = lcg_from_samples(s, k);
  for (double f : {0.01, 7.0, 300.0}) {
    std::vector<double> ss, kk;
    for (std::size_t i = 0; i < s.size(); ++i) {
      ss.push_back(f * s[i]);
      kk.push_back(k[i] / f);
    }
    const auto scaled = lcg_from_samples(ss, kk);
    EXPECT_NEAR(scaled.slope, base.slope, 1e-6);
    // v' = v + log f, u' = u + log f  =>  b' = b + (1 - slope) log f
    EXPECT_NEAR(scaled.intercept, base.intercept + (1.0 - base.slope) * std::log(f), 1e-6);
  }
}

TEST(LcgFromSamples, Preconditions) {
  std::vector<double> s{0, 1, 2, 3};
  std::vector<double> k{1, 0.9, 0.8, 0.7};
  EXPECT_THROW(lcg_from_samples(s, k), Error);
  std::vector<double> s5{0, 1, 2, 3, 4};
  std::vector<double> k5{1, 0.9, -0.8, 0.7, 0.6};
  EXPECT_THROW(lcg_from_samples(s5, k5), Error);
}

TEST(LogSpiralIdentity, RadiusIsExponentialOfTurning) {
  for (double l : {0.3, 1.0, 3.0}) {
    const NaturalEquation eq(1.0, l);
    for (int i = 0; i <= 200; ++i) {
      const double s = 20.0 * i / 200.0;
      const double rho = 1.0 / curvature(eq, s);
      const double expected = std::exp(l * turning_angle(eq, s));
      EXPECT_NEAR(rho / expected, 1.0, 1e-8);
    }
  }
}

TEST(CheckMonotone, FamilyIsDecreasing) {
  for (double a : {-1.0, 0.0, 0.5, 1.0, 2.0, 10.0}) {
    const NaturalEquation eq(a, 1.0);
    const auto r = check_monotone(sample_curve(eq, default_s_end(eq), 500));
    EXPECT_TRUE(r.is_monotone);
    EXPECT_EQ(r.direction, Direction::Decreasing) << a;
    EXPECT_TRUE(r.violations.empty());
  }
}

TEST(CheckMonotone, Constant) {
  std::vector<double> s{0, 1, 2, 3}, k{1, 1, 1, 1};
  const auto r = check_monotone(s, k);
  EXPECT_TRUE(r.is_monotone);
  EXPECT_EQ(r.direction, Direction::Constant);
}

TEST(CheckMonotone, SineIsNonMonotone) {
  std::vector<double> s, k;
  for (int i = 0; i <= 400; ++i) {
    s.push_back(2 * std::numbers::pi * i / 400.0);
    k.push_back(std::sin(s.back()));
  }
  const auto r = check_monotone(s, k);
  EXPECT_FALSE(r.is_monotone);
  EXPECT_EQ(r.direction, Direction::NonMonotone);
  ASSERT_FALSE(r.violations.empty());
  EXPECT_NEAR(r.violations.front().s, std::numbers::pi / 2, 0.05);
}

TEST(CheckMonotone, AgreesWithPairwiseBruteForce) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> len(2, 100);
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = len(rng);
    const int shape = kind(rng);
    std::vector<double> s(n), k(n);
    double level = u(rng);
    for (int i = 0; i < n; ++i) {
      s[i] = i;
      switch (shape) {
        case 0: level -= std::abs(u(rng)) * 1e-3; break;             // decreasing
        case 1: level += std::abs(u(rng)) * 1e-3; break;             // increasing
        case 2: level += u(rng) * 1e-14; break;                      // flat within noise
        default: level += u(rng) * (i % 7 == 0 ? 1e-2 : 1e-4); break;  // mixed
      }
      k[i] = level;
    }
    const double tol = (trial % 2 == 0) ? 1e-12 : 5e-4;
    const auto r = check_monotone(s, k, tol);
    const auto expected = oracle::classify_pairwise(k, tol);
    const Direction want = expected == oracle::Trend::Decreasing   ? Direction::Decreasing
                           : expected == oracle::Trend::Increasing ? Direction::Increasing
                           : expected == oracle::Trend::Constant   ? Direction::Constant
                                                                   : Direction::NonMonotone;
    ASSERT_EQ(r.direction, want) << "trial " << trial;
    ASSERT_EQ(r.is_monotone, want != Direction::NonMonotone);
  }
}

TEST(StressMarker, DecreasingCurvatureMaxAtStart) {
  const auto m = stress_marker(sample_curve(NaturalEquation(2.0, 1.0), 5.0, 200));
  EXPECT_EQ(m.s_at_max_kappa, 0.0);
  EXPECT_EQ(m.kappa_max, 1.0);
}

TEST(StressMarker, EulerSlopeTieResolvesToStart) {
  const auto m = stress_marker(sample_curve(NaturalEquation(-1.0, 0.5), 1.9, 400));
  EXPECT_NEAR(m.kappa_slope_max, 0.5, 1e-9);
  EXPECT_EQ(m.s_at_max_kappa_slope, 0.0);
}

TEST(StressMarker, BumpApex) {
  std::vector<double> s, k;
  for (int i = 0; i <= 100; ++i) {
    s.push_back(i * 0.05);
    k.push_back(std::exp(-(s.back() - 2.5) * (s.back() - 2.5)));
  }
  const auto m = stress_marker(s, k);
  EXPECT_NEAR(m.s_at_max_kappa, 2.5, 1e-12);
  EXPECT_GE(m.s_at_max_kappa_slope, s.front());
  EXPECT_LE(m.s_at_max_kappa_slope, s.back());
}

}  // namespace
