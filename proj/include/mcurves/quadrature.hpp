#pragma once

// Adaptive Gauss-Kronrod (G7/K15) integration with global bisection.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "mcurves/error.hpp"

namespace mcurves {

struct IntegrationResult {
  double value = 0.0;
  double error_estimate = 0.0;  // absolute
  std::size_t subdivisions = 1;
};

/// Convergence target is max(absolute, relative * |value|), per component.
struct Tolerance {
  double absolute = 1e-14;
  double relative = 1e-12;

  static constexpr Tolerance uniform(double tol) noexcept { return {tol, tol}; }
};

namespace quadrature {

inline constexpr int kMaxDepth = 50;
inline constexpr std::size_t kMaxPanels = 200000;

// Kronrod abscissae on [0, 1]; odd indices are the 7-point Gauss nodes.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.99145537112081263920685469752632852,
    0.94910791234275852452618968404785126,
    0.86486442335976907278971278864092620,
    0.74153118559939443986386477328078841,
    0.58608723546769113029414484569301264,
    0.40584515137739716690660641207696146,
    0.20778495500789846760068940377324491,
    0.00000000000000000000000000000000000,
};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.02293532201052922496373200805896959,
    0.06309209262997855329070066318920429,
    0.10479001032225018383987632254151802,
    0.14065325971552591874518959051023792,
    0.16900472663926790282658342659855028,
    0.19035057806478540991325640242101368,
    0.20443294007529889241416199923464908,
    0.20948214108472782801299917489171427,
};

inline constexpr std::array<double, 4> kGaussWeights = {
    0.12948496616886969327061143267908202,
    0.27970539148927666790146777142377958,
    0.38183005050511894495036977548897513,
    0.41795918367346938775510204081632653,
};

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
struct PanelEstimate {
  Vec<N> kronrod{};
  Vec<N> error{};
  Vec<N> magnitude{};  // K15 applied to |f|, used as the roundoff scale
};

template <std::size_t N, class F>
Vec<N> evaluate_checked(F& f, double x) {
  Vec<N> y;
  if constexpr (N == 1 && std::is_convertible_v<std::invoke_result_t<F&, double>, double>) {
    y[0] = f(x);
  } else {
    y = f(x);
  }
  for (double c : y) {
    if (!std::isfinite(c)) {
      throw Error(ErrorCode::NonFiniteIntegrand,
                  "integrand is not finite at x = " + std::to_string(x));
    }
  }
  return y;
}

template <std::size_t N, class F>
PanelEstimate<N> gauss_kronrod_15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  PanelEstimate<N> out;
  Vec<N> gauss{};

  const Vec<N> fc = evaluate_checked<N>(f, center);
  for (std::size_t c = 0; c < N; ++c) {
    out.kronrod[c] = kKronrodWeights[7] * fc[c];
    out.magnitude[c] = kKronrodWeights[7] * std::abs(fc[c]);
    gauss[c] = kGaussWeights[3] * fc[c];
  }
  for (std::size_t k = 0; k < 7; ++k) {
    const double dx = half * kKronrodNodes[k];
    const Vec<N> lo = evaluate_checked<N>(f, center - dx);
    const Vec<N> hi = evaluate_checked<N>(f, center + dx);
    for (std::size_t c = 0; c < N; ++c) {
      const double sum = lo[c] + hi[c];
      out.kronrod[c] += kKronrodWeights[k] * sum;
      out.magnitude[c] += kKronrodWeights[k] * (std::abs(lo[c]) + std::abs(hi[c]));
      if (k % 2 == 1) gauss[c] += kGaussWeights[k / 2] * sum;
    }
  }
  for (std::size_t c = 0; c < N; ++c) {
    out.kronrod[c] *= half;
    out.magnitude[c] *= std::abs(half);
    out.error[c] = std::abs(out.kronrod[c] - half * gauss[c]);
  }
  return out;
}

template <std::size_t N>
struct Panel {
  double a;
  double b;
  int depth;
  PanelEstimate<N> estimate;
};

template <std::size_t N>
bool at_roundoff_floor(const Panel<N>& p) {
  constexpr double floor_factor = 50.0 * std::numeric_limits<double>::epsilon();
  for (std::size_t c = 0; c < N; ++c) {
    if (p.estimate.error[c] > floor_factor * p.estimate.magnitude[c]) return false;
  }
  return true;
}

}  // namespace quadrature

/// Integrates a function returning N components over [a, b] with one shared
/// subdivision. Optional interior breakpoints seed the initial panels; the
/// result is summed left to right so repeated calls are bit-identical.
template <std::size_t N, class F>
std::array<IntegrationResult, N> integrate_components(F&& f, double a, double b, Tolerance tol,
                                                      std::span<const double> breakpoints = {}) {
  using namespace quadrature;
  if (!(tol.absolute > 0.0) || !(tol.relative >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  }
  if (!std::isfinite(a) || !std::isfinite(b) || a > b) {
    throw Error(ErrorCode::InvalidArgument, "integration bounds must be finite with a <= b");
  }

  std::array<IntegrationResult, N> results{};
  if (a == b) return results;

  std::vector<double> cuts{a};
  for (double x : breakpoints) {
    if (x > cuts.back() && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);

  std::vector<Panel<N>> panels;
  panels.reserve(64);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    panels.push_back({cuts[i], cuts[i + 1], 0, gauss_kronrod_15<N>(f, cuts[i], cuts[i + 1])});
  }

  Vec<N> total{};
  Vec<N> total_error{};
  Vec<N> target{};
  for (;;) {
    total.fill(0.0);
    total_error.fill(0.0);
    for (const auto& p : panels) {
      for (std::size_t c = 0; c < N; ++c) {
        total[c] += p.estimate.kronrod[c];
        total_error[c] += p.estimate.error[c];
      }
    }
    bool converged = true;
    for (std::size_t c = 0; c < N; ++c) {
      target[c] = std::max(tol.absolute, tol.relative * std::abs(total[c]));
      if (total_error[c] > target[c]) converged = false;
    }
    if (converged) break;

    std::size_t worst = panels.size();
    double worst_score = 0.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      if (at_roundoff_floor(panels[i])) continue;
      double score = 0.0;
      for (std::size_t c = 0; c < N; ++c) {
        score = std::max(score, panels[i].estimate.error[c] / target[c]);
      }
      if (score > worst_score) {
        worst_score = score;
        worst = i;
      }
    }
    // Everything left is roundoff; the estimate cannot be improved further.
    if (worst == panels.size()) break;

    const Panel<N> parent = panels[worst];
    if (parent.depth >= kMaxDepth || panels.size() >= kMaxPanels) {
      throw Error(ErrorCode::MaxDepthExceeded,
                  "tolerance unreachable near x = " + std::to_string(0.5 * (parent.a + parent.b)));
    }
    const double mid = 0.5 * (parent.a + parent.b);
    panels[worst] = {parent.a, mid, parent.depth + 1, gauss_kronrod_15<N>(f, parent.a, mid)};
    panels.insert(panels.begin() + static_cast<std::ptrdiff_t>(worst) + 1,
                  Panel<N>{mid, parent.b, parent.depth + 1, gauss_kronrod_15<N>(f, mid, parent.b)});
  }

  for (std::size_t c = 0; c < N; ++c) {
    results[c] = {total[c], total_error[c], panels.size()};
  }
  return results;
}

/// Scalar integration. Meets |value - exact| <= max(tol, tol * |value|)
/// as judged by the summed |G7 - K15| panel estimates.
template <class F>
IntegrationResult integrate(F&& f, double a, double b, double tol = 1e-12) {
  return integrate_components<1>(std::forward<F>(f), a, b, Tolerance::uniform(tol))[0];
}

template <class F>
IntegrationResult integrate(F&& f, double a, double b, Tolerance tol) {
  return integrate_components<1>(std::forward<F>(f), a, b, tol)[0];
}

template <class Fx, class Fy>
std::pair<IntegrationResult, IntegrationResult> integrate_vector2(Fx&& fx, Fy&& fy, double a,
                                                                  double b, double tol = 1e-12) {
  auto both = [&](double t) { return std::array<double, 2>{fx(t), fy(t)}; };
  const auto r = integrate_components<2>(both, a, b, Tolerance::uniform(tol));
  return {r[0], r[1]};
}

}  // namespace mcurves
