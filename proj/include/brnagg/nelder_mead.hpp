#ifndef BRNAGG_NELDER_MEAD_HPP
#define BRNAGG_NELDER_MEAD_HPP

// Box-constrained Nelder-Mead simplex minimisation. Trial points are projected
// onto the box, so vertices may sit exactly on a face; this matters for the
// regret search, whose suprema are often attained at degenerate channels.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>

namespace brnagg {

template <std::size_t N>
struct NelderMeadResult {
  std::array<double, N> x{};
  double value = std::numeric_limits<double>::infinity();
  int iterations = 0;
  int evaluations = 0;
};

struct NelderMeadOptions {
  int max_iterations = 200;
  double ftol = 1e-14;  // stop when the simplex values spread below this
  double xtol = 1e-12;  // ... or when its diameter does
};

/// Minimises f over [lower, upper]^N starting from x0 with per-axis initial
/// steps. A step whose vertex would leave the box is mirrored. f may return
/// +inf for infeasible points.
template <std::size_t N, class F>
NelderMeadResult<N> nelder_mead_box(F&& f, const std::array<double, N>& x0,
                                    const std::array<double, N>& step, double lower,
                                    double upper, const NelderMeadOptions& opt = {}) {
  using Point = std::array<double, N>;
  auto project = [&](Point p) {
    for (double& v : p) v = std::clamp(v, lower, upper);
    return p;
  };

  NelderMeadResult<N> res;
  std::array<Point, N + 1> pts{};
  std::array<double, N + 1> vals{};
  auto eval = [&](const Point& p) {
    ++res.evaluations;
    return f(p);
  };

  pts[0] = project(x0);
  for (std::size_t i = 0; i < N; ++i) {
    Point p = pts[0];
    double v = p[i] + step[i];
    if (v > upper || v < lower) v = p[i] - step[i];
    p[i] = std::clamp(v, lower, upper);
    pts[i + 1] = p;
  }
  for (std::size_t i = 0; i <= N; ++i) vals[i] = eval(pts[i]);

  std::array<std::size_t, N + 1> order{};
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;

  for (res.iterations = 0; res.iterations < opt.max_iterations; ++res.iterations) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[N - 1];

    if (std::isfinite(vals[worst]) && vals[worst] - vals[best] <= opt.ftol) {
      double diam = 0.0;
      for (std::size_t i = 0; i <= N; ++i)
        for (std::size_t k = 0; k < N; ++k) diam = std::max(diam, std::abs(pts[i][k] - pts[best][k]));
      if (diam <= opt.xtol || vals[worst] == vals[best]) break;
    }

    Point centroid{};
    for (std::size_t i = 0; i <= N; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < N; ++k) centroid[k] += pts[i][k] / static_cast<double>(N);
    }
    auto along = [&](double t) {
      Point p;
      for (std::size_t k = 0; k < N; ++k) p[k] = centroid[k] + t * (pts[worst][k] - centroid[k]);
      return project(p);
    };

    const Point reflected = along(-kReflect);
    const double fr = eval(reflected);
    if (fr < vals[best]) {
      const Point expanded = along(-kExpand);
      const double fe = eval(expanded);
      if (fe < fr) {
        pts[worst] = expanded;
        vals[worst] = fe;
      } else {
        pts[worst] = reflected;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = reflected;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const Point contracted = along(outside ? -kContract : kContract);
    const double fc = eval(contracted);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = contracted;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= N; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < N; ++k)
        pts[i][k] = pts[best][k] + kShrink * (pts[i][k] - pts[best][k]);
      vals[i] = eval(pts[i]);
    }
  }

  const auto it = std::min_element(vals.begin(), vals.end());
  res.value = *it;
  res.x = pts[static_cast<std::size_t>(it - vals.begin())];
  return res;
}

}  // namespace brnagg

#endif  // BRNAGG_NELDER_MEAD_HPP
