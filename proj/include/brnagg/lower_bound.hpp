#ifndef BRNAGG_LOWER_BOUND_HPP
#define BRNAGG_LOWER_BOUND_HPP

// Analytic lower bound on the regret of any aggregator at degree lambda.
//
// Two structures, each with probability 1/2, make a red signal yield the report
// 1/2 for both experts while the omniscient posterior on (r, r) differs:
//
//   structure 1: mu = g,     Pr[r|1] = 1,            Pr[r|0] = (g/(1-g))^lambda
//   structure 2: mu = 1 - g, Pr[r|1] = (g/(1-g))^lambda, Pr[r|0] = 1
//
// The loss forced on (r, r) is g * phi(y) with y = (g/(1-g))^(2 lambda - 1) and
// phi(y) = (1+y)(1/2 - 1/(1+y))^2 = (y-1)^2 / (4(1+y)). The bound maximises this
// over g in (0, 1/2).

#include <cmath>

#include "brnagg/belief.hpp"
#include "brnagg/errors.hpp"

namespace brnagg {

inline double lower_bound_phi(double y) noexcept { return (y - 1.0) * (y - 1.0) / (4.0 * (1.0 + y)); }

/// g * phi(y(g, lambda)).
inline double lower_bound_objective(double gamma, double lambda) noexcept {
  const double y = std::pow(gamma / (1.0 - gamma), 2.0 * lambda - 1.0);
  return gamma * lower_bound_phi(y);
}

/// Structure 1 (which = 0) or 2 (which = 1) of the construction above.
inline TwoSignalStructure lower_bound_instance(double gamma, double lambda, int which) {
  if (!(gamma > 0.0 && gamma < 0.5)) throw DomainError("lower_bound_instance: gamma must lie in (0, 1/2)");
  const double q = std::pow(gamma / (1.0 - gamma), lambda);
  if (which == 0) return {gamma, {1.0, q}, {1.0, q}};
  return {1.0 - gamma, {q, 1.0}, {q, 1.0}};
}

struct LowerBound {
  double value = 0.0;
  double gamma = 0.0;
};

/// Maximises the construction's loss over gamma in [eps, 1/2 - eps]: a dense
/// log-spaced scan followed by golden-section refinement of the best bracket.
inline LowerBound lower_bound(double lambda, double eps = 1e-6) {
  if (!(eps > 0.0 && eps < 0.25)) throw DomainError("lower_bound: eps must lie in (0, 1/4)");
  const double lo = eps;
  const double hi = 0.5 - eps;
  constexpr int kScan = 4000;

  const double log_lo = std::log(lo);
  const double log_hi = std::log(hi);
  auto node = [&](int k) {
    if (k <= 0) return lo;
    if (k >= kScan) return hi;
    return std::exp(log_lo + (log_hi - log_lo) * k / kScan);
  };

  int best_k = 0;
  double best = lower_bound_objective(lo, lambda);
  for (int k = 1; k <= kScan; ++k) {
    const double v = lower_bound_objective(node(k), lambda);
    if (v > best) {
      best = v;
      best_k = k;
    }
  }

  double a = node(best_k - 1);
  double b = node(best_k + 1);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = lower_bound_objective(c, lambda);
  double fd = lower_bound_objective(d, lambda);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * (1.0 + b); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = lower_bound_objective(c, lambda);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = lower_bound_objective(d, lambda);
    }
  }
  LowerBound out{best, node(best_k)};
  for (double g : {c, d}) {
    const double v = lower_bound_objective(g, lambda);
    if (v > out.value) out = {v, g};
  }
  return out;
}

}  // namespace brnagg

#endif  // BRNAGG_LOWER_BOUND_HPP
