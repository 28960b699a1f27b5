#ifndef BRNAGG_CURVE_HPP
#define BRNAGG_CURVE_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "brnagg/aggregators.hpp"
#include "brnagg/errors.hpp"
#include "brnagg/lower_bound.hpp"
#include "brnagg/regret.hpp"

namespace brnagg {

/// Regret per degree on a strictly increasing lambda grid.
struct RegretCurve {
  std::vector<double> lambdas;
  std::vector<double> values;
  std::vector<TwoSignalStructure> witnesses;  // empty for analytic curves
  std::vector<std::size_t> skipped;           // per point, optimizer diagnostics
};

inline void validate_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw RangeError("lambda grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw RangeError("lambda grid must be strictly increasing");
  }
}

inline RegretCurve regret_curve(const AggregatorSpec& spec, const OptimizerConfig& cfg = {}) {
  validate_grid(cfg.lambda_grid);
  RegretCurve curve;
  for (double lambda : cfg.lambda_grid) {
    const RegretResult r = worst_case_regret(spec, lambda, cfg);
    curve.lambdas.push_back(lambda);
    curve.values.push_back(r.value);
    curve.witnesses.push_back(r.witness);
    curve.skipped.push_back(r.skipped);
  }
  return curve;
}

inline RegretCurve lower_bound_curve(const std::vector<double>& grid, double eps = 1e-6) {
  validate_grid(grid);
  RegretCurve curve;
  for (double lambda : grid) {
    curve.lambdas.push_back(lambda);
    curve.values.push_back(lower_bound(lambda, eps).value);
  }
  return curve;
}

struct OverallRegret {
  double value = 0.0;
  double lambda = 0.0;  // grid point attaining the maximum gap
  RegretCurve curve;
  std::vector<double> bounds;
};

/// max over the grid of R_lambda(f) - lb(lambda); an upper estimate of the
/// overall regret because lb undercuts the optimal per-degree regret.
inline OverallRegret overall_regret_from_curve(RegretCurve curve, double lb_eps = 1e-6) {
  if (curve.lambdas.empty()) throw RangeError("overall regret needs a non-empty curve");
  OverallRegret out;
  out.value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curve.lambdas.size(); ++i) {
    const double lb = lower_bound(curve.lambdas[i], lb_eps).value;
    out.bounds.push_back(lb);
    if (curve.values[i] - lb > out.value) {
      out.value = curve.values[i] - lb;
      out.lambda = curve.lambdas[i];
    }
  }
  out.curve = std::move(curve);
  return out;
}

inline OverallRegret overall_regret_upper(const AggregatorSpec& spec, const OptimizerConfig& cfg = {},
                                          double lb_eps = 1e-6) {
  return overall_regret_from_curve(regret_curve(spec, cfg), lb_eps);
}

struct TroughReport {
  bool single_troughed = false;
  std::size_t trough = 0;  // index of the minimum value
  // First offending step (i -> i+1) when the check fails.
  std::optional<std::size_t> violation;
  double violation_size = 0.0;
};

/// True iff some split point m makes the values non-increasing up to m and
/// non-decreasing after it, each step allowed to go the wrong way by `tol`.
inline TroughReport single_trough_check(const std::vector<double>& values, double tol) {
  if (values.size() < 3) throw RangeError("single_trough_check needs at least 3 points");
  const std::size_t n = values.size();
  TroughReport rep;
  rep.trough = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());

  auto rise = [&](std::size_t i) { return values[i + 1] - values[i]; };
  // prefix_ok[m]: steps 0..m-1 all descend within tol.
  std::vector<bool> prefix_ok(n, true);
  for (std::size_t i = 1; i < n; ++i) prefix_ok[i] = prefix_ok[i - 1] && rise(i - 1) <= tol;
  std::vector<bool> suffix_ok(n, true);
  for (std::size_t i = n - 1; i-- > 0;) suffix_ok[i] = suffix_ok[i + 1] && -rise(i) <= tol;

  for (std::size_t m = 0; m < n; ++m) {
    if (prefix_ok[m] && suffix_ok[m]) {
      rep.single_troughed = true;
      return rep;
    }
  }
  // Report the first wrong-way step after the longest valid descent.
  std::size_t m = 0;
  while (m + 1 < n && prefix_ok[m + 1]) ++m;
  for (std::size_t i = m; i + 1 < n; ++i) {
    if (-rise(i) > tol) {
      rep.violation = i;
      rep.violation_size = -rise(i);
      break;
    }
  }
  return rep;
}

inline TroughReport single_trough_check(const RegretCurve& curve, double tol) {
  return single_trough_check(curve.values, tol);
}

}  // namespace brnagg

#endif  // BRNAGG_CURVE_HPP
