#ifndef BRNAGG_REGRET_HPP
#define BRNAGG_REGRET_HPP

// Relative loss of an aggregator and its worst case over conditionally
// independent two-expert binary-signal structures.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "brnagg/aggregators.hpp"
#include "brnagg/belief.hpp"
#include "brnagg/errors.hpp"
#include "brnagg/lower_bound.hpp"
#include "brnagg/nelder_mead.hpp"

namespace brnagg {

// ---------------------------------------------------------------------------
// Relative loss on a fixed structure

namespace detail {

/// Relative loss sum_s Pr[s] (f(x1(s1), x2(s2)) - f*(s))^2 without argument
/// checks. std::nullopt when a positive-probability profile cannot be
/// aggregated.
inline std::optional<double> relative_loss_unchecked(const AggregatorSpec& spec,
                                                     const TwoSignalStructure& t,
                                                     double lambda) noexcept {
  const double mu = t.mu;
  const double w1 = std::pow(mu, lambda);
  const double w0 = std::pow(1.0 - mu, lambda);
  std::array<std::array<double, 2>, 2> report{};  // [expert][signal]
  for (int i = 0; i < 2; ++i) {
    const SignalChannel& c = i == 0 ? t.first : t.second;
    for (Signal s : {Signal::Red, Signal::Blue}) {
      const double p1 = c.likelihood(s, true);
      const double p0 = c.likelihood(s, false);
      report[i][static_cast<int>(s)] =
          w1 * p1 + w0 * p0 > 0.0 ? weighted_posterior(w1, p1, w0, p0)
                                  : std::numeric_limits<double>::quiet_NaN();
    }
  }
  double loss = 0.0;
  for (SignalProfile s : kProfiles) {
    const double a = mu * profile_likelihood(t, s, true);
    const double b = (1.0 - mu) * profile_likelihood(t, s, false);
    const double pr = a + b;
    if (pr == 0.0) continue;
    const double x1 = report[0][static_cast<int>(s.first)];
    const double x2 = report[1][static_cast<int>(s.second)];
    if (!std::isfinite(x1) || !std::isfinite(x2)) return std::nullopt;
    const auto f = try_aggregate(spec, x1, x2);
    if (!f) return std::nullopt;
    const double d = *f - a / pr;
    loss += pr * d * d;
  }
  return loss;
}

}  // namespace detail

/// Expected squared gap between the aggregator applied to the experts' BRN
/// reports and the omniscient posterior. Equals E[(f - w)^2] - E[(f* - w)^2].
inline double relative_loss(const AggregatorSpec& spec, const TwoSignalStructure& theta,
                            double lambda) {
  validate(theta);
  if (auto v = detail::relative_loss_unchecked(spec, theta, lambda)) return *v;
  throw UndefinedAggregation("relative_loss: aggregator undefined on a positive-probability profile");
}

// ---------------------------------------------------------------------------
// General (not conditionally independent) joint structures

/// Joint distribution over (state, s1, s2).
struct JointStructure {
  std::array<double, 8> prob{};

  static constexpr std::size_t index(bool state, SignalProfile s) noexcept {
    return (state ? 4u : 0u) + 2u * static_cast<std::size_t>(s.first) +
           static_cast<std::size_t>(s.second);
  }
  double& at(bool state, SignalProfile s) noexcept { return prob[index(state, s)]; }
  double at(bool state, SignalProfile s) const noexcept { return prob[index(state, s)]; }

  /// Signals uniform and independent; state 1 iff the signals differ.
  static JointStructure xor_fixture() {
    JointStructure j;
    for (SignalProfile s : kProfiles) j.at(s.first != s.second, s) = 0.25;
    return j;
  }
};

inline void validate(const JointStructure& j) {
  double total = 0.0;
  for (double p : j.prob) {
    if (!(p >= 0.0)) throw DomainError("JointStructure: negative or NaN entry");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("JointStructure: entries sum to " + std::to_string(total));
  }
}

/// sum_{w,s} Pr[w,s] ((g(s) - w)^2 - (f*(s) - w)^2) for a forecast g of the
/// signal profile. Zero-probability profiles contribute nothing.
inline double relative_loss_general(const std::function<double(SignalProfile)>& forecast,
                                    const JointStructure& joint) {
  validate(joint);
  double loss = 0.0;
  for (SignalProfile s : kProfiles) {
    const double p0 = joint.at(false, s);
    const double p1 = joint.at(true, s);
    if (p0 + p1 == 0.0) continue;
    const double fstar = p1 / (p0 + p1);
    const double g = forecast(s);
    loss += p0 * (g * g - fstar * fstar) + p1 * ((g - 1.0) * (g - 1.0) - (fstar - 1.0) * (fstar - 1.0));
  }
  return loss;
}

inline double relative_loss_general(double constant_forecast, const JointStructure& joint) {
  return relative_loss_general([constant_forecast](SignalProfile) { return constant_forecast; },
                               joint);
}

// ---------------------------------------------------------------------------
// Worst-case search

struct OptimizerConfig {
  double grid_step = 0.05;     // coarse scan resolution on each of the 5 axes
  int restarts = 32;           // local refinements from the best distinct grid cells
  int local_iters = 200;       // Nelder-Mead iterations per refinement
  double boundary_eps = 1e-9;  // search box is [eps, 1 - eps]^5
  std::uint64_t seed = 20240611;
  std::vector<double> lambda_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  int threads = 0;  // 0: std::thread::hardware_concurrency()
};

inline void validate(const OptimizerConfig& cfg) {
  if (!(cfg.grid_step > 0.0 && cfg.grid_step <= 0.25)) {
    throw RangeError("grid_step must lie in (0, 0.25]");
  }
  if (!(cfg.boundary_eps > 0.0 && cfg.boundary_eps <= 1e-3)) {
    throw RangeError("boundary_eps must lie in (0, 1e-3]");
  }
  if (cfg.restarts < 0) throw RangeError("restarts must be non-negative");
  if (cfg.local_iters < 0) throw RangeError("local_iters must be non-negative");
  if (cfg.threads < 0) throw RangeError("threads must be non-negative");
}

struct RegretResult {
  double value = 0.0;
  TwoSignalStructure witness;
  std::size_t skipped = 0;      // candidates where the aggregator was undefined
  std::size_t evaluations = 0;  // objective evaluations, grid plus refinement
};

namespace detail {

using Params = std::array<double, 5>;  // mu, alpha1, beta1, alpha2, beta2

inline TwoSignalStructure to_structure(const Params& p) noexcept {
  return {p[0], {p[1], p[2]}, {p[3], p[4]}};
}

inline Params to_params(const TwoSignalStructure& t) noexcept {
  return {t.mu, t.first.alpha, t.first.beta, t.second.alpha, t.second.beta};
}

/// Higher value first, then lexicographically smaller parameters.
inline bool better(double va, const Params& a, double vb, const Params& b) noexcept {
  if (va != vb) return va > vb;
  return a < b;
}

inline std::vector<double> axis(double step, double eps) {
  std::vector<double> pts;
  const auto n = static_cast<int>(std::ceil(1.0 / step - 1e-9));
  for (int k = 0; k <= n; ++k) pts.push_back(std::clamp(std::min(1.0, k * step), eps, 1.0 - eps));
  return pts;
}

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

template <class Fn>
void parallel_for(int n_tasks, int n_threads, Fn&& fn) {
  n_threads = std::max(1, std::min(n_threads, n_tasks));
  if (n_threads == 1) {
    for (int i = 0; i < n_tasks; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int w = 0; w < n_threads; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < n_tasks; i += n_threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

struct Candidate {
  double value;
  Params x;
};

/// Bounded list keeping the best `cap` candidates under `better`.
class TopList {
 public:
  explicit TopList(std::size_t cap) : cap_(cap) {}

  void offer(double v, const Params& x) {
    if (items_.size() == cap_ && !better(v, x, items_.front().value, items_.front().x)) return;
    auto worse_first = [](const Candidate& a, const Candidate& b) {
      return better(a.value, a.x, b.value, b.x);
    };
    if (items_.size() == cap_) {
      std::pop_heap(items_.begin(), items_.end(), worse_first);
      items_.pop_back();
    }
    items_.push_back({v, x});
    std::push_heap(items_.begin(), items_.end(), worse_first);
  }

  std::vector<Candidate>& items() { return items_; }

 private:
  std::size_t cap_;
  std::vector<Candidate> items_;  // heap with the worst kept candidate at front
};

}  // namespace detail

/// Worst-case relative loss of `spec` at degree `lambda` over
/// (mu, alpha1, beta1, alpha2, beta2) in [eps, 1-eps]^5.
///
/// A full grid scan (experts ordered to exploit the symmetry of every rule in
/// this library) ranks candidates; Nelder-Mead refines the best well-separated
/// cells. The value is attained at the returned witness, so it is a lower
/// estimate of the supremum. Output does not depend on cfg.threads.
inline RegretResult worst_case_regret(const AggregatorSpec& spec, double lambda,
                                      const OptimizerConfig& cfg = {}) {
  validate(cfg);
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("worst_case_regret: lambda must lie in [0,1]");

  using detail::Params;
  const double eps = cfg.boundary_eps;
  const std::vector<double> ax = detail::axis(cfg.grid_step, eps);
  const int n = static_cast<int>(ax.size());
  const int threads = detail::resolve_threads(cfg.threads);

  // Pool of ranked grid cells from which distinct starts are drawn.
  const std::size_t pool = std::max<std::size_t>(4096, 64u * static_cast<std::size_t>(cfg.restarts));

  struct ScanOut {
    detail::TopList top{0};
    std::size_t skipped = 0;
    std::size_t evals = 0;
  };
  std::vector<ScanOut> scans(static_cast<std::size_t>(n));
  detail::parallel_for(n, threads, [&](int im) {
    ScanOut& out = scans[static_cast<std::size_t>(im)];
    out.top = detail::TopList(pool);
    Params p{};
    p[0] = ax[static_cast<std::size_t>(im)];
    const int pairs = n * n;
    for (int c1 = 0; c1 < pairs; ++c1) {
      p[1] = ax[static_cast<std::size_t>(c1 / n)];
      p[2] = ax[static_cast<std::size_t>(c1 % n)];
      for (int c2 = c1; c2 < pairs; ++c2) {
        p[3] = ax[static_cast<std::size_t>(c2 / n)];
        p[4] = ax[static_cast<std::size_t>(c2 % n)];
        ++out.evals;
        const auto v = detail::relative_loss_unchecked(spec, detail::to_structure(p), lambda);
        if (!v) {
          ++out.skipped;
          continue;
        }
        out.top.offer(*v, p);
      }
    }
  });

  RegretResult result;
  std::vector<detail::Candidate> ranked;
  for (auto& s : scans) {
    result.skipped += s.skipped;
    result.evaluations += s.evals;
    ranked.insert(ranked.end(), s.top.items().begin(), s.top.items().end());
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return detail::better(a.value, a.x, b.value, b.x);
  });

  // Greedy selection of starts at least two cells apart (Chebyshev).
  std::vector<detail::Candidate> starts;
  const double sep = 2.0 * cfg.grid_step + 1e-12;
  for (const auto& c : ranked) {
    if (static_cast<int>(starts.size()) >= cfg.restarts) break;
    bool close = false;
    for (const auto& s : starts) {
      double d = 0.0;
      for (std::size_t k = 0; k < 5; ++k) d = std::max(d, std::abs(c.x[k] - s.x[k]));
      if (d < sep) {
        close = true;
        break;
      }
    }
    if (!close) starts.push_back(c);
  }

  if (!ranked.empty()) {
    result.value = ranked.front().value;
    result.witness = detail::to_structure(ranked.front().x);
  } else {
    result.witness = detail::to_structure({0.5, 0.5, 0.5, 0.5, 0.5});
  }

  // Restarts beyond the distinct grid cells start at seeded random points.
  const int n_starts = cfg.restarts;
  std::vector<detail::Candidate> refined(static_cast<std::size_t>(n_starts),
                                         {-std::numeric_limits<double>::infinity(), Params{}});
  std::vector<std::size_t> local_skipped(static_cast<std::size_t>(n_starts), 0);
  std::vector<std::size_t> local_evals(static_cast<std::size_t>(n_starts), 0);

  detail::parallel_for(n_starts, threads, [&](int r) {
    const auto ri = static_cast<std::size_t>(r);
    std::mt19937_64 rng(cfg.seed ^ (0x9E3779B97F4A7C15ull * (ri + 1)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Params x0{};
    if (ri < starts.size()) {
      x0 = starts[ri].x;
    } else {
      for (double& v : x0) v = std::clamp(unit(rng), eps, 1.0 - eps);
    }
    std::size_t skipped = 0;
    auto objective = [&](const Params& p) {
      const auto v = detail::relative_loss_unchecked(spec, detail::to_structure(p), lambda);
      if (!v) {
        ++skipped;
        return std::numeric_limits<double>::infinity();
      }
      return -*v;
    };

    Params step{};
    for (double& s : step) s = cfg.grid_step * (0.5 + 0.5 * unit(rng)) * (unit(rng) < 0.5 ? -1.0 : 1.0);

    // Restart from the incumbent with a shrinking simplex until the budget is spent.
    int budget = cfg.local_iters;
    detail::Candidate best{-std::numeric_limits<double>::infinity(), x0};
    for (int round = 0; budget > 0 && round < 4; ++round) {
      NelderMeadOptions opt;
      opt.max_iterations = budget;
      const auto nm = nelder_mead_box<5>(objective, best.x, step, eps, 1.0 - eps, opt);
      budget -= std::max(1, nm.iterations);
      local_evals[ri] += static_cast<std::size_t>(nm.evaluations);
      const double v = -nm.value;
      if (detail::better(v, nm.x, best.value, best.x)) best = {v, nm.x};
      for (double& s : step) s *= 0.1;
    }
    refined[ri] = best;
    local_skipped[ri] = skipped;
  });

  for (int r = 0; r < n_starts; ++r) {
    const auto ri = static_cast<std::size_t>(r);
    result.skipped += local_skipped[ri];
    result.evaluations += local_evals[ri];
    const auto& c = refined[ri];
    if (std::isfinite(c.value) &&
        detail::better(c.value, c.x, result.value, detail::to_params(result.witness))) {
      result.value = c.value;
      result.witness = detail::to_structure(c.x);
    }
  }
  // Re-evaluate so the reported value is exactly the loss at the witness.
  if (auto v = detail::relative_loss_unchecked(spec, result.witness, lambda)) result.value = *v;
  return result;
}

}  // namespace brnagg

#endif  // BRNAGG_REGRET_HPP
