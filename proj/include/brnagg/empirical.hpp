#ifndef BRNAGG_EMPIRICAL_HPP
#define BRNAGG_EMPIRICAL_HPP

// Analysis of elicited single-expert predictions: benchmark responses,
// response classification, per-subject estimation of the consideration degree,
// and the empirical relative loss of aggregators on pairs of subjects.
//
// A case is the two-box task: a ball is drawn from the left box (state 1) with
// probability mu, otherwise from the right box; the left box holds a fraction
// p_le of red balls, the right box p_ri. A subject sees the ball's colour and
// reports the probability (integer percent) that it came from the left box.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "brnagg/aggregators.hpp"
#include "brnagg/belief.hpp"
#include "brnagg/errors.hpp"

namespace brnagg {

struct Case {
  double p_le = 0.5;
  double p_ri = 0.5;
  double mu = 0.5;

  /// The case as a one-expert channel: Pr[r | left] = p_le, Pr[r | right] = p_ri.
  SignalChannel channel() const noexcept { return {p_le, p_ri}; }
};

inline void validate(const Case& c) {
  for (double v : {c.p_le, c.p_ri, c.mu}) {
    if (!(v > 0.0 && v < 1.0)) throw DomainError("Case: parameters must lie in (0,1)");
  }
}

/// Integer-percent key for grouping cases read from data.
struct CaseKey {
  int le = 50;
  int ri = 50;
  int mu = 50;

  friend auto operator<=>(const CaseKey&, const CaseKey&) = default;
  Case to_case() const noexcept { return {le / 100.0, ri / 100.0, mu / 100.0}; }
};

inline CaseKey key_of(const Case& c) noexcept {
  auto pct = [](double v) { return static_cast<int>(std::lround(v * 100.0)); };
  return {pct(c.p_le), pct(c.p_ri), pct(c.mu)};
}

inline bool is_even_prior(const Case& c) noexcept { return std::abs(c.mu - 0.5) < 1e-12; }

struct PredictionRecord {
  std::string subject_id;
  int round = 1;
  Case task;
  Signal signal = Signal::Red;
  int prediction = 50;  // integer percent, 0..100

  double report() const noexcept { return prediction / 100.0; }
};

// ---------------------------------------------------------------------------
// Benchmarks and classification

struct Benchmarks {
  double bayes = 0.0;
  double pbrn = 0.0;  // perfect base-rate neglect, lambda = 0
};

inline Benchmarks benchmarks(const Case& c, Signal s) {
  validate(c);
  const SignalChannel ch = c.channel();
  const double p1 = ch.likelihood(s, true);
  const double p0 = ch.likelihood(s, false);
  return {bayes_posterior(c.mu, p1, p0), brn_posterior(c.mu, p1, p0, 0.0)};
}

enum class ResponseLabel { PerfectBayes, PerfectBRN, Inside, Outside };

inline const char* to_string(ResponseLabel l) noexcept {
  switch (l) {
    case ResponseLabel::PerfectBayes:
      return "perfect_bayes";
    case ResponseLabel::PerfectBRN:
      return "perfect_brn";
    case ResponseLabel::Inside:
      return "inside";
    case ResponseLabel::Outside:
      return "outside";
  }
  return "?";
}

struct Classification {
  ResponseLabel label = ResponseLabel::Outside;
  bool prior_report = false;  // the report equals the prior itself
};

namespace detail {

/// The two-decimal floor and ceiling of p, in percent. Values within 1e-9 of a
/// whole percent count as that percent.
inline std::pair<int, int> percent_bracket(double p) noexcept {
  const double v = p * 100.0;
  const double r = std::round(v);
  if (std::abs(v - r) < 1e-9) return {static_cast<int>(r), static_cast<int>(r)};
  return {static_cast<int>(std::floor(v)), static_cast<int>(std::ceil(v))};
}

inline bool in_bracket(int pct, double p) noexcept {
  const auto [lo, hi] = percent_bracket(p);
  return pct == lo || pct == hi;
}

}  // namespace detail

/// Classifies an integer-percent report on a case with mu != 0.5. Perfect
/// labels accept the benchmark rounded either down or up to whole percent and
/// are checked Bayes first.
inline Classification classify_report(const Case& c, Signal s, int pct) {
  if (is_even_prior(c)) throw ExcludedCase("classify: cases with mu = 0.5 are not classified");
  const Benchmarks b = benchmarks(c, s);
  Classification out;
  const double x = pct / 100.0;
  if (detail::in_bracket(pct, b.bayes)) {
    out.label = ResponseLabel::PerfectBayes;
  } else if (detail::in_bracket(pct, b.pbrn)) {
    out.label = ResponseLabel::PerfectBRN;
  } else if (std::min(b.bayes, b.pbrn) < x && x < std::max(b.bayes, b.pbrn)) {
    out.label = ResponseLabel::Inside;
  } else {
    out.label = ResponseLabel::Outside;
  }
  out.prior_report = pct == static_cast<int>(std::lround(c.mu * 100.0));
  return out;
}

inline Classification classify(const PredictionRecord& r) {
  return classify_report(r.task, r.signal, r.prediction);
}

// ---------------------------------------------------------------------------
// Consideration-degree estimation

struct LambdaEstimate {
  std::string subject_id;
  double lambda_hat = 1.0;
  double beta_hat = 0.0;
  std::size_t n_rounds_used = 0;
};

struct LambdaOptions {
  // Reports of 0% or 100% have no log-odds. By default such rounds are
  // dropped; with a clamp they are moved to [clamp, 1 - clamp] instead.
  std::optional<double> clamp;
};

/// No-intercept least squares of d = logit(bayes) - logit(x) on z = logit(mu):
/// beta = sum(z d) / sum(z^2), lambda = 1 - beta. Rounds with mu = 0.5 carry
/// no information on beta and are dropped.
inline LambdaEstimate estimate_lambda(std::span<const PredictionRecord> records,
                                      const LambdaOptions& opt = {}) {
  if (records.empty()) throw InsufficientData("estimate_lambda: no records");
  const std::string& id = records.front().subject_id;
  if (opt.clamp && !(*opt.clamp > 0.0 && *opt.clamp < 0.5)) {
    throw RangeError("estimate_lambda: clamp must lie in (0, 1/2)");
  }
  double szd = 0.0;
  double szz = 0.0;
  std::size_t used = 0;
  for (const PredictionRecord& r : records) {
    if (r.subject_id != id) throw DomainError("estimate_lambda: records from more than one subject");
    if (is_even_prior(r.task)) continue;
    double x = r.report();
    if (x <= 0.0 || x >= 1.0) {
      if (!opt.clamp) continue;
      x = std::clamp(x, *opt.clamp, 1.0 - *opt.clamp);
    }
    const double z = logit(r.task.mu);
    const double d = logit(benchmarks(r.task, r.signal).bayes) - logit(x);
    szd += z * d;
    szz += z * z;
    ++used;
  }
  if (used == 0) throw AllFiltered("estimate_lambda: every round of subject '" + id + "' was filtered out");
  if (used < 2) throw InsufficientData("estimate_lambda: subject '" + id + "' has fewer than 2 usable rounds");
  LambdaEstimate est;
  est.subject_id = id;
  est.beta_hat = szd / szz;
  est.lambda_hat = 1.0 - est.beta_hat;
  est.n_rounds_used = used;
  return est;
}

/// Groups by subject (ordered by id) and estimates each; subjects without
/// enough usable rounds are reported in `failures`.
struct LambdaTable {
  std::vector<LambdaEstimate> estimates;
  std::vector<std::pair<std::string, std::string>> failures;  // subject, reason
};

inline LambdaTable estimate_all_lambdas(std::span<const PredictionRecord> records,
                                        const LambdaOptions& opt = {}) {
  std::map<std::string, std::vector<PredictionRecord>> by_subject;
  for (const auto& r : records) by_subject[r.subject_id].push_back(r);
  LambdaTable table;
  for (const auto& [id, recs] : by_subject) {
    try {
      table.estimates.push_back(estimate_lambda(recs, opt));
    } catch (const InsufficientData& e) {
      table.failures.emplace_back(id, e.what());
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Pairing single-expert cases

/// Two cases with a common prior, as one conditionally independent structure.
inline TwoSignalStructure combine_cases(const Case& z1, const Case& z2) {
  validate(z1);
  validate(z2);
  if (z1.mu != z2.mu) throw DomainError("combine_cases: cases have different priors");
  return {z1.mu, z1.channel(), z2.channel()};
}

/// One subject's reports on both signals of a case.
struct SubjectReports {
  std::string subject_id;
  int red_pct = 50;
  int blue_pct = 50;

  int pct(Signal s) const noexcept { return s == Signal::Red ? red_pct : blue_pct; }
  double report(Signal s) const noexcept { return pct(s) / 100.0; }
};

struct EmpiricalLoss {
  std::optional<double> loss;  // empty when every pair was excluded
  std::size_t pairs_used = 0;
  std::size_t pairs_excluded = 0;
};

namespace detail {

struct PairContext {
  std::array<double, 4> prob{};
  std::array<double, 4> fstar{};
};

inline PairContext pair_context(const Case& z1, const Case& z2) {
  const TwoSignalStructure theta = combine_cases(z1, z2);
  PairContext ctx;
  for (std::size_t k = 0; k < kProfiles.size(); ++k) {
    ctx.prob[k] = profile_probability(theta, kProfiles[k]);
    ctx.fstar[k] = omniscient_from_structure(theta, kProfiles[k]);
  }
  return ctx;
}

inline std::optional<double> pair_loss(const AggregatorSpec& spec, const PairContext& ctx,
                                       const SubjectReports& a, const SubjectReports& b) noexcept {
  double loss = 0.0;
  for (std::size_t k = 0; k < kProfiles.size(); ++k) {
    const auto f = try_aggregate(spec, a.report(kProfiles[k].first), b.report(kProfiles[k].second));
    if (!f) return std::nullopt;
    const double d = *f - ctx.fstar[k];
    loss += ctx.prob[k] * d * d;
  }
  return loss;
}

}  // namespace detail

/// Empirical relative loss for several rules at once. An ordered subject pair
/// (i1 on z1, i2 on z2, i1 != i2) is excluded for every rule as soon as one
/// rule cannot aggregate it, so all rules are compared on the same pairs.
inline std::vector<EmpiricalLoss> empirical_losses(std::span<const AggregatorSpec> specs,
                                                   const Case& z1, const Case& z2,
                                                   std::span<const SubjectReports> preds1,
                                                   std::span<const SubjectReports> preds2) {
  const detail::PairContext ctx = detail::pair_context(z1, z2);
  std::vector<EmpiricalLoss> out(specs.size());
  std::vector<double> sums(specs.size(), 0.0);
  std::vector<double> row(specs.size(), 0.0);
  std::size_t used = 0;
  std::size_t excluded = 0;
  for (const auto& a : preds1) {
    for (const auto& b : preds2) {
      if (a.subject_id == b.subject_id) continue;
      bool ok = true;
      for (std::size_t k = 0; k < specs.size() && ok; ++k) {
        const auto v = detail::pair_loss(specs[k], ctx, a, b);
        if (v) row[k] = *v; else ok = false;
      }
      if (!ok) {
        ++excluded;
        continue;
      }
      ++used;
      for (std::size_t k = 0; k < specs.size(); ++k) sums[k] += row[k];
    }
  }
  if (used + excluded == 0) throw InsufficientData("empirical_loss: no pair of distinct subjects");
  for (std::size_t k = 0; k < specs.size(); ++k) {
    out[k].pairs_used = used;
    out[k].pairs_excluded = excluded;
    if (used > 0) out[k].loss = sums[k] / static_cast<double>(used);
  }
  return out;
}

inline EmpiricalLoss empirical_loss(const AggregatorSpec& spec, const Case& z1, const Case& z2,
                                    std::span<const SubjectReports> preds1,
                                    std::span<const SubjectReports> preds2) {
  return empirical_losses(std::span<const AggregatorSpec>(&spec, 1), z1, z2, preds1, preds2).front();
}

// ---------------------------------------------------------------------------
// Subsamples by report composition

enum class Subsample { Out4, In1Out3, In2Out2, In3Out1, In4, PerfectBRN4, PerfectBayes4 };

inline constexpr std::array<Subsample, 7> kSubsamples{Subsample::Out4,        Subsample::In1Out3,
                                                      Subsample::In2Out2,     Subsample::In3Out1,
                                                      Subsample::In4,         Subsample::PerfectBRN4,
                                                      Subsample::PerfectBayes4};

inline const char* to_string(Subsample s) noexcept {
  switch (s) {
    case Subsample::Out4: return "4_outside";
    case Subsample::In1Out3: return "1_inside_3_outside";
    case Subsample::In2Out2: return "2_inside_2_outside";
    case Subsample::In3Out1: return "3_inside_1_outside";
    case Subsample::In4: return "4_inside";
    case Subsample::PerfectBRN4: return "4_perfect_brn";
    case Subsample::PerfectBayes4: return "4_perfect_bayes";
  }
  return "?";
}

/// Buckets the four reports of a subject pair. Perfect Bayes and perfect BRN
/// reports sit on the ends of the inside range and count as inside.
inline Subsample subsample_key(const SubjectReports& r1, const SubjectReports& r2, const Case& z1,
                               const Case& z2) {
  int inside = 0;
  int bayes = 0;
  int brn = 0;
  auto tally = [&](const Case& c, const SubjectReports& r) {
    for (Signal s : {Signal::Red, Signal::Blue}) {
      const ResponseLabel l = classify_report(c, s, r.pct(s)).label;
      if (l != ResponseLabel::Outside) ++inside;
      if (l == ResponseLabel::PerfectBayes) ++bayes;
      if (l == ResponseLabel::PerfectBRN) ++brn;
    }
  };
  tally(z1, r1);
  tally(z2, r2);
  if (brn == 4) return Subsample::PerfectBRN4;
  if (bayes == 4) return Subsample::PerfectBayes4;
  return kSubsamples[static_cast<std::size_t>(inside)];
}

// ---------------------------------------------------------------------------
// Record transforms

/// Replaces every report by the Bayesian posterior rounded to whole percent.
inline std::vector<PredictionRecord> substitute_bayes(std::vector<PredictionRecord> records) {
  for (auto& r : records) {
    r.prediction = static_cast<int>(std::lround(benchmarks(r.task, r.signal).bayes * 100.0));
  }
  return records;
}

/// Collects each subject's (red, blue) reports per case. Subjects who answered
/// only one signal of a case are left out of that case; repeated answers keep
/// the earliest round.
inline std::map<CaseKey, std::vector<SubjectReports>> reports_by_case(
    std::span<const PredictionRecord> records) {
  struct Partial {
    std::optional<std::pair<int, int>> red, blue;  // (round, pct)
  };
  std::map<CaseKey, std::map<std::string, Partial>> acc;
  for (const auto& r : records) {
    auto& slot = r.signal == Signal::Red ? acc[key_of(r.task)][r.subject_id].red
                                         : acc[key_of(r.task)][r.subject_id].blue;
    if (!slot || r.round < slot->first) slot = std::pair{r.round, r.prediction};
  }
  std::map<CaseKey, std::vector<SubjectReports>> out;
  for (const auto& [key, subjects] : acc) {
    for (const auto& [id, p] : subjects) {
      if (p.red && p.blue) out[key].push_back({id, p.red->second, p.blue->second});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic subjects

struct SynthOptions {
  int n_subjects = 10;
  double lambda = 1.0;
  int cases_per_subject = 30;
  double noise_sd = 0.0;  // Gaussian noise on the log-odds scale
  std::uint64_t seed = 1;
};

/// Tenths-grid cases usable for closed-loop checks: the two boxes differ, and
/// for mu != 0.5 the Bayes and perfect-BRN responses never share a whole
/// percent on either signal, so noise-free answers classify unambiguously.
inline std::vector<Case> synth_case_pool() {
  std::vector<Case> pool;
  for (int mu = 1; mu <= 9; ++mu) {
    for (int le = 1; le <= 9; ++le) {
      for (int ri = 1; ri <= 9; ++ri) {
        if (le == ri) continue;
        const Case c{le / 10.0, ri / 10.0, mu / 10.0};
        bool clash = false;
        if (mu != 5) {
          for (Signal s : {Signal::Red, Signal::Blue}) {
            const Benchmarks b = benchmarks(c, s);
            const auto [b_lo, b_hi] = detail::percent_bracket(b.bayes);
            const auto [n_lo, n_hi] = detail::percent_bracket(b.pbrn);
            if (b_lo == n_lo || b_lo == n_hi || b_hi == n_lo || b_hi == n_hi) clash = true;
          }
        }
        if (!clash) pool.push_back(c);
      }
    }
  }
  return pool;
}

/// Subjects answering like BRN experts with degree opt.lambda, optionally with
/// log-odds noise. Reports are rounded to whole percent and kept in [1, 99].
/// Each subject answers both signals of `cases_per_subject` distinct cases in a
/// shuffled round order.
inline std::vector<PredictionRecord> synth_generate(const SynthOptions& opt) {
  if (opt.n_subjects < 0 || opt.cases_per_subject < 0) throw RangeError("synth_generate: negative count");
  if (!(opt.noise_sd >= 0.0)) throw RangeError("synth_generate: noise_sd must be non-negative");
  const std::vector<Case> pool = synth_case_pool();
  if (static_cast<std::size_t>(opt.cases_per_subject) > pool.size()) {
    throw RangeError("synth_generate: at most " + std::to_string(pool.size()) + " cases per subject");
  }
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> noise(0.0, opt.noise_sd > 0.0 ? opt.noise_sd : 1.0);

  const int width = static_cast<int>(std::to_string(std::max(1, opt.n_subjects)).size());
  std::vector<PredictionRecord> out;
  std::vector<std::size_t> idx(pool.size());
  for (int subject = 1; subject <= opt.n_subjects; ++subject) {
    std::string id = std::to_string(subject);
    id = "s" + std::string(static_cast<std::size_t>(width) - id.size(), '0') + id;

    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<int> rounds(2u * static_cast<std::size_t>(opt.cases_per_subject));
    for (std::size_t i = 0; i < rounds.size(); ++i) rounds[i] = static_cast<int>(i) + 1;
    std::shuffle(rounds.begin(), rounds.end(), rng);

    std::vector<PredictionRecord> mine;
    for (int k = 0; k < opt.cases_per_subject; ++k) {
      const Case& c = pool[idx[static_cast<std::size_t>(k)]];
      for (Signal s : {Signal::Red, Signal::Blue}) {
        double x = brn_from_bayes(benchmarks(c, s).bayes, c.mu, opt.lambda);
        if (opt.noise_sd > 0.0) x = inverse_logit(logit(x) + noise(rng));
        const int pct = std::clamp(static_cast<int>(std::lround(x * 100.0)), 1, 99);
        const int round = rounds[2u * static_cast<std::size_t>(k) + (s == Signal::Red ? 0u : 1u)];
        mine.push_back({id, round, c, s, pct});
      }
    }
    std::sort(mine.begin(), mine.end(),
              [](const PredictionRecord& a, const PredictionRecord& b) { return a.round < b.round; });
    out.insert(out.end(), mine.begin(), mine.end());
  }
  return out;
}

}  // namespace brnagg

#endif  // BRNAGG_EMPIRICAL_HPP
