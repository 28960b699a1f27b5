#ifndef BRNAGG_STUDY_HPP
#define BRNAGG_STUDY_HPP

// Dataset-level summaries built from the per-record operations in
// empirical.hpp.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "brnagg/aggregators.hpp"
#include "brnagg/empirical.hpp"

namespace brnagg {

struct ClassificationSummary {
  // counts[(round, signal, label)]
  std::map<std::tuple<int, Signal, ResponseLabel>, std::size_t> counts;
  std::map<std::pair<int, Signal>, std::size_t> totals;
  std::map<std::pair<int, Signal>, std::size_t> prior_reports;
  std::array<std::size_t, 4> overall{};  // indexed by ResponseLabel
  std::size_t overall_prior = 0;
  std::size_t classified = 0;
  std::size_t excluded = 0;  // mu = 0.5 records

  double share(ResponseLabel l) const noexcept {
    return classified == 0 ? 0.0 : static_cast<double>(overall[static_cast<std::size_t>(l)]) / static_cast<double>(classified);
  }
  double prior_share() const noexcept {
    return classified == 0 ? 0.0 : static_cast<double>(overall_prior) / static_cast<double>(classified);
  }
};

inline ClassificationSummary classify_all(std::span<const PredictionRecord> records) {
  ClassificationSummary out;
  for (const auto& r : records) {
    if (is_even_prior(r.task)) {
      ++out.excluded;
      continue;
    }
    const Classification c = classify(r);
    ++out.counts[{r.round, r.signal, c.label}];
    ++out.totals[{r.round, r.signal}];
    ++out.overall[static_cast<std::size_t>(c.label)];
    ++out.classified;
    if (c.prior_report) {
      ++out.prior_reports[{r.round, r.signal}];
      ++out.overall_prior;
    }
  }
  return out;
}

struct CasePairLoss {
  CaseKey first;
  CaseKey second;
  std::vector<EmpiricalLoss> losses;  // one per evaluated rule
};

struct AggregatorSummary {
  double average_loss = 0.0;  // mean over case pairs with at least one usable pair
  double max_loss = 0.0;
  std::size_t case_pairs = 0;
  std::size_t pairs_used = 0;
  std::size_t pairs_excluded = 0;
};

struct SubsampleStat {
  double mean_loss = 0.0;
  std::size_t pairs = 0;
};

struct EvaluationReport {
  std::vector<AggregatorSpec> specs;
  std::vector<CasePairLoss> case_pairs;
  std::vector<AggregatorSummary> summaries;
  // subsamples[bucket][rule], filled when requested.
  std::map<Subsample, std::vector<SubsampleStat>> subsamples;
};

struct EvaluationOptions {
  bool subsamples = false;
};

/// Evaluates every rule on every unordered pair of cases sharing a prior (a
/// case may pair with itself). Subject pairs one rule cannot aggregate are
/// dropped for all rules.
inline EvaluationReport evaluate_aggregators(std::span<const PredictionRecord> records,
                                             std::span<const AggregatorSpec> specs,
                                             const EvaluationOptions& opt = {}) {
  EvaluationReport rep;
  rep.specs.assign(specs.begin(), specs.end());
  rep.summaries.resize(specs.size());
  std::map<Subsample, std::vector<double>> bucket_sums;
  std::map<Subsample, std::size_t> bucket_counts;
  if (opt.subsamples) {
    for (Subsample s : kSubsamples) {
      bucket_sums[s].assign(specs.size(), 0.0);
      bucket_counts[s] = 0;
    }
  }

  const auto by_case = reports_by_case(records);
  std::vector<double> row(specs.size());
  for (auto i = by_case.begin(); i != by_case.end(); ++i) {
    for (auto j = i; j != by_case.end(); ++j) {
      if (i->first.mu != j->first.mu) continue;
      const Case z1 = i->first.to_case();
      const Case z2 = j->first.to_case();
      std::vector<EmpiricalLoss> losses;
      try {
        losses = empirical_losses(specs, z1, z2, i->second, j->second);
      } catch (const InsufficientData&) {
        continue;  // a single subject on a self-paired case
      }
      for (std::size_t k = 0; k < specs.size(); ++k) {
        AggregatorSummary& s = rep.summaries[k];
        s.pairs_used += losses[k].pairs_used;
        s.pairs_excluded += losses[k].pairs_excluded;
        if (!losses[k].loss) continue;
        s.average_loss += *losses[k].loss;
        s.max_loss = std::max(s.max_loss, *losses[k].loss);
        ++s.case_pairs;
      }
      rep.case_pairs.push_back({i->first, j->first, std::move(losses)});

      if (!opt.subsamples || is_even_prior(z1)) continue;
      const detail::PairContext ctx = detail::pair_context(z1, z2);
      for (const auto& a : i->second) {
        for (const auto& b : j->second) {
          if (a.subject_id == b.subject_id) continue;
          bool ok = true;
          for (std::size_t k = 0; k < specs.size() && ok; ++k) {
            const auto v = detail::pair_loss(specs[k], ctx, a, b);
            if (v) row[k] = *v; else ok = false;
          }
          if (!ok) continue;
          const Subsample key = subsample_key(a, b, z1, z2);
          for (std::size_t k = 0; k < specs.size(); ++k) bucket_sums[key][k] += row[k];
          ++bucket_counts[key];
        }
      }
    }
  }
  for (auto& s : rep.summaries) {
    if (s.case_pairs > 0) s.average_loss /= static_cast<double>(s.case_pairs);
  }
  for (const auto& [key, sums] : bucket_sums) {
    auto& stats = rep.subsamples[key];
    const std::size_t n = bucket_counts[key];
    for (double v : sums) stats.push_back({n > 0 ? v / static_cast<double>(n) : 0.0, n});
  }
  return rep;
}

}  // namespace brnagg

#endif  // BRNAGG_STUDY_HPP
