// Exit criteria. Prints one PASS/FAIL/SKIP line per criterion and exits
// non-zero when any criterion fails. Criterion 9 needs the published study
// dataset: set BRNAGG_STUDY_DATA or place it at data/study.csv.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "brnagg/brnagg.hpp"

namespace {

using namespace brnagg;

struct Verdict {
  enum { Pass, Fail, Skip } status = Pass;
  std::string detail;
};

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      ok_ = false;
      if (failures_++ < 6) msg_ += (msg_.empty() ? "" : "; ") + what;
    }
  }
  void near(double got, double want, double tol, const std::string& what) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s = %.6f, want %.6f +- %.0e", what.c_str(), got, want, tol);
    expect(std::abs(got - want) <= tol, buf);
  }
  Verdict verdict(const std::string& note) const {
    if (ok_) return {Verdict::Pass, note};
    return {Verdict::Fail, msg_ + (failures_ > 6 ? " (+" + std::to_string(failures_ - 6) + " more)" : "")};
  }

 private:
  bool ok_ = true;
  int failures_ = 0;
  std::string msg_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Default optimizer settings; each curve is computed once and shared.
const OptimizerConfig kConfig{};

const RegretCurve& curve_of(const AggregatorSpec& spec) {
  static std::map<std::string, RegretCurve> cache;
  const std::string key = format_spec(spec);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, regret_curve(spec, kConfig)).first;
  return it->second;
}

double at(const RegretCurve& c, double lambda) {
  for (std::size_t i = 0; i < c.lambdas.size(); ++i) {
    if (std::abs(c.lambdas[i] - lambda) < 1e-12) return c.values[i];
  }
  return std::nan("");
}

const AggregatorSpec kSA = AggregatorSpec::simple_average();
const AggregatorSpec kAP = AggregatorSpec::average_prior();
const AggregatorSpec kB5 = AggregatorSpec::balancing(0.5);
const AggregatorSpec kB7 = AggregatorSpec::balancing(0.7);

Verdict criterion1() {
  const double plotted[] = {0.100347, 0.042957, 0.015106, 0.003017, 0.0,
                            0.001939, 0.006288, 0.011604, 0.017143, 0.022542};
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  for (int k = 1; k <= 10; ++k) c.near(lower_bound(k / 10.0).value, plotted[k - 1], 1e-4, "lb(" + fmt("%.1f", k / 10.0) + ")");
  const double lb0 = lower_bound(0.0, 1e-6).value;
  c.expect(lb0 >= 0.2499, "lb(0) = " + fmt("%.6f", lb0) + " < 0.2499");
  const double t = seconds_since(t0);
  c.expect(t < 1.0, "took " + fmt("%.3f", t) + " s");
  return c.verdict("lb(0)=" + fmt("%.6f", lb0) + ", " + fmt("%.3f", t) + " s");
}

Verdict criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  const RegretCurve& sa = curve_of(kSA);
  Check c;
  for (std::size_t i = 0; i < sa.lambdas.size(); ++i) {
    const double l = sa.lambdas[i];
    const double want = l < 0.05 ? 0.25 : l < 0.15 ? 0.147781 : l < 0.25 ? 0.094201 : 0.0625;
    c.near(sa.values[i], want, 2e-3, "R(" + fmt("%.1f", l) + ")");
  }
  return c.verdict(fmt("%.1f s", seconds_since(t0)));
}

Verdict criterion3() {
  Check c;
  const double ap = at(curve_of(kAP), 1.0);
  const double b7 = at(curve_of(kB7), 1.0);
  const double b5 = at(curve_of(kB5), 0.5);
  c.near(ap, 0.025992, 2e-3, "average-prior at 1");
  c.near(b7, 0.032162, 2e-3, "balance:0.7 at 1");
  c.expect(b5 <= 1e-3, "balance:0.5 at 0.5 = " + fmt("%.2e", b5));
  return c.verdict("ap=" + fmt("%.6f", ap) + " b0.7=" + fmt("%.6f", b7) + " b0.5@0.5=" + fmt("%.2e", b5));
}

Verdict criterion4() {
  Check c;
  std::string note;
  for (const auto& [spec, want] : {std::pair{kSA, 0.062}, std::pair{kB5, 0.015}, std::pair{kB7, 0.013}}) {
    const OverallRegret o = overall_regret_from_curve(curve_of(spec));
    c.near(o.value, want, 3e-3, format_spec(spec));
    note += (note.empty() ? "" : " ") + format_spec(spec) + "=" + fmt("%.4f", o.value);
  }
  return c.verdict(note);
}

Verdict criterion5() {
  Check c;
  const RegretCurve lb = lower_bound_curve(kConfig.lambda_grid);
  const TroughReport r = single_trough_check(lb, 1e-6);
  c.expect(r.single_troughed, "lower bound not single-troughed");
  c.expect(std::abs(lb.lambdas[r.trough] - 0.5) < 1e-12, "lower-bound trough at " + fmt("%.1f", lb.lambdas[r.trough]));
  for (const auto& spec : {kSA, kAP, kB5, kB7}) {
    const RegretCurve& cv = curve_of(spec);
    c.expect(single_trough_check(cv, 2e-3).single_troughed, format_spec(spec) + " not single-troughed");
    for (std::size_t i = 0; i < cv.lambdas.size(); ++i) {
      c.expect(cv.values[i] >= lb.values[i] - 1e-6,
               format_spec(spec) + " below bound at " + fmt("%.1f", cv.lambdas[i]));
    }
  }
  return c.verdict("4 curves");
}

Verdict criterion6() {
  Check c;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  std::uniform_real_distribution<double> lam(0.0, 1.0);
  double e_logodds = 0.0, e_round = 0.0, e_predictions = 0.0, e_loss = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double q = u(rng), mu = u(rng), l = lam(rng);
    const double x = brn_from_bayes(q, mu, l);
    e_logodds = std::max(e_logodds, std::abs(logit(x) - (logit(q) - (1.0 - l) * logit(mu))));
    e_round = std::max(e_round, std::abs(bayes_from_brn(x, mu, l) - q));
    e_round = std::max(e_round, std::abs(brn_from_bayes(bayes_from_brn(q, mu, l), mu, l) - q));

    const TwoSignalStructure t{u(rng), {u(rng), u(rng)}, {u(rng), u(rng)}};
    for (SignalProfile s : kProfiles) {
      const double x1 = expert_report(t, 0, s.first, l);
      const double x2 = expert_report(t, 1, s.second, l);
      e_predictions = std::max(e_predictions, std::abs(omniscient_from_predictions(x1, x2, t.mu, l) - omniscient_from_structure(t, s)));
    }
  }
  c.expect(e_logodds <= 1e-10, "log-odds identity err " + fmt("%.2e", e_logodds));
  c.expect(e_round <= 1e-10, "round trip err " + fmt("%.2e", e_round));
  c.expect(e_predictions <= 1e-10, "prediction/structure err " + fmt("%.2e", e_predictions));

  // Loss identity: E[(f-w)^2] - E[(f*-w)^2] equals E[(f-f*)^2].
  const AggregatorSpec specs[] = {kSA, kAP, kB5, kB7};
  for (int i = 0; i < 1000; ++i) {
    const TwoSignalStructure t{u(rng), {u(rng), u(rng)}, {u(rng), u(rng)}};
    const double l = lam(rng);
    for (const auto& spec : specs) {
      double agg = 0.0, omni = 0.0;
      for (int w = 0; w <= 1; ++w) {
        for (SignalProfile s : kProfiles) {
          const double pr = (w ? t.mu : 1.0 - t.mu) * t.first.likelihood(s.first, w == 1) *
                            t.second.likelihood(s.second, w == 1);
          const double f = aggregate(spec, expert_report(t, 0, s.first, l), expert_report(t, 1, s.second, l));
          const double fs = omniscient_from_structure(t, s);
          agg += pr * (f - w) * (f - w);
          omni += pr * (fs - w) * (fs - w);
        }
      }
      e_loss = std::max(e_loss, std::abs(relative_loss(spec, t, l) - (agg - omni)));
    }
  }
  c.expect(e_loss <= 1e-12, "loss identity err " + fmt("%.2e", e_loss));
  return c.verdict("max errs " + fmt("%.1e", std::max({e_logodds, e_round, e_predictions})) + " / " + fmt("%.1e", e_loss));
}

Verdict criterion7() {
  Check c;
  const double v = relative_loss_general(0.5, JointStructure::xor_fixture());
  c.expect(std::abs(v - 0.25) <= 1e-15, "xor loss " + fmt("%.17g", v));
  return c.verdict("loss=" + fmt("%.17g", v));
}

Verdict criterion8() {
  Check c;
  double worst = 0.0;
  for (double l : {0.0, 0.3, 0.6, 1.0}) {
    SynthOptions opt;
    opt.n_subjects = 50;
    opt.lambda = l;
    opt.seed = 7;
    const auto recs = synth_generate(opt);
    const LambdaTable t = estimate_all_lambdas(recs);
    c.expect(t.failures.empty() && t.estimates.size() == 50, "estimation failures at " + fmt("%.1f", l));
    for (const auto& e : t.estimates) worst = std::max(worst, std::abs(e.lambda_hat - l));
    for (const auto& e : t.estimates) c.expect(std::abs(e.lambda_hat - l) <= 0.05, e.subject_id + " at " + fmt("%.1f", l));
    if (l == 0.0 || l == 1.0) {
      const ClassificationSummary s = classify_all(recs);
      const ResponseLabel want = l == 1.0 ? ResponseLabel::PerfectBayes : ResponseLabel::PerfectBRN;
      c.expect(s.classified > 0 && s.share(want) == 1.0,
               std::string(to_string(want)) + " share " + fmt("%.4f", s.share(want)));
    }
  }
  return c.verdict("max |lambda_hat - lambda| = " + fmt("%.4f", worst));
}

Verdict criterion9() {
  std::string path;
  if (const char* env = std::getenv("BRNAGG_STUDY_DATA")) path = env;
  if (path.empty()) path = BRNAGG_DEFAULT_STUDY_DATA;
  if (!std::filesystem::exists(path)) return {Verdict::Skip, "dataset not found at " + path};
  std::ifstream in(path, std::ios::binary);
  std::vector<PredictionRecord> recs;
  try {
    recs = load_dataset(in);
  } catch (const DataError& e) {
    return {Verdict::Fail, path + ":" + std::to_string(e.line()) + ": " + e.what()};
  }
  Check c;
  const ClassificationSummary s = classify_all(recs);
  c.near(100 * s.share(ResponseLabel::PerfectBayes), 12.44, 1.5, "perfect Bayes %");
  c.near(100 * s.share(ResponseLabel::PerfectBRN), 5.37, 1.5, "perfect BRN %");
  c.near(100 * s.share(ResponseLabel::Inside), 25.11, 1.5, "inside %");
  c.near(100 * s.share(ResponseLabel::Outside), 57.08, 1.5, "outside %");
  c.near(100 * s.prior_share(), 18.94, 1.5, "prior report %");

  std::vector<AggregatorSpec> specs{kSA, kAP};
  const double want[] = {0.0627, 0.0638, 0.0882, 0.0853, 0.0823, 0.0793, 0.0762, 0.0731, 0.0702, 0.0675, 0.0652};
  for (int k = 1; k <= 9; ++k) specs.push_back(AggregatorSpec::balancing(k / 10.0));
  const EvaluationReport rep = evaluate_aggregators(recs, specs);
  for (std::size_t k = 0; k < specs.size(); ++k) c.near(rep.summaries[k].average_loss, want[k], 3e-3, format_spec(specs[k]));
  return c.verdict(std::to_string(recs.size()) + " records, " + std::to_string(rep.case_pairs.size()) + " case pairs");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"lower-bound curve", criterion1},
      {"simple-average regret curve", criterion2},
      {"average-prior and balancing regret points", criterion3},
      {"overall regret", criterion4},
      {"curve shapes", criterion5},
      {"identity suite", criterion6},
      {"xor fixture", criterion7},
      {"empirical closed loop", criterion8},
      {"dataset reproduction", criterion9},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {Verdict::Fail, std::string("exception: ") + e.what()};
    }
    const char* tag = v.status == Verdict::Pass ? "PASS" : v.status == Verdict::Fail ? "FAIL" : "SKIP";
    if (v.status == Verdict::Fail) ++failed;
    std::printf("%s %zu %s: %s\n", tag, i + 1, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
