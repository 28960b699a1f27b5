#include "brnagg/belief.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace brnagg {
namespace {

TEST(Logit, KnownValues) {
  EXPECT_EQ(logit(0.5), 0.0);
  EXPECT_NEAR(logit(0.75), 1.0986122886681098, 1e-15);
  EXPECT_NEAR(logit(0.3) + logit(0.7), 0.0, 1e-15);
}

TEST(Logit, RejectsEndpoints) {
  EXPECT_THROW(logit(0.0), DomainError);
  EXPECT_THROW(logit(1.0), DomainError);
  EXPECT_THROW(logit(-0.1), DomainError);
}

TEST(Logit, InverseRoundTrip) {
  for (double p = 0.001; p < 1.0; p += 0.001) EXPECT_NEAR(inverse_logit(logit(p)), p, 1e-12);
}

TEST(BayesPosterior, TaxicabExample) {
  // 15% prior, 80%-reliable witness.
  EXPECT_NEAR(bayes_posterior(0.15, 0.8, 0.2), 0.41379310344827586, 1e-15);
}

TEST(BayesPosterior, UninformativeSignalReturnsPrior) {
  EXPECT_NEAR(bayes_posterior(0.3, 0.5, 0.5), 0.3, 1e-15);
}

TEST(BayesPosterior, StudySampleCase) {
  EXPECT_NEAR(bayes_posterior(0.2, 0.4, 0.3), 0.25, 1e-15);
}

TEST(BayesPosterior, ZeroProbabilitySignal) {
  EXPECT_THROW(bayes_posterior(0.3, 0.0, 0.0), DomainError);
  EXPECT_THROW(bayes_posterior(0.0, 0.5, 0.5), DomainError);
  EXPECT_THROW(bayes_posterior(1.0, 0.5, 0.5), DomainError);
}

TEST(BrnPosterior, Endpoints) {
  EXPECT_NEAR(brn_posterior(0.15, 0.8, 0.2, 0.0), 0.8, 1e-15);
  EXPECT_NEAR(brn_posterior(0.15, 0.8, 0.2, 1.0), 0.41379310344827586, 1e-15);
  EXPECT_NEAR(brn_posterior(0.2, 0.4, 0.3, 0.0), 0.4 / 0.7, 1e-15);
}

TEST(BrnPosterior, LambdaOneIsBayesExactly) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.001, 0.999);
  for (int i = 0; i < 1000; ++i) {
    const double mu = u(rng), p1 = u(rng), p0 = u(rng);
    EXPECT_EQ(brn_posterior(mu, p1, p0, 1.0), bayes_posterior(mu, p1, p0));
    EXPECT_DOUBLE_EQ(brn_posterior(mu, p1, p0, 0.0), p1 / (p1 + p0));
  }
}

TEST(BrnPosterior, MonotoneInLikelihoods) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.01, 0.98);
  std::uniform_real_distribution<double> lam(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double mu = u(rng), p1 = u(rng), p0 = u(rng), l = lam(rng);
    const double base = brn_posterior(mu, p1, p0, l);
    EXPECT_GT(brn_posterior(mu, p1 + 0.01, p0, l), base);
    EXPECT_LT(brn_posterior(mu, p1, p0 + 0.01, l), base);
  }
}

TEST(BrnFromBayes, Examples) {
  EXPECT_NEAR(brn_from_bayes(0.37, 0.2, 1.0), 0.37, 1e-15);
  EXPECT_NEAR(brn_from_bayes(0.41379310344827586, 0.15, 0.0), 0.8, 1e-12);
  for (double l : {0.0, 0.3, 0.7, 1.0}) EXPECT_NEAR(brn_from_bayes(0.5, 0.5, l), 0.5, 1e-15);
}

TEST(BayesFromBrn, Examples) {
  EXPECT_NEAR(bayes_from_brn(0.6, 0.3, 1.0), 0.6, 1e-15);
  EXPECT_NEAR(bayes_from_brn(0.8, 0.15, 0.0), 0.41379310344827586, 1e-12);
  // logit = 0.5 logit(0.2) = -log 2, i.e. 1/3.
  EXPECT_NEAR(bayes_from_brn(0.5, 0.2, 0.5), 1.0 / 3.0, 1e-12);
}

TEST(BrnFromBayes, LogOddsIdentityAndRoundTrip) {
  for (double q = 0.02; q < 0.99; q += 0.03) {
    for (double mu = 0.02; mu < 0.99; mu += 0.03) {
      for (double l = 0.0; l <= 1.0; l += 0.1) {
        const double x = brn_from_bayes(q, mu, l);
        EXPECT_NEAR(logit(x) - logit(q) + (1.0 - l) * logit(mu), 0.0, 1e-12);
        EXPECT_NEAR(bayes_from_brn(x, mu, l), q, 1e-12);
      }
    }
  }
}

TEST(BrnFromBayes, AgreesWithForwardModel) {
  // Reporting brn_posterior equals transforming the Bayesian posterior.
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  for (int i = 0; i < 1000; ++i) {
    const double mu = u(rng), p1 = u(rng), p0 = u(rng), l = u(rng);
    EXPECT_NEAR(brn_from_bayes(bayes_posterior(mu, p1, p0), mu, l), brn_posterior(mu, p1, p0, l), 1e-12);
  }
}

TEST(ProfileProbability, Examples) {
  const TwoSignalStructure flat{0.37, {0.5, 0.5}, {0.5, 0.5}};
  for (SignalProfile s : kProfiles) EXPECT_NEAR(profile_probability(flat, s), 0.25, 1e-15);

  // Lower-bound construction, structure 1 at gamma = 0.2, lambda = 1.
  const TwoSignalStructure lb{0.2, {1.0, 0.25}, {1.0, 0.25}};
  EXPECT_NEAR(profile_probability(lb, {Signal::Red, Signal::Red}), 0.25, 1e-15);
}

TEST(ProfileProbability, SumsToOne) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const TwoSignalStructure t{std::clamp(u(rng), 1e-6, 1 - 1e-6), {u(rng), u(rng)}, {u(rng), u(rng)}};
    double total = 0.0;
    for (SignalProfile s : kProfiles) total += profile_probability(t, s);
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(OmniscientFromStructure, Examples) {
  const TwoSignalStructure flat{0.3, {0.5, 0.5}, {0.5, 0.5}};
  for (SignalProfile s : kProfiles) EXPECT_NEAR(omniscient_from_structure(flat, s), 0.3, 1e-15);

  const TwoSignalStructure t{0.2, {0.4, 0.3}, {0.4, 0.3}};
  EXPECT_NEAR(omniscient_from_structure(t, {Signal::Red, Signal::Red}), 4.0 / 13.0, 1e-15);

  const TwoSignalStructure sym{0.5, {0.7, 0.3}, {0.7, 0.3}};
  EXPECT_NEAR(omniscient_from_structure(sym, {Signal::Red, Signal::Blue}), 0.5, 1e-15);
}

TEST(OmniscientFromStructure, ZeroProbabilityProfile) {
  const TwoSignalStructure t{0.4, {1.0, 1.0}, {0.5, 0.5}};
  EXPECT_THROW(omniscient_from_structure(t, {Signal::Blue, Signal::Red}), DomainError);
}

TEST(OmniscientFromPredictions, Examples) {
  for (double mu = 0.1; mu < 0.95; mu += 0.1) {
    EXPECT_NEAR(omniscient_from_predictions(0.7, 0.6, mu, 0.5), 0.42 / 0.54, 1e-12);
  }
  EXPECT_NEAR(omniscient_from_predictions(0.5, 0.5, 0.5, 1.0), 0.5, 1e-15);
  EXPECT_THROW(omniscient_from_predictions(0.0, 1.0, 0.3, 0.7), UndefinedAggregation);
}

TEST(OmniscientFromPredictions, MuInvariantAtHalf) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int i = 0; i < 200; ++i) {
    const double x1 = u(rng), x2 = u(rng);
    const double ref = omniscient_from_predictions(x1, x2, 0.1, 0.5);
    for (int k = 2; k <= 9; ++k) EXPECT_NEAR(omniscient_from_predictions(x1, x2, k / 10.0, 0.5), ref, 1e-12);
  }
}

TEST(OmniscientFromPredictions, MatchesStructureRoute) {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  std::uniform_real_distribution<double> lam(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const TwoSignalStructure t{u(rng), {u(rng), u(rng)}, {u(rng), u(rng)}};
    const double l = lam(rng);
    for (SignalProfile s : kProfiles) {
      const double x1 = expert_report(t, 0, s.first, l);
      const double x2 = expert_report(t, 1, s.second, l);
      EXPECT_NEAR(omniscient_from_predictions(x1, x2, t.mu, l), omniscient_from_structure(t, s), 1e-10);
    }
  }
}

}  // namespace
}  // namespace brnagg
