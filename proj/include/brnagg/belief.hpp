#ifndef BRNAGG_BELIEF_HPP
#define BRNAGG_BELIEF_HPP

// Probability-space primitives: Bayesian and base-rate-neglect (BRN)
// posteriors, log-odds transforms and the omniscient two-expert aggregator.
//
// The BRN expert with consideration degree lambda reports
//
//     x = mu^lambda p1 / (mu^lambda p1 + (1 - mu)^lambda p0)
//
// where p1, p0 are the likelihoods of her signal under state 1 and 0.
// lambda = 1 is a Bayesian, lambda = 0 ignores the prior entirely.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "brnagg/errors.hpp"

namespace brnagg {

enum class Signal : std::uint8_t { Red, Blue };

inline constexpr char to_char(Signal s) noexcept { return s == Signal::Red ? 'r' : 'b'; }

struct SignalProfile {
  Signal first;
  Signal second;

  friend constexpr bool operator==(SignalProfile, SignalProfile) = default;
};

inline constexpr std::array<SignalProfile, 4> kProfiles{{
    {Signal::Red, Signal::Red},
    {Signal::Red, Signal::Blue},
    {Signal::Blue, Signal::Red},
    {Signal::Blue, Signal::Blue},
}};

/// Binary signal channel: alpha = Pr[r | state 1], beta = Pr[r | state 0].
struct SignalChannel {
  double alpha = 0.5;
  double beta = 0.5;

  /// Pr[signal | state].
  constexpr double likelihood(Signal s, bool state) const noexcept {
    const double red = state ? alpha : beta;
    return s == Signal::Red ? red : 1.0 - red;
  }

  friend constexpr bool operator==(const SignalChannel&, const SignalChannel&) = default;
};

/// Two experts with conditionally independent binary signals and a common prior.
struct TwoSignalStructure {
  double mu = 0.5;
  SignalChannel first;
  SignalChannel second;

  friend constexpr bool operator==(const TwoSignalStructure&, const TwoSignalStructure&) = default;
};

namespace detail {

inline bool in_unit(double p) noexcept { return p >= 0.0 && p <= 1.0; }
inline bool in_open_unit(double p) noexcept { return p > 0.0 && p < 1.0; }

inline void require_prior(double mu, const char* op) {
  if (!in_open_unit(mu)) {
    throw DomainError(std::string(op) + ": prior must lie in (0,1), got " + std::to_string(mu));
  }
}

inline void require_probability(double p, const char* what, const char* op) {
  if (!in_unit(p)) {
    throw DomainError(std::string(op) + ": " + what + " must lie in [0,1], got " + std::to_string(p));
  }
}

// Unchecked kernels shared by the checked API and the regret search. Callers
// guarantee the preconditions.
inline double weighted_posterior(double w1, double p1, double w0, double p0) noexcept {
  const double num = w1 * p1;
  return num / (num + w0 * p0);
}

}  // namespace detail

inline void validate(const TwoSignalStructure& theta) {
  detail::require_prior(theta.mu, "TwoSignalStructure");
  for (const SignalChannel& c : {theta.first, theta.second}) {
    detail::require_probability(c.alpha, "alpha", "TwoSignalStructure");
    detail::require_probability(c.beta, "beta", "TwoSignalStructure");
  }
}

inline double logit(double p) {
  if (!detail::in_open_unit(p)) {
    throw DomainError("logit: argument must lie in (0,1), got " + std::to_string(p));
  }
  return std::log(p / (1.0 - p));
}

inline double inverse_logit(double t) noexcept {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

/// Base-rate-neglect posterior mu^l p1 / (mu^l p1 + (1-mu)^l p0).
inline double brn_posterior(double mu, double p1, double p0, double lambda) {
  detail::require_prior(mu, "brn_posterior");
  detail::require_probability(p1, "p1", "brn_posterior");
  detail::require_probability(p0, "p0", "brn_posterior");
  const double w1 = std::pow(mu, lambda);
  const double w0 = std::pow(1.0 - mu, lambda);
  if (w1 * p1 + w0 * p0 == 0.0) {
    throw DomainError("brn_posterior: signal has zero probability");
  }
  return detail::weighted_posterior(w1, p1, w0, p0);
}

/// Bayesian posterior; the lambda = 1 case of brn_posterior (same arithmetic).
inline double bayes_posterior(double mu, double p1, double p0) {
  return brn_posterior(mu, p1, p0, 1.0);
}

/// Maps a Bayesian posterior q to the report of a BRN expert with degree lambda:
/// logit(x) = logit(q) - (1 - lambda) logit(mu).
inline double brn_from_bayes(double q, double mu, double lambda) {
  detail::require_prior(mu, "brn_from_bayes");
  detail::require_probability(q, "q", "brn_from_bayes");
  const double k = 1.0 - lambda;
  return detail::weighted_posterior(std::pow(1.0 - mu, k), q, std::pow(mu, k), 1.0 - q);
}

/// Inverse of brn_from_bayes for fixed (mu, lambda).
inline double bayes_from_brn(double x, double mu, double lambda) {
  detail::require_prior(mu, "bayes_from_brn");
  detail::require_probability(x, "x", "bayes_from_brn");
  const double k = 1.0 - lambda;
  return detail::weighted_posterior(std::pow(mu, k), x, std::pow(1.0 - mu, k), 1.0 - x);
}

/// Joint likelihood of a signal profile under state `state`.
inline double profile_likelihood(const TwoSignalStructure& theta, SignalProfile s,
                                 bool state) noexcept {
  return theta.first.likelihood(s.first, state) * theta.second.likelihood(s.second, state);
}

/// Pr[S1 = s1, S2 = s2] under conditional independence.
inline double profile_probability(const TwoSignalStructure& theta, SignalProfile s) {
  validate(theta);
  return theta.mu * profile_likelihood(theta, s, true) +
         (1.0 - theta.mu) * profile_likelihood(theta, s, false);
}

/// Report of expert 1 (which = 0) or expert 2 (which = 1) upon signal s.
inline double expert_report(const TwoSignalStructure& theta, int which, Signal s,
                            double lambda) {
  const SignalChannel& c = which == 0 ? theta.first : theta.second;
  return brn_posterior(theta.mu, c.likelihood(s, true), c.likelihood(s, false), lambda);
}

/// Pr[state = 1 | S1 = s1, S2 = s2]: the omniscient aggregator f*.
inline double omniscient_from_structure(const TwoSignalStructure& theta, SignalProfile s) {
  validate(theta);
  const double a = theta.mu * profile_likelihood(theta, s, true);
  const double b = (1.0 - theta.mu) * profile_likelihood(theta, s, false);
  if (a + b == 0.0) {
    throw DomainError("omniscient_from_structure: profile has zero probability");
  }
  return a / (a + b);
}

/// The omniscient aggregator expressed through the two reports:
///
///   (1-mu)^(2l-1) x1 x2 / ((1-mu)^(2l-1) x1 x2 + mu^(2l-1) (1-x1)(1-x2))
///
/// Agrees with omniscient_from_structure when x_i are BRN reports with degree l.
inline double omniscient_from_predictions(double x1, double x2, double mu, double lambda) {
  detail::require_prior(mu, "omniscient_from_predictions");
  detail::require_probability(x1, "x1", "omniscient_from_predictions");
  detail::require_probability(x2, "x2", "omniscient_from_predictions");
  const double e = 2.0 * lambda - 1.0;
  const double num = std::pow(1.0 - mu, e) * x1 * x2;
  const double den = num + std::pow(mu, e) * (1.0 - x1) * (1.0 - x2);
  if (den == 0.0) {
    throw UndefinedAggregation("omniscient_from_predictions: reports (" + std::to_string(x1) +
                               ", " + std::to_string(x2) + ") cannot be combined");
  }
  return num / den;
}

}  // namespace brnagg

#endif  // BRNAGG_BELIEF_HPP
