#ifndef BRNAGG_AGGREGATORS_HPP
#define BRNAGG_AGGREGATORS_HPP

#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

#include "brnagg/errors.hpp"

namespace brnagg {

enum class AggregatorKind { SimpleAverage, AveragePrior, Balancing };

/// A named aggregation rule. `lambda_hat` is meaningful only for Balancing.
///
/// Balancing assumes the experts are BRN with degree lambda_hat and uses the
/// mean report as a stand-in for the unknown prior:
///
///   m = (x1 + x2) / 2,  e = 2 lambda_hat - 1
///   f(x1, x2) = (1-m)^e x1 x2 / ((1-m)^e x1 x2 + m^e (1-x1)(1-x2))
///
/// AveragePrior is Balancing with lambda_hat = 1 and is evaluated through the
/// identical code path.
struct AggregatorSpec {
  AggregatorKind kind = AggregatorKind::SimpleAverage;
  double lambda_hat = 1.0;

  static AggregatorSpec simple_average() { return {AggregatorKind::SimpleAverage, 1.0}; }
  static AggregatorSpec average_prior() { return {AggregatorKind::AveragePrior, 1.0}; }
  static AggregatorSpec balancing(double lambda_hat) {
    if (!(lambda_hat >= 0.0 && lambda_hat <= 1.0)) {
      throw RangeError("balancing degree must lie in [0,1], got " + std::to_string(lambda_hat));
    }
    return {AggregatorKind::Balancing, lambda_hat};
  }

  /// The degree used by the balancing formula (1 for AveragePrior).
  double effective_lambda_hat() const noexcept {
    return kind == AggregatorKind::AveragePrior ? 1.0 : lambda_hat;
  }

  friend bool operator==(const AggregatorSpec& a, const AggregatorSpec& b) noexcept {
    if (a.kind != b.kind) return false;
    return a.kind != AggregatorKind::Balancing || a.lambda_hat == b.lambda_hat;
  }
};

namespace detail {

inline std::optional<double> balance(double lambda_hat, double x1, double x2) noexcept {
  // Same-corner inputs: the formula is 0/0 or inf/inf there but the limit along
  // the diagonal is the corner itself for every lambda_hat in [0,1].
  if (x1 == x2 && (x1 == 0.0 || x1 == 1.0)) return x1;
  const double m = 0.5 * (x1 + x2);
  const double e = 2.0 * lambda_hat - 1.0;
  // Products grouped so that swapping the experts is bit-exact.
  const double num = std::pow(1.0 - m, e) * (x1 * x2);
  const double den = num + std::pow(m, e) * ((1.0 - x1) * (1.0 - x2));
  if (!(den > 0.0) || !std::isfinite(den)) return std::nullopt;
  return num / den;
}

}  // namespace detail

/// Applies the rule; std::nullopt when the result is undefined (e.g. reports 0 and 1).
inline std::optional<double> try_aggregate(const AggregatorSpec& spec, double x1,
                                           double x2) noexcept {
  if (spec.kind == AggregatorKind::SimpleAverage) return 0.5 * (x1 + x2);
  return detail::balance(spec.effective_lambda_hat(), x1, x2);
}

inline double aggregate(const AggregatorSpec& spec, double x1, double x2) {
  if (!(x1 >= 0.0 && x1 <= 1.0 && x2 >= 0.0 && x2 <= 1.0)) {
    throw DomainError("aggregate: reports must lie in [0,1]");
  }
  if (auto v = try_aggregate(spec, x1, x2)) return *v;
  throw UndefinedAggregation("aggregate: reports (" + std::to_string(x1) + ", " +
                             std::to_string(x2) + ") cannot be combined");
}

/// Canonical text: "simple-average", "average-prior" or "balance:0.70".
inline std::string format_spec(const AggregatorSpec& spec) {
  switch (spec.kind) {
    case AggregatorKind::SimpleAverage:
      return "simple-average";
    case AggregatorKind::AveragePrior:
      return "average-prior";
    case AggregatorKind::Balancing:
      break;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "balance:%.2f", spec.lambda_hat);
  return buf;
}

inline AggregatorSpec parse_spec(std::string_view text) {
  if (text == "simple-average") return AggregatorSpec::simple_average();
  if (text == "average-prior") return AggregatorSpec::average_prior();

  constexpr std::string_view prefix = "balance:";
  if (text.substr(0, prefix.size()) != prefix) {
    std::size_t pos = 0;
    while (pos < text.size() && pos < prefix.size() && text[pos] == prefix[pos]) ++pos;
    throw ParseError("expected 'simple-average', 'average-prior' or 'balance:<degree>', got '" +
                         std::string(text) + "'",
                     pos);
  }
  const std::string_view number = text.substr(prefix.size());
  if (number.empty()) throw ParseError("missing degree after 'balance:'", prefix.size());
  // Plain decimals only: digits with at most one '.'.
  bool seen_dot = false;
  bool seen_digit = false;
  for (std::size_t i = 0; i < number.size(); ++i) {
    const char c = number[i];
    if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      seen_digit = true;
    } else {
      throw ParseError("unexpected character '" + std::string(1, c) + "' in degree",
                       prefix.size() + i);
    }
  }
  if (!seen_digit) throw ParseError("degree has no digits", prefix.size());
  double value = 0.0;
  const auto res = std::from_chars(number.data(), number.data() + number.size(), value);
  if (res.ec != std::errc{} || res.ptr != number.data() + number.size()) {
    throw ParseError("malformed degree '" + std::string(number) + "'", prefix.size());
  }
  return AggregatorSpec::balancing(value);
}

}  // namespace brnagg

#endif  // BRNAGG_AGGREGATORS_HPP
