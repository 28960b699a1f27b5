#ifndef BRNAGG_DATASET_IO_HPP
#define BRNAGG_DATASET_IO_HPP

// Prediction dataset CSV:
//
//   subject_id,round,p_left_red,p_right_red,mu,signal,prediction_pct
//
// Columns may appear in any order; extra columns are ignored. Case parameters
// are decimals on the tenths grid, signal is r or b, prediction_pct is an
// integer percent. Blank lines and lines starting with '#' are skipped.

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "brnagg/empirical.hpp"
#include "brnagg/errors.hpp"

namespace brnagg {

inline constexpr std::array<std::string_view, 7> kDatasetColumns{
    "subject_id", "round", "p_left_red", "p_right_red", "mu", "signal", "prediction_pct"};

/// Row-level ingestion failure.
class DatasetError : public DataError {
 public:
  enum class Kind { Parse, Range, UnknownSignal };

  DatasetError(Kind kind, const std::string& what, std::size_t line)
      : DataError(what, line), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

/// Splits one CSV line; double-quoted fields may contain commas and "" escapes.
inline std::vector<std::string> split_csv(std::string_view line, std::size_t lineno) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw DatasetError(DatasetError::Kind::Parse, "unterminated quoted field", lineno);
  out.emplace_back(trim(cur));
  return out;
}

inline double parse_tenth(std::string_view field, const char* name, std::size_t lineno) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw DatasetError(DatasetError::Kind::Parse,
                       std::string(name) + ": not a number '" + std::string(field) + "'", lineno);
  }
  if (!(v > 0.0 && v < 1.0) || std::abs(v * 10.0 - std::round(v * 10.0)) > 1e-9) {
    throw DatasetError(DatasetError::Kind::Range,
                       std::string(name) + " must be one of 0.1, ..., 0.9, got " + std::string(field),
                       lineno);
  }
  return std::round(v * 10.0) / 10.0;
}

inline int parse_int(std::string_view field, const char* name, std::size_t lineno) {
  int v = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw DatasetError(DatasetError::Kind::Parse,
                       std::string(name) + ": not an integer '" + std::string(field) + "'", lineno);
  }
  return v;
}

}  // namespace detail

inline std::vector<PredictionRecord> load_dataset(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::array<std::size_t, 7>> col;
  std::vector<PredictionRecord> out;

  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    const std::string_view t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = detail::split_csv(line, lineno);
    if (!col) {
      std::array<std::size_t, 7> idx{};
      for (std::size_t k = 0; k < kDatasetColumns.size(); ++k) {
        std::size_t found = fields.size();
        for (std::size_t f = 0; f < fields.size(); ++f) {
          if (fields[f] == kDatasetColumns[k]) found = f;
        }
        if (found == fields.size()) {
          throw DatasetError(DatasetError::Kind::Parse,
                             "header is missing column '" + std::string(kDatasetColumns[k]) + "'", lineno);
        }
        idx[k] = found;
      }
      col = idx;
      continue;
    }
    const auto& c = *col;
    std::size_t needed = 0;
    for (std::size_t k : c) needed = std::max(needed, k + 1);
    if (fields.size() < needed) {
      throw DatasetError(DatasetError::Kind::Parse,
                         "expected at least " + std::to_string(needed) + " fields, got " +
                             std::to_string(fields.size()),
                         lineno);
    }
    PredictionRecord r;
    r.subject_id = fields[c[0]];
    if (r.subject_id.empty()) throw DatasetError(DatasetError::Kind::Parse, "empty subject_id", lineno);
    r.round = detail::parse_int(fields[c[1]], "round", lineno);
    if (r.round < 1) throw DatasetError(DatasetError::Kind::Range, "round must be >= 1", lineno);
    r.task.p_le = detail::parse_tenth(fields[c[2]], "p_left_red", lineno);
    r.task.p_ri = detail::parse_tenth(fields[c[3]], "p_right_red", lineno);
    r.task.mu = detail::parse_tenth(fields[c[4]], "mu", lineno);
    const std::string& sig = fields[c[5]];
    if (sig == "r") {
      r.signal = Signal::Red;
    } else if (sig == "b") {
      r.signal = Signal::Blue;
    } else {
      throw DatasetError(DatasetError::Kind::UnknownSignal, "unknown signal '" + sig + "' (expected r or b)",
                         lineno);
    }
    r.prediction = detail::parse_int(fields[c[6]], "prediction_pct", lineno);
    if (r.prediction < 0 || r.prediction > 100) {
      throw DatasetError(DatasetError::Kind::Range,
                         "prediction_pct must lie in 0..100, got " + std::to_string(r.prediction), lineno);
    }
    out.push_back(std::move(r));
  }
  if (!col) throw DatasetError(DatasetError::Kind::Parse, "empty input: header required", 0);
  return out;
}

inline void write_dataset(std::ostream& out, std::span<const PredictionRecord> records) {
  for (std::size_t k = 0; k < kDatasetColumns.size(); ++k) out << (k ? "," : "") << kDatasetColumns[k];
  out << '\n';
  char buf[64];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, ",%d,%.1f,%.1f,%.1f,%c,%d\n", r.round, r.task.p_le, r.task.p_ri,
                  r.task.mu, to_char(r.signal), r.prediction);
    if (r.subject_id.find_first_of(",\"") == std::string::npos) {
      out << r.subject_id;
    } else {
      out << '"';
      for (char ch : r.subject_id) out << (ch == '"' ? "\"\"" : std::string(1, ch));
      out << '"';
    }
    out << buf;
  }
}

}  // namespace brnagg

#endif  // BRNAGG_DATASET_IO_HPP
