// brnagg: command-line front end for regret curves, lower bounds and the
// empirical pipeline.
//
// Exit codes: 0 success, 1 runtime or computation failure, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "brnagg/brnagg.hpp"

namespace {

using nlohmann::ordered_json;
using namespace brnagg;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

/// Raised while interpreting flags; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Output: one table plus config and summary, rendered as CSV or JSON.

using Cell = std::variant<std::string, long long, double, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Output {
  ordered_json config = ordered_json::object();
  ordered_json summary = ordered_json::object();
  Table table;
};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return csv_field(*s);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  return std::get<bool>(c) ? "true" : "false";
}

ordered_json cell_json(const Cell& c) {
  return std::visit([](const auto& v) { return ordered_json(v); }, c);
}

std::string scalar_text(const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_double(v.get<double>());
  return v.dump();
}

void render(std::ostream& os, const Output& out, bool json) {
  if (json) {
    ordered_json doc;
    doc["config"] = out.config;
    doc["summary"] = out.summary;
    ordered_json rows = ordered_json::array();
    for (const auto& r : out.table.rows) {
      ordered_json row = ordered_json::object();
      for (std::size_t k = 0; k < r.size(); ++k) row[out.table.columns[k]] = cell_json(r[k]);
      rows.push_back(std::move(row));
    }
    doc["rows"] = std::move(rows);
    os << doc.dump(2) << '\n';
    return;
  }
  for (const auto& [k, v] : out.config.items()) os << "# config." << k << '=' << scalar_text(v) << '\n';
  for (const auto& [k, v] : out.summary.items()) os << "# summary." << k << '=' << scalar_text(v) << '\n';
  for (std::size_t k = 0; k < out.table.columns.size(); ++k) os << (k ? "," : "") << out.table.columns[k];
  os << '\n';
  for (const auto& r : out.table.rows) {
    for (std::size_t k = 0; k < r.size(); ++k) os << (k ? "," : "") << cell_text(r[k]);
    os << '\n';
  }
}

struct OutputFlags {
  std::string out;
  bool json = false;
};

void emit(const Output& out, const OutputFlags& f) {
  if (f.out.empty() || f.out == "-") {
    render(std::cout, out, f.json);
    std::cout.flush();
    return;
  }
  std::ofstream file(f.out, std::ios::binary);
  if (!file) throw Error("cannot open '" + f.out + "' for writing: " + std::strerror(errno));
  render(file, out, f.json);
  if (!file.flush()) throw Error("write to '" + f.out + "' failed");
}

// ---------------------------------------------------------------------------
// Flag interpretation

/// "start:end:step", a comma list, or a single value.
std::vector<double> parse_lambda_grid(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw UsageError("--lambda: not a number '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw UsageError("--lambda: not a number '" + s + "'");
    return v;
  };
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw UsageError("--lambda: range must be start:end:step");
    const double a = number(parts[0]), b = number(parts[1]), step = number(parts[2]);
    if (!(step > 0.0) || b < a) throw UsageError("--lambda: range needs step > 0 and end >= start");
    const auto n = static_cast<long long>(std::floor((b - a) / step + 1e-9));
    if (n > 100000) throw UsageError("--lambda: range has too many points");
    for (long long i = 0; i <= n; ++i) {
      // Snap to 12 decimals so 0.1 * 3 prints as 0.3.
      grid.push_back(std::round((a + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) grid.push_back(number(p));
  }
  for (double l : grid) {
    if (!(l >= 0.0 && l <= 1.0)) throw UsageError("--lambda: values must lie in [0,1], got " + format_double(l));
  }
  try {
    validate_grid(grid);
  } catch (const RangeError& e) {
    throw UsageError(std::string("--lambda: ") + e.what());
  }
  return grid;
}

AggregatorSpec parse_aggregator(const std::string& text) {
  try {
    return parse_spec(text);
  } catch (const ParseError& e) {
    throw UsageError("--aggregator: " + std::string(e.what()) + " at position " + std::to_string(e.position()));
  } catch (const RangeError& e) {
    throw UsageError("--aggregator: " + std::string(e.what()));
  }
}

struct OptimizerFlags {
  std::string lambda = "0:1:0.1";
  double grid_step = 0.05;
  int restarts = 32;
  int local_iters = 200;
  double boundary_eps = 1e-9;
  std::uint64_t seed = 20240611;
  int threads = 0;
};

void add_optimizer_flags(CLI::App* cmd, OptimizerFlags& f) {
  cmd->add_option("--lambda", f.lambda, "Degrees: start:end:step or a comma list")->capture_default_str();
  cmd->add_option("--grid-step", f.grid_step, "Coarse scan resolution per axis")->capture_default_str();
  cmd->add_option("--restarts", f.restarts, "Local refinements per degree")->capture_default_str();
  cmd->add_option("--local-iters", f.local_iters, "Nelder-Mead iterations per refinement")->capture_default_str();
  cmd->add_option("--boundary-eps", f.boundary_eps, "Search box is [eps, 1-eps]^5")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Seed for extra random restarts")->capture_default_str();
  cmd->add_option("--threads", f.threads, "Worker threads, 0 = all cores")
      ->envname("BRNAGG_THREADS")
      ->capture_default_str();
}

OptimizerConfig to_config(const OptimizerFlags& f) {
  OptimizerConfig cfg;
  cfg.lambda_grid = parse_lambda_grid(f.lambda);
  cfg.grid_step = f.grid_step;
  cfg.restarts = f.restarts;
  cfg.local_iters = f.local_iters;
  cfg.boundary_eps = f.boundary_eps;
  cfg.seed = f.seed;
  cfg.threads = f.threads;
  try {
    validate(cfg);
  } catch (const RangeError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

void echo(ordered_json& j, const OptimizerConfig& cfg) {
  j["lambda"] = cfg.lambda_grid;
  j["grid_step"] = cfg.grid_step;
  j["restarts"] = cfg.restarts;
  j["local_iters"] = cfg.local_iters;
  j["boundary_eps"] = cfg.boundary_eps;
  j["seed"] = cfg.seed;
  // Thread count does not change results and is left out so outputs compare equal.
}

std::vector<Cell> witness_cells(const TwoSignalStructure& t) {
  return {t.mu, t.first.alpha, t.first.beta, t.second.alpha, t.second.beta};
}

std::vector<PredictionRecord> read_data(const std::string& path) {
  if (path.empty()) throw UsageError("--data is required");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "': " + std::strerror(errno));
  try {
    return load_dataset(in);
  } catch (const DataError& e) {
    throw Error(path + ":" + std::to_string(e.line()) + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Commands. Each returns its exit code; flag problems throw UsageError.

struct RegretFlags {
  std::string aggregator;
  OptimizerFlags opt;
};

int cmd_regret(const RegretFlags& f, const OutputFlags& of) {
  const AggregatorSpec spec = parse_aggregator(f.aggregator);
  const OptimizerConfig cfg = to_config(f.opt);
  Output out;
  out.config["command"] = "regret";
  out.config["aggregator"] = format_spec(spec);
  echo(out.config, cfg);
  const RegretCurve curve = regret_curve(spec, cfg);
  out.table.columns = {"lambda", "regret", "mu", "alpha1", "beta1", "alpha2", "beta2", "skipped"};
  for (std::size_t i = 0; i < curve.lambdas.size(); ++i) {
    std::vector<Cell> row{curve.lambdas[i], curve.values[i]};
    for (auto& c : witness_cells(curve.witnesses[i])) row.push_back(c);
    row.emplace_back(static_cast<long long>(curve.skipped[i]));
    out.table.rows.push_back(std::move(row));
  }
  emit(out, of);
  return 0;
}

struct LowerBoundFlags {
  std::string lambda = "0:1:0.1";
  double eps = 1e-6;
};

int cmd_lower_bound(const LowerBoundFlags& f, const OutputFlags& of) {
  const std::vector<double> grid = parse_lambda_grid(f.lambda);
  if (!(f.eps > 0.0 && f.eps < 0.25)) throw UsageError("--eps must lie in (0, 0.25)");
  Output out;
  out.config["command"] = "lower-bound";
  out.config["lambda"] = grid;
  out.config["eps"] = f.eps;
  out.table.columns = {"lambda", "lower_bound", "gamma"};
  std::vector<double> values;
  for (double l : grid) {
    const LowerBound lb = lower_bound(l, f.eps);
    values.push_back(lb.value);
    out.table.rows.push_back({l, lb.value, lb.gamma});
  }
  const std::size_t trough =
      static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  out.summary["trough_lambda"] = grid[trough];
  emit(out, of);
  return 0;
}

struct OverallFlags {
  std::string aggregator;
  OptimizerFlags opt;
  double lb_eps = 1e-6;
};

int cmd_overall(const OverallFlags& f, const OutputFlags& of) {
  const AggregatorSpec spec = parse_aggregator(f.aggregator);
  const OptimizerConfig cfg = to_config(f.opt);
  if (!(f.lb_eps > 0.0 && f.lb_eps < 0.25)) throw UsageError("--lb-eps must lie in (0, 0.25)");
  Output out;
  out.config["command"] = "overall";
  out.config["aggregator"] = format_spec(spec);
  echo(out.config, cfg);
  out.config["lb_eps"] = f.lb_eps;
  const OverallRegret o = overall_regret_upper(spec, cfg, f.lb_eps);
  out.summary["overall_regret"] = o.value;
  out.summary["at_lambda"] = o.lambda;
  out.table.columns = {"lambda", "regret", "lower_bound", "gap"};
  for (std::size_t i = 0; i < o.curve.lambdas.size(); ++i) {
    out.table.rows.push_back(
        {o.curve.lambdas[i], o.curve.values[i], o.bounds[i], o.curve.values[i] - o.bounds[i]});
  }
  emit(out, of);
  return 0;
}

struct CurveCheckFlags {
  std::string aggregator;
  OptimizerFlags opt;
  double tol = 2e-3;
  double eps = 1e-6;
};

/// Exits 1 when the curve is not single-troughed.
int cmd_curve_check(const CurveCheckFlags& f, const OutputFlags& of) {
  if (!(f.tol >= 0.0)) throw UsageError("--tol must be non-negative");
  Output out;
  out.config["command"] = "curve-check";
  RegretCurve curve;
  if (f.aggregator == "lower-bound") {
    const std::vector<double> grid = parse_lambda_grid(f.opt.lambda);
    if (!(f.eps > 0.0 && f.eps < 0.25)) throw UsageError("--eps must lie in (0, 0.25)");
    if (grid.size() < 3) throw UsageError("--lambda: the check needs at least 3 degrees");
    out.config["curve"] = "lower-bound";
    out.config["lambda"] = grid;
    out.config["eps"] = f.eps;
    curve = lower_bound_curve(grid, f.eps);
  } else {
    const AggregatorSpec spec = parse_aggregator(f.aggregator);
    const OptimizerConfig cfg = to_config(f.opt);
    if (cfg.lambda_grid.size() < 3) throw UsageError("--lambda: the check needs at least 3 degrees");
    out.config["curve"] = format_spec(spec);
    echo(out.config, cfg);
    curve = regret_curve(spec, cfg);
  }
  out.config["tol"] = f.tol;
  const TroughReport rep = single_trough_check(curve, f.tol);
  out.summary["single_troughed"] = rep.single_troughed;
  out.summary["trough_lambda"] = curve.lambdas[rep.trough];
  if (rep.violation) {
    out.summary["violation_from_lambda"] = curve.lambdas[*rep.violation];
    out.summary["violation_size"] = rep.violation_size;
  }
  out.table.columns = {"lambda", "value"};
  for (std::size_t i = 0; i < curve.lambdas.size(); ++i) out.table.rows.push_back({curve.lambdas[i], curve.values[i]});
  emit(out, of);
  return rep.single_troughed ? 0 : kExitFailure;
}

// Empirical pipeline

struct EvalFlags {
  std::string data;
  std::vector<std::string> aggregators;
  bool bayesian = false;
  bool subsample = false;
  std::string pairs_out;
};

std::vector<std::string> default_eval_specs() {
  std::vector<std::string> s{"simple-average", "average-prior"};
  for (int k = 1; k <= 9; ++k) s.push_back(format_spec(AggregatorSpec::balancing(k / 10.0)));
  return s;
}

int cmd_eval(const EvalFlags& f, const OutputFlags& of) {
  std::vector<AggregatorSpec> specs;
  for (const auto& a : f.aggregators.empty() ? default_eval_specs() : f.aggregators) {
    specs.push_back(parse_aggregator(a));
  }
  std::vector<PredictionRecord> recs = read_data(f.data);
  if (f.bayesian) recs = substitute_bayes(std::move(recs));
  EvaluationOptions opt;
  opt.subsamples = f.subsample;
  const EvaluationReport rep = evaluate_aggregators(recs, specs, opt);

  Output out;
  out.config["command"] = "empirical eval";
  out.config["data"] = f.data;
  ordered_json names = ordered_json::array();
  for (const auto& s : specs) names.push_back(format_spec(s));
  out.config["aggregators"] = names;
  out.config["bayesian_posteriors"] = f.bayesian;
  out.config["subsample"] = f.subsample;
  out.summary["records"] = recs.size();
  out.summary["case_pairs"] = rep.case_pairs.size();

  if (f.subsample) {
    out.table.columns = {"subsample", "aggregator", "mean_loss", "pairs"};
    for (Subsample b : kSubsamples) {
      const auto& stats = rep.subsamples.at(b);
      for (std::size_t k = 0; k < specs.size(); ++k) {
        out.table.rows.push_back({std::string(to_string(b)), format_spec(specs[k]), stats[k].mean_loss,
                                  static_cast<long long>(stats[k].pairs)});
      }
    }
  } else {
    out.table.columns = {"aggregator", "average_loss", "max_loss", "case_pairs", "pairs_used", "pairs_excluded"};
    for (std::size_t k = 0; k < specs.size(); ++k) {
      const AggregatorSummary& s = rep.summaries[k];
      out.table.rows.push_back({format_spec(specs[k]), s.average_loss, s.max_loss,
                                static_cast<long long>(s.case_pairs), static_cast<long long>(s.pairs_used),
                                static_cast<long long>(s.pairs_excluded)});
    }
  }
  emit(out, of);

  if (!f.pairs_out.empty()) {
    Output pairs;
    pairs.config = out.config;
    pairs.table.columns = {"aggregator", "case1", "case2", "mu", "loss", "pairs_used", "pairs_excluded"};
    auto label = [](const CaseKey& k) { return std::to_string(k.le) + "/" + std::to_string(k.ri); };
    for (std::size_t k = 0; k < specs.size(); ++k) {
      for (const auto& cp : rep.case_pairs) {
        const EmpiricalLoss& l = cp.losses[k];
        pairs.table.rows.push_back({format_spec(specs[k]), label(cp.first), label(cp.second),
                                    cp.first.mu / 100.0, l.loss ? Cell(*l.loss) : Cell(std::string("")),
                                    static_cast<long long>(l.pairs_used),
                                    static_cast<long long>(l.pairs_excluded)});
      }
    }
    emit(pairs, {f.pairs_out, of.json});
  }
  return 0;
}

int cmd_classify(const std::string& data, const OutputFlags& of) {
  const auto recs = read_data(data);
  const ClassificationSummary s = classify_all(recs);
  Output out;
  out.config["command"] = "empirical classify";
  out.config["data"] = data;
  out.summary["classified"] = s.classified;
  out.summary["excluded"] = s.excluded;
  for (ResponseLabel l : {ResponseLabel::PerfectBayes, ResponseLabel::PerfectBRN, ResponseLabel::Inside,
                          ResponseLabel::Outside}) {
    out.summary[std::string(to_string(l)) + "_share"] = s.share(l);
  }
  out.summary["prior_report_share"] = s.prior_share();

  // One row per (round, signal, label); prior_report rows overlap the others.
  out.table.columns = {"round", "signal", "label", "count", "share"};
  for (const auto& [key, total] : s.totals) {
    const auto [round, signal] = key;
    auto row = [&](const std::string& name, std::size_t n) {
      out.table.rows.push_back({static_cast<long long>(round), std::string(1, to_char(signal)), name,
                                static_cast<long long>(n), static_cast<double>(n) / static_cast<double>(total)});
    };
    for (ResponseLabel l : {ResponseLabel::PerfectBayes, ResponseLabel::PerfectBRN, ResponseLabel::Inside,
                            ResponseLabel::Outside}) {
      const auto it = s.counts.find({round, signal, l});
      row(to_string(l), it == s.counts.end() ? 0 : it->second);
    }
    const auto p = s.prior_reports.find(key);
    row("prior_report", p == s.prior_reports.end() ? 0 : p->second);
  }
  emit(out, of);
  return 0;
}

int cmd_lambda(const std::string& data, std::optional<double> clamp, const OutputFlags& of) {
  LambdaOptions opt;
  if (clamp) {
    if (!(*clamp > 0.0 && *clamp < 0.5)) throw UsageError("--clamp must lie in (0, 0.5)");
    opt.clamp = clamp;
  }
  const auto recs = read_data(data);
  const LambdaTable t = estimate_all_lambdas(recs, opt);
  Output out;
  out.config["command"] = "empirical lambda";
  out.config["data"] = data;
  out.config["clamp"] = clamp ? ordered_json(*clamp) : ordered_json("drop");
  out.summary["subjects"] = t.estimates.size();
  out.summary["failures"] = t.failures.size();
  out.table.columns = {"subject_id", "lambda_hat", "beta_hat", "n_rounds_used"};
  for (const auto& e : t.estimates) {
    out.table.rows.push_back({e.subject_id, e.lambda_hat, e.beta_hat, static_cast<long long>(e.n_rounds_used)});
  }
  for (const auto& [id, why] : t.failures) std::cerr << "brnagg: skipped subject " << id << ": " << why << '\n';
  emit(out, of);
  return 0;
}

int cmd_synth(const SynthOptions& opt, const OutputFlags& of) {
  if (of.json) throw UsageError("empirical synth writes the dataset CSV format only");
  std::vector<PredictionRecord> recs;
  try {
    recs = synth_generate(opt);
  } catch (const RangeError& e) {
    throw UsageError(e.what());
  }
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "# config.command=empirical synth\n# config.subjects=%d\n# config.lambda=%s\n"
                "# config.cases=%d\n# config.noise_sd=%s\n# config.seed=%llu\n",
                opt.n_subjects, format_double(opt.lambda).c_str(), opt.cases_per_subject,
                format_double(opt.noise_sd).c_str(), static_cast<unsigned long long>(opt.seed));
  os << buf;
  write_dataset(os, recs);
  if (of.out.empty() || of.out == "-") {
    std::cout << os.str();
    std::cout.flush();
  } else {
    std::ofstream file(of.out, std::ios::binary);
    if (!file) throw Error("cannot open '" + of.out + "' for writing: " + std::strerror(errno));
    file << os.str();
  }
  return 0;
}

void report_error(const std::string& kind, const std::string& message, int code, bool as_json) {
  if (as_json) {
    ordered_json j;
    j["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
    std::cerr << j.dump() << '\n';
  } else {
    std::cerr << "brnagg: " << message << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust aggregation of base-rate-neglecting forecasts"};
  app.require_subcommand(1);
  OutputFlags of;
  bool error_json = false;
  app.add_flag("--error-json", error_json, "Print errors to stderr as JSON");

  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--out", of.out, "Output file, - for stdout");
    cmd->add_flag("--json", of.json, "Write JSON instead of CSV");
    cmd->add_flag("--error-json", error_json, "Print errors to stderr as JSON");
  };

  RegretFlags regret;
  auto* c_regret = app.add_subcommand("regret", "Worst-case regret per degree");
  c_regret->add_option("--aggregator", regret.aggregator, "simple-average | average-prior | balance:<l>")->required();
  add_optimizer_flags(c_regret, regret.opt);
  add_output(c_regret);

  LowerBoundFlags lb;
  auto* c_lb = app.add_subcommand("lower-bound", "Analytic regret lower bound per degree");
  c_lb->add_option("--lambda", lb.lambda, "Degrees: start:end:step or a comma list")->capture_default_str();
  c_lb->add_option("--eps", lb.eps, "Inner search interval is [eps, 1/2]")->capture_default_str();
  add_output(c_lb);

  OverallFlags overall;
  auto* c_overall = app.add_subcommand("overall", "Max gap between regret and lower bound over degrees");
  c_overall->add_option("--aggregator", overall.aggregator, "Aggregator spec")->required();
  add_optimizer_flags(c_overall, overall.opt);
  c_overall->add_option("--lb-eps", overall.lb_eps, "Lower-bound search eps")->capture_default_str();
  add_output(c_overall);

  CurveCheckFlags check;
  auto* c_check = app.add_subcommand("curve-check", "Single-trough check of a regret or lower-bound curve");
  c_check->add_option("--aggregator", check.aggregator, "Aggregator spec, or lower-bound")->required();
  add_optimizer_flags(c_check, check.opt);
  c_check->add_option("--tol", check.tol, "Allowed wrong-way step")->capture_default_str();
  c_check->add_option("--eps", check.eps, "Lower-bound search eps")->capture_default_str();
  add_output(c_check);

  auto* c_emp = app.add_subcommand("empirical", "Prediction dataset pipeline");
  c_emp->require_subcommand(1);

  EvalFlags eval;
  auto* c_eval = c_emp->add_subcommand("eval", "Empirical relative loss of aggregators");
  c_eval->add_option("--data", eval.data, "Dataset CSV")->required();
  c_eval->add_option("--aggregator", eval.aggregators, "Repeatable; default: the standard eleven rules");
  c_eval->add_flag("--bayesian-posteriors", eval.bayesian, "Replace reports by rounded Bayes posteriors");
  c_eval->add_flag("--subsample", eval.subsample, "Break losses down by report composition");
  c_eval->add_option("--pairs-out", eval.pairs_out, "Also write the per case-pair loss table");
  add_output(c_eval);

  std::string classify_data;
  auto* c_classify = c_emp->add_subcommand("classify", "Response classification proportions");
  c_classify->add_option("--data", classify_data, "Dataset CSV")->required();
  add_output(c_classify);

  std::string lambda_data;
  std::optional<double> clamp;
  auto* c_lambda = c_emp->add_subcommand("lambda", "Per-subject consideration degree");
  c_lambda->add_option("--data", lambda_data, "Dataset CSV")->required();
  c_lambda->add_option("--clamp", clamp, "Clamp 0%/100% reports to [d, 1-d] instead of dropping");
  add_output(c_lambda);

  SynthOptions synth;
  auto* c_synth = c_emp->add_subcommand("synth", "Generate synthetic subjects");
  c_synth->add_option("--subjects", synth.n_subjects)->capture_default_str();
  c_synth->add_option("--lambda", synth.lambda, "Consideration degree")->capture_default_str();
  c_synth->add_option("--cases", synth.cases_per_subject, "Cases per subject")->capture_default_str();
  c_synth->add_option("--noise", synth.noise_sd, "Log-odds noise sd")->capture_default_str();
  c_synth->add_option("--seed", synth.seed)->capture_default_str();
  add_output(c_synth);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*c_regret) return cmd_regret(regret, of);
    if (*c_lb) return cmd_lower_bound(lb, of);
    if (*c_overall) return cmd_overall(overall, of);
    if (*c_check) return cmd_curve_check(check, of);
    if (*c_eval) return cmd_eval(eval, of);
    if (*c_classify) return cmd_classify(classify_data, of);
    if (*c_lambda) return cmd_lambda(lambda_data, clamp, of);
    if (*c_synth) return cmd_synth(synth, of);
  } catch (const UsageError& e) {
    report_error("usage", e.what(), kExitUsage, error_json);
    return kExitUsage;
  } catch (const Error& e) {
    report_error("runtime", e.what(), kExitFailure, error_json);
    return kExitFailure;
  } catch (const std::exception& e) {
    report_error("internal", e.what(), kExitFailure, error_json);
    return kExitFailure;
  }
  return kExitUsage;
}
