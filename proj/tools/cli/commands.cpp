#include "cli/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "cli/output.hpp"
#include "cli/validation.hpp"
#include "fascopula/errors.hpp"
#include "fascopula/montecarlo.hpp"
#include "fascopula/parallel.hpp"

#ifndef FASCOPULA_VERSION
#define FASCOPULA_VERSION "unknown"
#endif

namespace fascopula::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kMaxGridPoints = 1000000;

struct Options {
  int ports = 1;
  double width = 1.0;
  double m = 1.0;
  double mu = 1.0;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  std::string report_format = "text";
  double mvn_tol = 1e-6;
  std::size_t mc_samples = 0;
  unsigned threads = 0;
  std::string timestamp;
  std::string fault = "none";

  double gamma_th_db = 10.0;
  std::string gamma_bar_db;
  std::string data_kbits;
  std::string bandwidth_mhz;
  std::string deadline_ms;
  std::string sweep = "snr";
  std::string r_grid = "0:3:0.02";
  std::vector<double> widths = {0.05, 0.1, 0.5, 1, 2, 4, 6};
  std::string source = "copula-uniform";
  std::size_t n = 1000;
  bool quick = false;
};

Fault fault_of(const Options& o) { return o.fault == "j0-sign" ? Fault::j0_sign : Fault::none; }

std::string num(double x) { return format_number(x); }

RunManifest start_manifest(const std::string& command, const Options& o) {
  RunManifest m;
  m.command = command;
  m.seed = o.seed;
  m.version = FASCOPULA_VERSION;
  if (!o.timestamp.empty()) {
    m.timestamp = o.timestamp;
  } else if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env && *env) {
    m.timestamp = env;
  } else {
    m.timestamp = "unset";
  }
  return m;
}

void finish_manifest(RunManifest& m, const Options& o) {
  if (fault_of(o) != Fault::none) m.add("inject-fault", o.fault);
}

void add_model_params(RunManifest& m, const Options& o, bool with_ports) {
  if (with_ports) m.add("ports", std::to_string(o.ports));
  m.add("width", num(o.width));
  m.add("m", num(o.m));
  m.add("mu", num(o.mu));
}

struct Model {
  FasConfig config;
  NakagamiMarginal marginal;
  JakesCorrelation corr;
};

Model build_model(const Options& o, int ports) {
  FasConfig config{ports, o.width};
  config.validate();
  NakagamiMarginal marginal(o.m, o.mu);
  return {config, marginal, model_correlation(config, fault_of(o))};
}

bool half_integer_shape(double m) {
  return m >= 0.5 && std::isfinite(m) && 2.0 * m == std::round(2.0 * m);
}

MvnOptions row_mvn(const Options& o) {
  MvnOptions opts;
  opts.abs_tol = o.mvn_tol;
  opts.threads = 1;  // grid points already run in parallel
  return opts;
}

// Per-row evaluation failures: collected by row index, reported in order.
class FailureLog {
 public:
  explicit FailureLog(std::size_t rows) : messages_(rows) {}

  template <class F>
  Cell eval(std::size_t row, F&& f) {
    try {
      const double v = f();
      if (std::isnan(v)) messages_[row] += "NaN result; ";
      return v;
    } catch (const std::exception& e) {
      const std::string what = std::string(e.what()) + "; ";
      if (messages_[row].find(what) == std::string::npos) messages_[row] += what;
      return kNaN;
    }
  }

  void whole(const std::string& what) { global_ += what + "; "; }

  int report(std::ostream& err, const std::vector<double>& grid) const {
    int failed = global_.empty() ? 0 : 1;
    if (!global_.empty()) err << "error: " << global_ << "\n";
    for (std::size_t i = 0; i < messages_.size(); ++i) {
      if (messages_[i].empty()) continue;
      ++failed;
      err << fmt::format("error at grid point {} ({}): {}\n", i, num(grid[i]), messages_[i]);
    }
    return failed == 0 ? kExitOk : kExitFailure;
  }

 private:
  std::vector<std::string> messages_;
  std::string global_;
};

int emit(const Options& o, const std::string& text, std::ostream& out, std::ostream& err) {
  if (o.out.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream file(o.out, std::ios::binary);
  file << text;
  if (!file) {
    err << "error: cannot write " << o.out << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

Format format_of(const Options& o) { return o.format == "json" ? Format::json : Format::csv; }

// Monte Carlo best-port cdf columns (estimate, standard error) at the given
// thresholds; the Jakes pair only for half-integer m.
void append_mc_columns(const Options& o, const Model& model, const std::string& prefix,
                       const std::vector<double>& thresholds, Table& table, FailureLog& log) {
  if (o.mc_samples == 0) return;
  auto add = [&](const std::string& name, auto&& compute) {
    table.columns.push_back(prefix + "_" + name + "_mc");
    table.columns.push_back(prefix + "_" + name + "_stderr");
    std::vector<McEstimate> est;
    try {
      est = compute();
    } catch (const std::exception& e) {
      log.whole(name + " Monte Carlo: " + e.what());
    }
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      table.rows[i].push_back(est.empty() ? Cell(kNaN) : Cell(est[i].value));
      table.rows[i].push_back(est.empty() ? Cell(kNaN) : Cell(est[i].std_err));
    }
  };
  add("copula", [&] {
    return copula_best_port_cdf(model.corr.matrix, model.marginal, thresholds, o.mc_samples,
                                o.seed, o.threads);
  });
  if (half_integer_shape(o.m)) {
    add("jakes", [&] {
      return jakes_direct_best_port_cdf(model.corr.matrix, o.m, o.mu, thresholds, o.mc_samples,
                                        o.seed, o.threads);
    });
  }
}

int cmd_op_curve(const Options& o, std::ostream& out, std::ostream& err) {
  const Model model = build_model(o, o.ports);
  const Grid grid = parse_grid(o.gamma_bar_db.empty() ? "0:25:1" : o.gamma_bar_db);
  if (!std::isfinite(o.gamma_th_db)) throw UsageError("--gamma-th-db must be finite");
  const double gamma_th = db_to_linear(o.gamma_th_db);
  const MvnOptions mvn = row_mvn(o);
  const CorrelationMatrix siso = CorrelationMatrix::identity(1);

  RunManifest manifest = start_manifest("op-curve", o);
  add_model_params(manifest, o, true);
  manifest.add("gamma-th-db", num(o.gamma_th_db));
  manifest.add("gamma-bar-db", grid.text);
  manifest.add("mc-samples", std::to_string(o.mc_samples));
  manifest.add("mvn-tol", num(o.mvn_tol));
  manifest.add("format", o.format);
  finish_manifest(manifest, o);
  manifest.note("jakes-repaired", model.corr.repaired ? "true" : "false");

  Table table;
  table.columns = {"gamma_bar_db", "op_analytic", "op_siso"};
  table.rows.resize(grid.values.size());
  std::vector<double> thresholds(grid.values.size());
  FailureLog log(grid.values.size());
  parallel_for(grid.values.size(), o.threads, [&](std::size_t i) {
    const SnrParams snr{db_to_linear(grid.values[i]), gamma_th};
    thresholds[i] = snr.gamma_bar > 0.0 ? snr.threshold() : kNaN;
    table.rows[i] = {grid.values[i],
                     log.eval(i, [&] { return outage_probability(snr, model.corr.matrix, model.marginal, mvn); }),
                     log.eval(i, [&] { return outage_probability(snr, siso, model.marginal, mvn); })};
  });
  append_mc_columns(o, model, "op", thresholds, table, log);

  const int written = emit(o, render(manifest, table, format_of(o)), out, err);
  const int status = log.report(err, grid.values);
  return written != kExitOk ? written : status;
}

int cmd_dor_curve(const Options& o, std::ostream& out, std::ostream& err) {
  const Model model = build_model(o, o.ports);
  const std::string& sweep = o.sweep;
  auto resolve = [&](const std::string& given, const char* name, const char* swept_default,
                     const char* fixed_default) {
    const bool swept = sweep == name;
    Grid g = parse_grid(given.empty() ? (swept ? swept_default : fixed_default) : given);
    if (!swept && g.is_range())
      throw UsageError(fmt::format("--{} takes a single value unless --sweep selects it",
                                   std::string(name) == "snr" ? "gamma-bar-db" : name));
    return g;
  };
  const Grid snr_grid = resolve(o.gamma_bar_db, "snr", "0:25:1", "20");
  const Grid data_grid = resolve(o.data_kbits, "data", "1:10:1", "5");
  const Grid band_grid = resolve(o.bandwidth_mhz, "bandwidth", "0.5:5:0.5", "2");
  const Grid time_grid = resolve(o.deadline_ms, "deadline", "1:10:1", "3");
  const Grid& swept = sweep == "snr" ? snr_grid
                      : sweep == "data" ? data_grid
                      : sweep == "bandwidth" ? band_grid
                                             : time_grid;
  const char* column = sweep == "snr" ? "gamma_bar_db"
                       : sweep == "data" ? "data_kbits"
                       : sweep == "bandwidth" ? "bandwidth_mhz"
                                              : "deadline_ms";
  const MvnOptions mvn = row_mvn(o);
  const CorrelationMatrix siso = CorrelationMatrix::identity(1);

  RunManifest manifest = start_manifest("dor-curve", o);
  add_model_params(manifest, o, true);
  manifest.add("sweep", sweep);
  manifest.add("gamma-bar-db", snr_grid.text);
  manifest.add("data-kbits", data_grid.text);
  manifest.add("bandwidth-mhz", band_grid.text);
  manifest.add("deadline-ms", time_grid.text);
  manifest.add("mc-samples", std::to_string(o.mc_samples));
  manifest.add("mvn-tol", num(o.mvn_tol));
  manifest.add("format", o.format);
  finish_manifest(manifest, o);
  manifest.note("jakes-repaired", model.corr.repaired ? "true" : "false");

  const std::size_t rows = swept.values.size();
  auto pick = [&](const Grid& g, std::size_t i) { return &g == &swept ? g.values[i] : g.values[0]; };
  Table table;
  table.columns = {column, "dor_analytic", "dor_siso"};
  table.rows.resize(rows);
  std::vector<double> thresholds(rows);
  FailureLog log(rows);
  parallel_for(rows, o.threads, [&](std::size_t i) {
    const double gamma_bar = db_to_linear(pick(snr_grid, i));
    const DorParams dor{pick(data_grid, i) * 1e3, pick(band_grid, i) * 1e6,
                        pick(time_grid, i) * 1e-3};
    Cell threshold = log.eval(i, [&] { return dor.threshold(gamma_bar); });
    thresholds[i] = threshold ? *threshold : kNaN;
    table.rows[i] = {
        swept.values[i],
        log.eval(i, [&] { return delay_outage_rate(dor, gamma_bar, model.corr.matrix, model.marginal, mvn); }),
        log.eval(i, [&] { return delay_outage_rate(dor, gamma_bar, siso, model.marginal, mvn); })};
  });
  append_mc_columns(o, model, "dor", thresholds, table, log);

  const int written = emit(o, render(manifest, table, format_of(o)), out, err);
  const int status = log.report(err, swept.values);
  return written != kExitOk ? written : status;
}

int cmd_dist(const Options& o, std::ostream& out, std::ostream& err) {
  const Model model = build_model(o, o.ports);
  const Grid grid = parse_grid(o.r_grid);
  const MvnOptions mvn = row_mvn(o);

  RunManifest manifest = start_manifest("dist", o);
  add_model_params(manifest, o, true);
  manifest.add("r", grid.text);
  manifest.add("mvn-tol", num(o.mvn_tol));
  manifest.add("format", o.format);
  finish_manifest(manifest, o);
  manifest.note("jakes-repaired", model.corr.repaired ? "true" : "false");

  FailureLog log(grid.values.size());
  std::optional<GaussianCopulaDensity> density;
  try {
    density.emplace(cholesky(model.corr.matrix, true));
  } catch (const std::exception& e) {
    log.whole(std::string("copula density: ") + e.what());
  }

  Table table;
  table.columns = {"r", "cdf", "pdf"};
  table.rows.resize(grid.values.size());
  parallel_for(grid.values.size(), o.threads, [&](std::size_t i) {
    const double r = grid.values[i];
    const Cell cdf = log.eval(i, [&] { return fas_cdf(r, model.corr.matrix, model.marginal, mvn); });
    Cell pdf;
    const bool boundary = r >= 0.0 && (model.marginal.cdf(r) == 0.0 || model.marginal.survival(r) == 0.0);
    if (!density) {
      pdf = kNaN;
    } else if (!boundary) {
      pdf = log.eval(i, [&] { return fas_pdf(r, model.marginal, *density); });
    }
    table.rows[i] = {r, cdf, pdf};
  });

  const int written = emit(o, render(manifest, table, format_of(o)), out, err);
  const int status = log.report(err, grid.values);
  return written != kExitOk ? written : status;
}

int cmd_rank_table(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.widths.empty()) throw UsageError("--widths needs at least one value");
  for (double w : o.widths) FasConfig{2, w}.validate();

  RunManifest manifest = start_manifest("rank-table", o);
  std::vector<std::string> widths;
  for (double w : o.widths) widths.push_back(num(w));
  manifest.add("widths", fmt::format("{}", fmt::join(widths, ",")));
  manifest.add("mc-samples", std::to_string(o.mc_samples));
  manifest.add("format", o.format);
  finish_manifest(manifest, o);

  Table table;
  table.columns = {"W", "eta", "rho_s", "tau_k"};
  if (o.mc_samples > 0) {
    if (o.mc_samples < 2) throw UsageError("--mc-samples must be at least 2 for rank statistics");
    table.columns.insert(table.columns.end(), {"rho_s_mc", "tau_k_mc"});
  }
  FailureLog log(o.widths.size());
  table.rows.resize(o.widths.size());
  for (std::size_t i = 0; i < o.widths.size(); ++i) {
    const JakesCorrelation corr = model_correlation({2, o.widths[i]}, fault_of(o));
    const double eta = corr.matrix(0, 1);
    auto& row = table.rows[i];
    row = {o.widths[i], eta, spearman_from_eta(eta), kendall_from_eta(eta)};
    if (o.mc_samples > 0) {
      try {
        const SampleBatch u = sample_copula(corr.matrix, o.mc_samples, o.seed, o.threads);
        row.push_back(log.eval(i, [&] { return empirical_spearman(u, 0, 1); }));
        row.push_back(log.eval(i, [&] { return empirical_kendall(u, 0, 1); }));
      } catch (const std::exception& e) {
        log.whole(e.what());
        row.insert(row.end(), {kNaN, kNaN});
      }
    }
  }

  const int written = emit(o, render(manifest, table, format_of(o)), out, err);
  const int status = log.report(err, o.widths);
  return written != kExitOk ? written : status;
}

int cmd_sample(const Options& o, std::ostream& out, std::ostream& err) {
  const Model model = build_model(o, 2);
  if (o.n < 1) throw UsageError("--n must be positive");
  const bool jakes = o.source == "jakes-direct";
  if (jakes && !half_integer_shape(o.m))
    throw UsageError(fmt::format("--source jakes-direct needs 2m to be a positive integer, got m = {}",
                                 num(o.m)));
  const PairScale scale = o.source == "copula-uniform" ? PairScale::uniform : PairScale::gain;

  RunManifest manifest = start_manifest("sample", o);
  add_model_params(manifest, o, false);
  manifest.add("source", o.source);
  manifest.add("n", std::to_string(o.n));
  manifest.add("format", o.format);
  finish_manifest(manifest, o);
  manifest.note("jakes-repaired", model.corr.repaired ? "true" : "false");

  const auto pairs = scatter_pairs(model.corr.matrix, scale, model.marginal, o.n, o.seed,
                                   jakes ? PairSource::jakes_direct : PairSource::copula, o.threads);
  Table table;
  table.columns = scale == PairScale::uniform ? std::vector<std::string>{"u1", "u2"}
                                              : std::vector<std::string>{"h1", "h2"};
  table.rows.reserve(pairs.size());
  for (const auto& p : pairs) table.rows.push_back({p[0], p[1]});
  return emit(o, render(manifest, table, format_of(o)), out, err);
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  ValidationSettings settings;
  settings.quick = o.quick;
  settings.seed = o.seed;
  settings.threads = o.threads;
  settings.mvn.abs_tol = o.mvn_tol;
  settings.fault = fault_of(o);

  RunManifest manifest = start_manifest("validate", o);
  if (o.quick) manifest.add("quick", "");
  manifest.add("mvn-tol", num(o.mvn_tol));
  manifest.add("format", o.report_format);
  finish_manifest(manifest, o);

  const auto checks = run_validation(settings, [&](const CheckResult& c) {
    err << (c.passed ? "PASS " : "FAIL ") << c.name << "\n";
  });
  std::string text;
  if (o.report_format == "json") {
    nlohmann::ordered_json doc;
    doc["manifest"] = manifest_json(manifest);
    doc["checks"] = nlohmann::ordered_json::array();
    std::size_t passed = 0;
    for (const auto& c : checks) {
      doc["checks"].push_back({{"name", c.name},
                               {"detail", c.detail},
                               {"measured", c.measured},
                               {"bound", c.bound},
                               {"passed", c.passed}});
      passed += c.passed ? 1 : 0;
    }
    doc["passed"] = passed;
    doc["total"] = checks.size();
    text = doc.dump(2) + "\n";
  } else {
    text = manifest_comments(manifest) + validation_text(checks);
  }
  const int written = emit(o, text, out, err);
  if (written != kExitOk) return written;
  const bool all = std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  return all ? kExitOk : kExitFailure;
}

void add_output_options(CLI::App* sub, Options& o, bool json_or_text = false) {
  sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  sub->add_option("--out", o.out, "Write output to this file instead of stdout");
  if (json_or_text) {
    sub->add_option("--format", o.report_format, "Report format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
  } else {
    sub->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  }
}

void add_model_options(CLI::App* sub, Options& o, bool with_ports) {
  if (with_ports)
    sub->add_option("--ports", o.ports, "Number of ports K")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--width", o.width, "Aperture W in wavelengths")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--m", o.m, "Nakagami shape m (>= 0.5)")->capture_default_str();
  sub->add_option("--mu", o.mu, "Nakagami spread mu")->check(CLI::PositiveNumber)->capture_default_str();
}

void add_mvn_option(CLI::App* sub, Options& o) {
  sub->add_option("--mvn-tol", o.mvn_tol, "Absolute error target of the MVN integrator")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

Grid parse_grid(const std::string& text) {
  auto number = [&](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
      throw UsageError(fmt::format("bad number '{}' in grid '{}'", s, text));
    return v;
  };
  Grid grid{text, {}};
  const auto first = text.find(':');
  if (first == std::string::npos) {
    grid.values.push_back(number(text));
    return grid;
  }
  const auto second = text.find(':', first + 1);
  if (second == std::string::npos || text.find(':', second + 1) != std::string::npos)
    throw UsageError(fmt::format("grid '{}' must look like from:to:step", text));
  const double from = number(text.substr(0, first));
  const double to = number(text.substr(first + 1, second - first - 1));
  const double step = number(text.substr(second + 1));
  if (!(step > 0.0)) throw UsageError(fmt::format("grid '{}' needs a positive step", text));
  if (to < from) throw UsageError(fmt::format("grid '{}' runs backwards", text));
  const double span = (to - from) / step;
  if (span >= static_cast<double>(kMaxGridPoints))
    throw UsageError(fmt::format("grid '{}' has too many points", text));
  // a relative slack keeps the end point when (to - from) / step rounds just below an integer
  const auto count = static_cast<std::size_t>(std::floor(span * (1.0 + 1e-12) + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) grid.values.push_back(from + static_cast<double>(i) * step);
  return grid;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Gaussian-copula performance analysis of fluid antenna systems", "fascopula"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--threads", o.threads, "Worker threads (0 = all cores); never changes results")
      ->capture_default_str();
  app.add_option("--timestamp", o.timestamp,
                 "Timestamp recorded in the manifest (default: $SOURCE_DATE_EPOCH, else unset)");
  app.add_option("--inject-fault", o.fault)->check(CLI::IsMember({"none", "j0-sign"}))->group("");

  auto* op = app.add_subcommand("op-curve", "Outage probability versus average SNR");
  add_model_options(op, o, true);
  op->add_option("--gamma-th-db", o.gamma_th_db, "SNR threshold in dB")->capture_default_str();
  op->add_option("--gamma-bar-db", o.gamma_bar_db, "Average SNR grid from:to:step in dB (default 0:25:1)");
  op->add_option("--mc-samples", o.mc_samples, "Monte Carlo samples per oracle (0 = none)")->capture_default_str();
  add_mvn_option(op, o);
  add_output_options(op, o);

  auto* dor = app.add_subcommand("dor-curve", "Delay outage rate sweeps");
  add_model_options(dor, o, true);
  dor->add_option("--sweep", o.sweep, "Swept variable")
      ->check(CLI::IsMember({"snr", "data", "bandwidth", "deadline"}))
      ->capture_default_str();
  dor->add_option("--gamma-bar-db", o.gamma_bar_db, "Average SNR in dB (grid when swept; default 0:25:1 or 20)");
  dor->add_option("--data-kbits", o.data_kbits, "Data amount R in Kbits (grid when swept; default 1:10:1 or 5)");
  dor->add_option("--bandwidth-mhz", o.bandwidth_mhz, "Bandwidth B in MHz (grid when swept; default 0.5:5:0.5 or 2)");
  dor->add_option("--deadline-ms", o.deadline_ms, "Deadline T_th in ms (grid when swept; default 1:10:1 or 3)");
  dor->add_option("--mc-samples", o.mc_samples, "Monte Carlo samples per oracle (0 = none)")->capture_default_str();
  add_mvn_option(dor, o);
  add_output_options(dor, o);

  auto* dist = app.add_subcommand("dist", "CDF and PDF of the best-port gain");
  add_model_options(dist, o, true);
  dist->add_option("--r", o.r_grid, "Radius grid from:to:step")->capture_default_str();
  add_mvn_option(dist, o);
  add_output_options(dist, o);

  auto* rank = app.add_subcommand("rank-table", "Two-port dependence measures versus W");
  rank->add_option("--widths", o.widths, "Comma-separated apertures")->delimiter(',')->capture_default_str();
  rank->add_option("--mc-samples", o.mc_samples, "Samples for empirical columns (0 = none)")->capture_default_str();
  add_output_options(rank, o);

  auto* sample = app.add_subcommand("sample", "Two-port scatter data");
  add_model_options(sample, o, false);
  sample->add_option("--source", o.source, "Sample source")
      ->check(CLI::IsMember({"copula-uniform", "copula-nakagami", "jakes-direct"}))
      ->capture_default_str();
  sample->add_option("--n", o.n, "Number of pairs")->capture_default_str();
  add_output_options(sample, o);

  auto* validate = app.add_subcommand("validate", "Dual-oracle consistency suite");
  validate->add_flag("--quick", o.quick, "Reduced sample sizes");
  add_mvn_option(validate, o);
  add_output_options(validate, o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*op) return cmd_op_curve(o, out, err);
    if (*dor) return cmd_dor_curve(o, out, err);
    if (*dist) return cmd_dist(o, out, err);
    if (*rank) return cmd_rank_table(o, out, err);
    if (*sample) return cmd_sample(o, out, err);
    return cmd_validate(o, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"fascopula"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace fascopula::cli
