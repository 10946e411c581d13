#include "commands.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "slope/csv.hpp"
#include "slope/error.hpp"
#include "slope/families.hpp"
#include "slope/gcore.hpp"
#include "slope/intervals.hpp"
#include "slope/mc.hpp"

namespace slope::cli {
namespace {

using Clock = std::chrono::steady_clock;

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open output file '" + path + "'");
  return out;
}

/// Collects outputs and writes the manifest after everything else.
class Manifest {
 public:
  Manifest(std::string command, nlohmann::json flags, std::uint64_t seed)
      : command_(std::move(command)), flags_(std::move(flags)), seed_(seed), start_(Clock::now()) {}

  void add_output(const std::string& path) { outputs_.push_back(path); }

  std::string write() const {
    nlohmann::json j;
    j["command"] = command_;
    j["flags"] = flags_;
    j["seed"] = seed_;
    j["library_version"] = kVersion;
    j["outputs"] = outputs_;
    j["wall_clock_seconds"] = std::chrono::duration<double>(Clock::now() - start_).count();
    const std::string path = outputs_.empty() ? command_ + ".manifest.json"
                                              : outputs_.front() + ".manifest.json";
    auto out = open_output(path);
    out << j.dump(2) << "\n";
    return path;
  }

 private:
  std::string command_;
  nlohmann::json flags_;
  std::uint64_t seed_;
  Clock::time_point start_;
  std::vector<std::string> outputs_;
};

// ---------------------------------------------------------------------------
// check batteries

struct CheckResult {
  std::string property;
  std::string estimator;
  double theta;
  double value;
  double tolerance;
  bool pass;
};

class Battery {
 public:
  void record(std::string property, std::string estimator, double theta, double value,
              double tolerance, bool pass) {
    results_.push_back({std::move(property), std::move(estimator), theta, value, tolerance, pass});
  }
  /// Passes when value < tolerance.
  void below(std::string property, std::string estimator, double theta, double value, double tol) {
    record(std::move(property), std::move(estimator), theta, value, tol, value < tol);
  }
  const std::vector<CheckResult>& results() const { return results_; }
  const CheckResult* first_failure() const {
    for (const auto& r : results_)
      if (!r.pass) return &r;
    return nullptr;
  }

 private:
  std::vector<CheckResult> results_;
};

void identity_and_bound(Battery& b, const GenEstimator& g, std::span<const double> grid, double id_tol) {
  for (double t : grid) {
    b.below("identity", g.label(), t, check_identity(g, t), id_tol);
    const double lambda = squared_slope(g, t);
    const double info = fisher_info(g.family(), t);
    b.record("fisher_bound", g.label(), t, lambda / info, 1.0 + 1e-8, lambda <= info * (1.0 + 1e-8));
  }
}

double count_of(const Sample& y) { return y.scalar_value(); }

void bernoulli_battery(Battery& b, int n, int points) {
  const Family fp = Family::bernoulli(n, Chart::p);
  const Family ft = Family::bernoulli(n, Chart::log_odds);
  const std::vector<double> pgrid = linspace(0.02, 0.98, points);
  std::vector<double> tgrid;
  for (double p : pgrid) tgrid.push_back(reparam(fp, Chart::p, Chart::log_odds, p));

  const std::vector<std::pair<std::string, Statistic>> stats = {
      {"y", count_of},
      {"y(y-1)", [](const Sample& y) { const double c = y.scalar_value(); return c * (c - 1.0); }},
      {"y^2", [](const Sample& y) { const double c = y.scalar_value(); return c * c; }},
  };
  LiftOptions lp;
  lp.check_grid = pgrid;
  LiftOptions lt;
  lt.check_grid = tgrid;

  for (const auto& [chart_family, grid] : {std::pair{fp, pgrid}, std::pair{ft, tgrid}})
    identity_and_bound(b, score_estimator(chart_family), grid, 1e-8);

  for (const auto& [name, u] : stats) {
    const GenEstimator hp = lift_point_estimator(fp, u, name, lp);
    const GenEstimator ht = lift_point_estimator(ft, u, name, lt);
    identity_and_bound(b, hp, pgrid, 1e-8);
    identity_and_bound(b, ht, tgrid, 1e-8);

    const GenEstimator affine = lift_point_estimator(
        fp, [u](const Sample& y) { return 3.0 * u(y) - 7.0; }, "3" + name + "-7", lp);
    const GenEstimator rescaled = hp.scaled([](double t) { return 2.0 + std::sin(t); },
                                            [](double t) { return std::cos(t); });
    for (std::size_t i = 0; i < pgrid.size(); ++i) {
      const double ep = lambda_efficiency(hp, pgrid[i]);
      const double et = lambda_efficiency(ht, tgrid[i]);
      b.below("chart_invariance_eff", name, pgrid[i], std::abs(ep - et), 1e-8);
      const double r = score_correlation2(hp, pgrid[i]);
      b.below("affine_invariance_rho2", name, pgrid[i],
              std::abs(score_correlation2(affine, pgrid[i]) - r), 1e-10);
      const double lam = squared_slope(hp, pgrid[i]);
      b.below("equivalence_lambda", name, pgrid[i],
              std::abs(squared_slope(rescaled, pgrid[i]) - lam) / lam, 1e-8);
    }
  }

  for (std::size_t i = 0; i < pgrid.size(); ++i) {
    double worst = 0.0;
    for (int y = 0; y <= n; ++y) {
      const Sample s = Sample::count(y);
      const double sp = score(fp, pgrid[i], s) / std::sqrt(fisher_info(fp, pgrid[i]));
      const double st = score(ft, tgrid[i], s) / std::sqrt(fisher_info(ft, tgrid[i]));
      worst = std::max(worst, std::abs(sp - st));
    }
    b.below("chart_invariance_score_distribution", "score", pgrid[i], worst, 1e-8);
  }
}

void normal_battery(Battery& b, double sigma, int n, int points) {
  const Family f = Family::normal_location(sigma, n);
  const auto grid = linspace(-4.0, 4.0, points);
  LiftOptions lo;
  lo.check_grid = grid;
  identity_and_bound(b, score_estimator(f), grid, 1e-6);
  identity_and_bound(b, lift_point_estimator(f, count_of, "xbar", lo), grid, 1e-6);
  identity_and_bound(b, lift_point_estimator(
                            f, [](const Sample& y) { const double v = y.scalar_value(); return v * v * v; },
                            "xbar^3", lo),
                     grid, 1e-6);
}

void median_battery(Battery& b, int k, int points) {
  const Family f = Family::cauchy_median(k);
  const auto grid = linspace(-4.0, 4.0, points);
  identity_and_bound(b, score_estimator(f), grid, 1e-6);
  if (median_variance(k)) {
    LiftOptions lo;
    lo.check_grid = grid;
    identity_and_bound(b, lift_point_estimator(f, count_of, "median", lo), grid, 1e-6);
  }
}

void cauchy_location_battery(Battery& b, int n, int points) {
  const Family f = Family::cauchy_location(n);
  ExpectOptions eo;
  eo.mc_draws = 200'000;
  for (double t : linspace(-4.0, 4.0, std::min(points, 5))) {
    const Expectation mean = expect_detail(f, t, [&](const Sample& y) { return score(f, t, y); }, eo);
    b.below("score_mean_zero", "score", t, std::abs(mean.value), 5.0 * mean.std_error);
    const Expectation var = expect_detail(f, t, [&](const Sample& y) {
      const double s = score(f, t, y);
      return s * s;
    }, eo);
    b.below("variance_equals_info", "score", t, std::abs(var.value - n / 2.0), 5.0 * var.std_error);
    const Expectation curv = expect_detail(f, t, [&](const Sample& y) { return -score_derivative(f, t, y); }, eo);
    b.below("curvature_equals_info", "score", t, std::abs(curv.value - n / 2.0), 5.0 * curv.std_error);
  }
}

std::uint64_t no_seed() { return 0; }

}  // namespace

int run_table1(const Table1Options& opt, std::ostream& log) {
  if (opt.n_max < 1 || opt.n_max > 31 || opt.n_max % 2 == 0)
    throw DomainError("--n-max must be odd in [1, 31]");
  Manifest manifest("table1", {{"n_max", opt.n_max}, {"out", opt.out}}, no_seed());
  {
    auto out = open_output(opt.out);
    csv::Writer w(out, "table1", 1,
                  {"n", "lambda_median_point", "lambda_median_score", "lambda_full_score",
                   "eff_median_point_pct", "eff_median_score_pct", "n_median_point",
                   "n_median_score", "variance_diverged"});
    for (int n = 1; n <= opt.n_max; n += 2) {
      CauchyTableRow row;
      try {
        row = cauchy_table_row(n);
      } catch (const NumericalError& e) {
        throw NumericalError("table1 row n=" + std::to_string(n) + ": " + e.what());
      }
      w.field(row.n).field(row.lambda_median_point).field(row.lambda_median_score)
          .field(row.lambda_full_score).field(row.eff_median_point_pct)
          .field(row.eff_median_score_pct).field(row.n_median_point).field(row.n_median_score)
          .field(row.variance_diverged ? 1 : 0);
      w.end_row();
      log << "n=" << n << " lambda(median)=" << row.lambda_median_point
          << (row.variance_diverged ? " (variance diverges)" : "")
          << " lambda(median score)=" << row.lambda_median_score << "\n";
    }
  }
  manifest.add_output(opt.out);
  manifest.write();
  return kOk;
}

int run_bernoulli_eff(const BernoulliEffOptions& opt, std::ostream& log) {
  if (opt.grid < 2) throw DomainError("--grid must be at least 2");
  Manifest manifest("bernoulli-eff", {{"n", opt.n}, {"grid", opt.grid}, {"out", opt.out}}, no_seed());
  const auto grid = linspace(0.02, 0.98, opt.grid);
  const auto rows = bernoulli_efficiency_curves(opt.n, grid);
  {
    auto out = open_output(opt.out);
    csv::Writer w(out, "bernoulli_eff", 1, {"p", "eff_y", "eff_y_y_minus_1", "eff_y_squared"});
    for (const auto& r : rows) {
      w.field(r.p).field(r.eff_y).field(r.eff_y_y_minus_1).field(r.eff_y_squared);
      w.end_row();
    }
  }
  log << "wrote " << rows.size() << " rows to " << opt.out << "\n";
  manifest.add_output(opt.out);
  manifest.write();
  return kOk;
}

int run_curves(const CurvesOptions& opt, std::ostream& log) {
  if (opt.family != "bernoulli")
    throw DomainError("curves: unsupported family '" + opt.family + "' (finite sample space required)");
  Chart chart;
  if (opt.chart == "p") chart = Chart::p;
  else if (opt.chart == "log_odds" || opt.chart == "log-odds") chart = Chart::log_odds;
  else throw DomainError("curves: unknown chart '" + opt.chart + "'");
  if (opt.grid < 2) throw DomainError("--grid must be at least 2");

  const Family f = Family::bernoulli(opt.n, chart);
  Manifest manifest("curves",
                    {{"family", opt.family}, {"param_chart", opt.chart}, {"n", opt.n},
                     {"grid", opt.grid}, {"out", opt.out}},
                    no_seed());
  const auto grid = default_grid(f, opt.grid);
  {
    auto out = open_output(opt.out);
    std::vector<std::string> cols = {to_string(chart)};
    for (int y = 0; y <= opt.n; ++y) cols.push_back("y" + std::to_string(y));
    csv::Writer w(out, "curves", 1, cols);
    for (double t : grid) {
      w.field(t);
      const double sd = std::sqrt(fisher_info(f, t));
      for (int y = 0; y <= opt.n; ++y) w.field(score(f, t, Sample::count(y)) / sd);
      w.end_row();
    }
  }
  log << "wrote " << opt.n + 1 << " curves over " << grid.size() << " points to " << opt.out << "\n";
  manifest.add_output(opt.out);
  manifest.write();
  return kOk;
}

int run_cauchy_sim(const CauchySimOptions& opt, int threads, std::ostream& log) {
  if (opt.bins < 1) throw DomainError("--bins must be positive");
  SimConfig cfg;
  cfg.n = opt.n;
  cfg.reps = opt.reps;
  cfg.seed = opt.seed;
  cfg.theta_true = opt.theta_true;
  cfg.alpha = opt.alpha;
  cfg.threads = threads;
  cfg = opt.raw ? cfg.raw() : cfg.adjusted();

  Manifest manifest("cauchy-sim",
                    {{"n", opt.n}, {"reps", opt.reps}, {"seed", opt.seed},
                     {"mode", opt.raw ? "raw" : "adjusted"}, {"bins", opt.bins},
                     {"theta_true", opt.theta_true}, {"alpha", opt.alpha},
                     {"out_prefix", opt.out_prefix}},
                    opt.seed);
  const SimSummary s = run_coverage(cfg);

  const std::string summary_path = opt.out_prefix + "_summary.csv";
  {
    auto out = open_output(summary_path);
    csv::Writer w(out, "cauchy_sim_summary", 1,
                  {"method", "adjustment", "z", "coverage_error", "coverage_se", "mean_kl_length",
                   "mean_width", "count", "failures", "lrt_disconnected"});
    for (std::size_t m = 0; m < kSimMethods; ++m) {
      const MethodSummary& ms = s.methods[m];
      w.field(to_string(static_cast<SimMethod>(m))).field(cfg.adjustments[m]).field(s.z)
          .field(ms.coverage_error).field(ms.coverage_se).field(ms.mean_kl_length)
          .field(ms.mean_width).field(static_cast<long long>(ms.count))
          .field(static_cast<long long>(s.failures)).field(static_cast<long long>(s.disconnected_lrt));
      w.end_row();
      log << to_string(static_cast<SimMethod>(m)) << ": coverage error " << 100.0 * ms.coverage_error
          << "% (se " << 100.0 * ms.coverage_se << "), mean KL length " << ms.mean_kl_length << "\n";
    }
  }
  manifest.add_output(summary_path);

  const std::string bins_path = opt.out_prefix + "_bins.csv";
  {
    const auto bins = coverage_by_obs_info(s, opt.bins);
    auto out = open_output(bins_path);
    csv::Writer w(out, "cauchy_sim_bins", 1,
                  {"bin", "i_obs_lo", "i_obs_hi", "count", "err_we", "err_wo", "err_lrt"});
    for (const auto& b : bins) {
      w.field(b.bin).field(b.i_obs_lo).field(b.i_obs_hi).field(static_cast<long long>(b.count))
          .field(b.coverage_error[0]).field(b.coverage_error[1]).field(b.coverage_error[2]);
      w.end_row();
    }
  }
  manifest.add_output(bins_path);

  const std::string qq_path = opt.out_prefix + "_qq.csv";
  {
    const auto lrt = qq_data(s, QqStatistic::signed_root_lrt);
    const auto sc = qq_data(s, QqStatistic::standardized_score_at_true);
    const bool median_ok = cfg.n % 2 == 1 && cfg.n >= 5;
    const auto med = median_ok ? qq_data(s, QqStatistic::median_standardized)
                               : std::vector<std::pair<double, double>>{};
    auto out = open_output(qq_path);
    csv::Writer w(out, "cauchy_sim_qq", 1,
                  {"i", "normal_quantile", "signed_root_lrt", "standardized_score_at_true",
                   "median_standardized"});
    for (std::size_t i = 0; i < lrt.size(); ++i) {
      w.field(static_cast<long long>(i)).field(lrt[i].first).field(lrt[i].second).field(sc[i].second);
      if (median_ok) w.field(med[i].second);
      else w.field(std::string_view("nan"));
      w.end_row();
    }
  }
  manifest.add_output(qq_path);

  const std::string reps_path = opt.out_prefix + "_replicates.csv";
  {
    auto out = open_output(reps_path);
    csv::Writer w(out, "cauchy_sim_replicates", 1,
                  {"rep", "theta_hat", "i_obs", "hit_we", "hit_wo", "hit_lrt", "kl_we", "kl_wo", "kl_lrt"});
    for (std::size_t r = 0; r < s.replicates.size(); ++r) {
      const auto& rec = s.replicates[r];
      w.field(static_cast<long long>(r)).field(rec.theta_hat).field(rec.i_obs);
      for (auto h : rec.hit) w.field(static_cast<int>(h));
      for (double k : rec.kl_length) w.field(k);
      w.end_row();
    }
  }
  manifest.add_output(reps_path);
  manifest.write();
  return kOk;
}

int run_check(const CheckOptions& opt, std::ostream& log) {
  if (opt.grid < 2) throw DomainError("--grid must be at least 2");
  Battery b;
  if (opt.family == "bernoulli") bernoulli_battery(b, opt.n, opt.grid);
  else if (opt.family == "normal" || opt.family == "normal_location") normal_battery(b, opt.sigma, opt.n, opt.grid);
  else if (opt.family == "cauchy_median") median_battery(b, opt.k, opt.grid);
  else if (opt.family == "cauchy" || opt.family == "cauchy_location") cauchy_location_battery(b, opt.n, opt.grid);
  else throw DomainError("check: unknown family '" + opt.family + "'");

  std::map<std::string, std::pair<int, int>> tally;  // property -> (passed, total)
  for (const auto& r : b.results()) {
    auto& t = tally[r.property];
    t.first += r.pass ? 1 : 0;
    ++t.second;
  }
  for (const auto& [property, t] : tally)
    log << (t.first == t.second ? "PASS " : "FAIL ") << property << " (" << t.first << "/" << t.second << ")\n";

  if (!opt.out.empty()) {
    Manifest manifest("check", {{"family", opt.family}, {"grid", opt.grid}, {"n", opt.n}, {"k", opt.k},
                                {"sigma", opt.sigma}, {"out", opt.out}},
                      no_seed());
    {
      auto out = open_output(opt.out);
      csv::Writer w(out, "check", 1, {"property", "estimator", "theta", "value", "tolerance", "pass"});
      for (const auto& r : b.results()) {
        w.field(r.property).field(r.estimator).field(r.theta).field(r.value).field(r.tolerance)
            .field(r.pass ? 1 : 0);
        w.end_row();
      }
    }
    manifest.add_output(opt.out);
    manifest.write();
  }
  if (const CheckResult* bad = b.first_failure()) {
    log << "first failing property: " << bad->property << " for " << bad->estimator
        << " at theta=" << bad->theta << " (value " << bad->value << ", tolerance " << bad->tolerance << ")\n";
    return kPropertyFailure;
  }
  return kOk;
}

std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      out.push_back(args[i]);
    }
  }
  if (config_path.empty()) return out;

  std::ifstream in(config_path);
  if (!in) throw CLI::ValidationError("--config", "cannot read '" + config_path + "'");
  const auto given = [&](const std::string& key) {
    for (const auto& a : out)
      if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
    return false;
  };
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--config", "expected key=value: " + line);
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    for (char& c : key)
      if (c == '_') c = '-';
    if (given(key)) continue;
    // --raw / --adjusted are mutually exclusive spellings of one switch.
    if ((key == "raw" && given("adjusted")) || (key == "adjusted" && given("raw"))) continue;
    if (value == "true") out.push_back("--" + key);
    else if (value != "false") out.push_back("--" + key + "=" + value);
  }
  return out;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized estimators, squared slopes, and KL interval lengths", "slope-lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  app.add_option("--config", "key=value file merged under the command-line flags");

  Table1Options t1;
  auto* table1 = app.add_subcommand("table1", "Squared slopes and efficiencies of the Cauchy sample median");
  table1->add_option("--n-max", t1.n_max, "largest odd sample size")->capture_default_str();
  table1->add_option("--out", t1.out, "output CSV")->capture_default_str();

  BernoulliEffOptions be;
  auto* beff = app.add_subcommand("bernoulli-eff", "Lambda-efficiencies of y, y(y-1), y^2");
  beff->add_option("--n", be.n, "Bernoulli sample size")->capture_default_str();
  beff->add_option("--grid", be.grid, "number of p values in [0.02, 0.98]")->capture_default_str();
  beff->add_option("--out", be.out, "output CSV")->capture_default_str();

  CurvesOptions cv;
  auto* curves = app.add_subcommand("curves", "Standardized score curves for every sample value");
  curves->add_option("--family", cv.family, "family (bernoulli)")->capture_default_str();
  curves->add_option("--param-chart", cv.chart, "p or log_odds")->capture_default_str();
  curves->add_option("--n", cv.n, "Bernoulli sample size")->capture_default_str();
  curves->add_option("--grid", cv.grid, "number of parameter values")->capture_default_str();
  curves->add_option("--out", cv.out, "output CSV")->capture_default_str();

  CauchySimOptions cs;
  auto* sim = app.add_subcommand("cauchy-sim", "Coverage and KL-length simulation for the Cauchy location family");
  sim->add_option("--n", cs.n, "sample size")->capture_default_str();
  sim->add_option("--reps", cs.reps, "replicates")->capture_default_str();
  sim->add_option("--seed", cs.seed, "64-bit seed")->capture_default_str();
  auto* raw_flag = sim->add_flag("--raw", cs.raw, "unadjusted z for every interval");
  bool adjusted = false;
  sim->add_flag("--adjusted", adjusted, "equalizing z multipliers (default)")->excludes(raw_flag);
  sim->add_option("--bins", cs.bins, "I_obs bins")->capture_default_str();
  sim->add_option("--theta-true", cs.theta_true, "true location")->capture_default_str();
  sim->add_option("--alpha", cs.alpha, "nominal error")->capture_default_str();
  sim->add_option("--out-prefix", cs.out_prefix, "prefix for the four CSVs")->capture_default_str();

  CheckOptions ck;
  auto* check = app.add_subcommand("check", "Identity, bound, and invariance batteries");
  check->add_option("--family", ck.family, "bernoulli, normal, cauchy_median, cauchy")->capture_default_str();
  check->add_option("--grid", ck.grid, "grid points")->capture_default_str();
  check->add_option("--n", ck.n, "sample size")->capture_default_str();
  check->add_option("--k", ck.k, "median law index (sample size 2k+1)")->capture_default_str();
  check->add_option("--sigma", ck.sigma, "normal scale")->capture_default_str();
  check->add_option("--out", ck.out, "optional CSV of every check");

  std::vector<std::string> args;
  try {
    args = merge_config(raw_args);
  } catch (const CLI::Error& e) {
    err << e.what() << "\n";
    return kUsage;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << "run with --help for usage\n";
    return kUsage;
  }

  int threads = 0;
  if (const char* env = std::getenv("SLOPE_LAB_THREADS")) {
    threads = std::atoi(env);
    if (threads > 0) omp_set_num_threads(threads);
  }

  try {
    if (*table1) return run_table1(t1, out);
    if (*beff) return run_bernoulli_eff(be, out);
    if (*curves) return run_curves(cv, out);
    if (*sim) return run_cauchy_sim(cs, threads, out);
    if (*check) return run_check(ck, out);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const EstimatorError& e) {
    err << "property failure: " << e.what() << "\n";
    return kPropertyFailure;
  } catch (const DomainError& e) {
    err << "usage: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace slope::cli
