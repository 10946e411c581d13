#include "slope/mc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <omp.h>

#include <boost/math/distributions/normal.hpp>

#include "slope/error.hpp"
#include "slope/families.hpp"
#include "slope/gcore.hpp"
#include "slope/intervals.hpp"
#include "slope/klgeom.hpp"

namespace slope {

std::string to_string(SimMethod m) {
  switch (m) {
    case SimMethod::wald_expected: return "wald_expected";
    case SimMethod::wald_observed: return "wald_observed";
    case SimMethod::lrt: return "lrt";
  }
  return "unknown";
}

std::string to_string(QqStatistic s) {
  switch (s) {
    case QqStatistic::signed_root_lrt: return "signed_root_lrt";
    case QqStatistic::standardized_score_at_true: return "standardized_score_at_true";
    case QqStatistic::median_standardized: return "median_standardized";
  }
  return "unknown";
}

double normal_quantile(double prob) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), prob);
}

double two_sided_z(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("two_sided_z: alpha must be in (0, 1)");
  return normal_quantile(1.0 - alpha / 2.0);
}

void SimConfig::validate() const {
  if (n < 1) throw DomainError("SimConfig: n must be positive");
  if (reps < 1) throw DomainError("SimConfig: reps must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("SimConfig: alpha must be in (0, 1)");
  if (!std::isfinite(theta_true)) throw DomainError("SimConfig: theta_true must be finite");
  for (double a : adjustments)
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("SimConfig: adjustments must be positive");
  if (threads < 0) throw DomainError("SimConfig: threads must be nonnegative");
}

SimConfig SimConfig::raw() const {
  SimConfig c = *this;
  c.adjustments = {1.0, 1.0, 1.0};
  return c;
}

SimConfig SimConfig::adjusted() const {
  SimConfig c = *this;
  c.adjustments = SimConfig{}.adjustments;
  return c;
}

ReplicateRecord simulate_replicate(const SimConfig& cfg, double z, std::int64_t r) {
  const Family f = Family::cauchy_location(cfg.n);
  CounterRng rng(cfg.seed, static_cast<std::uint64_t>(r));
  const Sample y = sample_from(f, cfg.theta_true, rng);

  ReplicateRecord rec;
  try {
    const LrtEstimate est = lrt_estimate(f, y);
    rec.theta_hat = est.mle;
    rec.i_obs = -score_derivative(f, est.mle, y);
    rec.median = sample_median(y);
    rec.signed_root_lrt = est.signed_root(cfg.theta_true);
    rec.score_std_at_true = score(f, cfg.theta_true, y) / std::sqrt(fisher_info(f, cfg.theta_true));
    if (!(rec.i_obs > 0.0)) {
      rec.failed = true;
      return rec;
    }
    const auto record = [&](SimMethod m, const Interval& iv) {
      const auto i = static_cast<std::size_t>(m);
      rec.hit[i] = iv.contains(cfg.theta_true) ? 1 : 0;
      rec.width[i] = iv.width();
      rec.kl_length[i] = kl_length(f, iv);
    };
    const auto adj = [&](SimMethod m) { return cfg.adjustments[static_cast<std::size_t>(m)]; };
    const auto on = [&](SimMethod m) { return cfg.enabled[static_cast<std::size_t>(m)]; };
    if (on(SimMethod::wald_expected))
      record(SimMethod::wald_expected,
             wald_interval(est.mle, fisher_info(f, est.mle), z, adj(SimMethod::wald_expected),
                           IntervalMethod::wald_expected));
    if (on(SimMethod::wald_observed))
      record(SimMethod::wald_observed,
             wald_interval(est.mle, rec.i_obs, z, adj(SimMethod::wald_observed),
                           IntervalMethod::wald_observed));
    if (on(SimMethod::lrt)) {
      const Interval iv = lrt_interval(est, adj(SimMethod::lrt) * z);
      rec.lrt_disconnected = iv.disconnected;
      record(SimMethod::lrt, iv);
    }
  } catch (const NumericalError&) {
    rec.failed = true;
  }
  return rec;
}

namespace {

SimSummary aggregate(const SimConfig& cfg, double z, std::vector<ReplicateRecord> records) {
  SimSummary s;
  s.config = cfg;
  s.z = z;
  for (const auto& rec : records) {
    if (rec.failed) ++s.failures;
    if (rec.lrt_disconnected) ++s.disconnected_lrt;
  }
  // More than 0.01% failed replicates aborts the run.
  if (s.failures * 10'000 > cfg.reps) {
    std::ostringstream msg;
    msg << "run_coverage: " << s.failures << " of " << cfg.reps << " replicates failed";
    throw NumericalError(msg.str());
  }
  for (std::size_t m = 0; m < kSimMethods; ++m) {
    MethodSummary& ms = s.methods[m];
    ms.enabled = cfg.enabled[m];
    if (!ms.enabled) continue;
    double misses = 0.0;
    double kl = 0.0;
    double width = 0.0;
    for (const auto& rec : records) {
      if (rec.failed) continue;
      ++ms.count;
      misses += rec.hit[m] ? 0.0 : 1.0;
      kl += rec.kl_length[m];
      width += rec.width[m];
    }
    if (ms.count > 0) {
      const double c = static_cast<double>(ms.count);
      ms.coverage_error = misses / c;
      ms.coverage_se = std::sqrt(ms.coverage_error * (1.0 - ms.coverage_error) / c);
      ms.mean_kl_length = kl / c;
      ms.mean_width = width / c;
    }
  }
  s.replicates = std::move(records);
  return s;
}

}  // namespace

SimSummary run_coverage_serial(const SimConfig& cfg) {
  cfg.validate();
  const double z = two_sided_z(cfg.alpha);
  std::vector<ReplicateRecord> records(static_cast<std::size_t>(cfg.reps));
  for (std::int64_t r = 0; r < cfg.reps; ++r)
    records[static_cast<std::size_t>(r)] = simulate_replicate(cfg, z, r);
  return aggregate(cfg, z, std::move(records));
}

SimSummary run_coverage(const SimConfig& cfg) {
  cfg.validate();
  const double z = two_sided_z(cfg.alpha);
  std::vector<ReplicateRecord> records(static_cast<std::size_t>(cfg.reps));
  const int workers = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 256) num_threads(workers)
  for (std::int64_t r = 0; r < cfg.reps; ++r)
    records[static_cast<std::size_t>(r)] = simulate_replicate(cfg, z, r);
  return aggregate(cfg, z, std::move(records));
}

std::vector<ObsInfoBin> coverage_by_obs_info(const SimSummary& summary, int bins) {
  if (bins < 1) throw DomainError("coverage_by_obs_info: bins must be positive");
  std::vector<std::size_t> order;
  order.reserve(summary.replicates.size());
  for (std::size_t i = 0; i < summary.replicates.size(); ++i)
    if (!summary.replicates[i].failed) order.push_back(i);
  if (order.size() < static_cast<std::size_t>(bins))
    throw DomainError("coverage_by_obs_info: fewer valid replicates than bins");
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return summary.replicates[a].i_obs < summary.replicates[b].i_obs;
  });

  std::vector<ObsInfoBin> out(static_cast<std::size_t>(bins));
  const std::size_t total = order.size();
  for (int b = 0; b < bins; ++b) {
    const std::size_t first = total * static_cast<std::size_t>(b) / static_cast<std::size_t>(bins);
    const std::size_t last = total * static_cast<std::size_t>(b + 1) / static_cast<std::size_t>(bins);
    ObsInfoBin& bin = out[static_cast<std::size_t>(b)];
    bin.bin = b;
    bin.count = static_cast<std::int64_t>(last - first);
    bin.i_obs_lo = summary.replicates[order[first]].i_obs;
    bin.i_obs_hi = summary.replicates[order[last - 1]].i_obs;
    for (std::size_t m = 0; m < kSimMethods; ++m) {
      if (!summary.methods[m].enabled) continue;
      double misses = 0.0;
      for (std::size_t i = first; i < last; ++i) misses += summary.replicates[order[i]].hit[m] ? 0.0 : 1.0;
      const double c = static_cast<double>(bin.count);
      bin.coverage_error[m] = misses / c;
      bin.coverage_se[m] = std::sqrt(bin.coverage_error[m] * (1.0 - bin.coverage_error[m]) / c);
    }
  }
  return out;
}

std::vector<ObsInfoBin> coverage_by_obs_info(const SimConfig& cfg, int bins) {
  return coverage_by_obs_info(run_coverage(cfg), bins);
}

std::vector<std::pair<double, double>> qq_data(const SimSummary& summary, QqStatistic statistic) {
  const SimConfig& cfg = summary.config;
  double median_sd = 0.0;
  if (statistic == QqStatistic::median_standardized) {
    if (cfg.n % 2 == 0) throw DomainError("qq_data: median standardization needs odd n");
    const auto v = median_variance((cfg.n - 1) / 2);
    if (!v) throw DomainError("qq_data: median variance diverges for n < 5");
    median_sd = std::sqrt(*v);
  }
  std::vector<double> values;
  values.reserve(summary.replicates.size());
  for (const auto& rec : summary.replicates) {
    if (rec.failed) continue;
    switch (statistic) {
      case QqStatistic::signed_root_lrt: values.push_back(rec.signed_root_lrt); break;
      case QqStatistic::standardized_score_at_true: values.push_back(rec.score_std_at_true); break;
      case QqStatistic::median_standardized:
        values.push_back((rec.median - cfg.theta_true) / median_sd);
        break;
    }
  }
  std::sort(values.begin(), values.end());
  std::vector<std::pair<double, double>> pairs(values.size());
  const double count = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    pairs[i] = {normal_quantile((static_cast<double>(i) + 0.5) / count), values[i]};
  return pairs;
}

std::vector<std::pair<double, double>> qq_data(const SimConfig& cfg, QqStatistic statistic) {
  return qq_data(run_coverage(cfg), statistic);
}

double qq_max_gap(const std::vector<std::pair<double, double>>& pairs, double mass) {
  if (!(mass > 0.0 && mass <= 1.0)) throw DomainError("qq_max_gap: mass must be in (0, 1]");
  const double tail = 0.5 * (1.0 - mass);
  const double count = static_cast<double>(pairs.size());
  double gap = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double level = (static_cast<double>(i) + 0.5) / count;
    if (level < tail || level > 1.0 - tail) continue;
    gap = std::max(gap, std::abs(pairs[i].second - pairs[i].first));
  }
  return gap;
}

std::array<double, kSimMethods> mean_kl_lengths(const SimConfig& cfg) {
  const SimSummary s = run_coverage(cfg.adjusted());
  std::array<double, kSimMethods> out{};
  for (std::size_t m = 0; m < kSimMethods; ++m) out[m] = s.methods[m].mean_kl_length;
  return out;
}

}  // namespace slope
