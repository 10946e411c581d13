#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace slope {

enum class SimMethod : int { wald_expected = 0, wald_observed = 1, lrt = 2 };
inline constexpr std::size_t kSimMethods = 3;

std::string to_string(SimMethod m);

struct SimConfig {
  int n = 15;
  std::int64_t reps = 100'000;
  double theta_true = 0.0;
  std::uint64_t seed = 20'240'917;
  double alpha = 0.05;
  /// Multipliers on z per method, indexed by SimMethod. Defaults equalize
  /// coverage error across the three intervals at n = 15.
  std::array<double, kSimMethods> adjustments{1.08555, 1.05518, 1.0};
  std::array<bool, kSimMethods> enabled{true, true, true};
  /// Worker cap; 0 uses the OpenMP default.
  int threads = 0;

  void validate() const;
  SimConfig raw() const;       // all adjustments 1
  SimConfig adjusted() const;  // the default equalizing adjustments
};

struct ReplicateRecord {
  double theta_hat = 0.0;
  double i_obs = 0.0;
  double median = 0.0;
  double signed_root_lrt = 0.0;    // sign(theta_hat - theta) sqrt(-S(theta_true))
  double score_std_at_true = 0.0;  // score(theta_true) / sqrt(n / 2)
  std::array<std::uint8_t, kSimMethods> hit{};
  std::array<double, kSimMethods> kl_length{};
  std::array<double, kSimMethods> width{};
  bool lrt_disconnected = false;
  bool failed = false;
};

struct MethodSummary {
  bool enabled = false;
  double coverage_error = 0.0;
  double coverage_se = 0.0;  // sqrt(e (1 - e) / count)
  double mean_kl_length = 0.0;
  double mean_width = 0.0;
  std::int64_t count = 0;
};

struct SimSummary {
  SimConfig config;
  double z = 0.0;
  std::array<MethodSummary, kSimMethods> methods{};
  std::vector<ReplicateRecord> replicates;
  std::int64_t failures = 0;
  std::int64_t disconnected_lrt = 0;

  const MethodSummary& operator[](SimMethod m) const { return methods[static_cast<std::size_t>(m)]; }
};

/// Replicate r draws from counter stream (seed, r); replicates run in
/// parallel under OpenMP and aggregate serially in replicate order, so the
/// summary is identical for any worker count.
SimSummary run_coverage(const SimConfig& cfg);
/// Single-threaded reference producing the same summary.
SimSummary run_coverage_serial(const SimConfig& cfg);

/// One replicate; exposed for testing and benchmarking.
ReplicateRecord simulate_replicate(const SimConfig& cfg, double z, std::int64_t r);

struct ObsInfoBin {
  int bin = 0;
  double i_obs_lo = 0.0;
  double i_obs_hi = 0.0;
  std::int64_t count = 0;
  std::array<double, kSimMethods> coverage_error{};
  std::array<double, kSimMethods> coverage_se{};
};

/// Valid replicates sorted by I_obs (ties by index) and split into
/// equal-count bins.
std::vector<ObsInfoBin> coverage_by_obs_info(const SimSummary& summary, int bins);
std::vector<ObsInfoBin> coverage_by_obs_info(const SimConfig& cfg, int bins);

enum class QqStatistic { signed_root_lrt, standardized_score_at_true, median_standardized };

std::string to_string(QqStatistic s);

/// (standard normal quantile at (i - 0.5) / N, i-th order statistic) pairs.
std::vector<std::pair<double, double>> qq_data(const SimSummary& summary, QqStatistic statistic);
std::vector<std::pair<double, double>> qq_data(const SimConfig& cfg, QqStatistic statistic);

/// max |empirical - normal| over pairs whose probability level lies in the
/// central `mass` of the distribution.
double qq_max_gap(const std::vector<std::pair<double, double>>& pairs, double mass = 0.99);

/// Mean KL lengths per method with the equalizing adjustments applied.
std::array<double, kSimMethods> mean_kl_lengths(const SimConfig& cfg);

/// z such that P(|Z| > z) = alpha.
double two_sided_z(double alpha);
double normal_quantile(double prob);

}  // namespace slope
