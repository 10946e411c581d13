#include <doctest.h>

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "slope/error.hpp"
#include "slope/families.hpp"
#include "slope/intervals.hpp"
#include "slope/mc.hpp"

using namespace slope;
using doctest::Approx;

namespace {

SimConfig small(std::int64_t reps = 2000, std::uint64_t seed = 20240917) {
  SimConfig c;
  c.reps = reps;
  c.seed = seed;
  return c;
}

bool same_records(const SimSummary& a, const SimSummary& b) {
  if (a.replicates.size() != b.replicates.size()) return false;
  for (std::size_t i = 0; i < a.replicates.size(); ++i) {
    const auto& x = a.replicates[i];
    const auto& y = b.replicates[i];
    if (x.theta_hat != y.theta_hat || x.i_obs != y.i_obs || x.hit != y.hit ||
        x.kl_length != y.kl_length || x.width != y.width || x.signed_root_lrt != y.signed_root_lrt ||
        x.failed != y.failed)
      return false;
  }
  for (std::size_t m = 0; m < kSimMethods; ++m) {
    if (a.methods[m].coverage_error != b.methods[m].coverage_error) return false;
    if (a.methods[m].mean_kl_length != b.methods[m].mean_kl_length) return false;
    if (a.methods[m].mean_width != b.methods[m].mean_width) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("results do not depend on the worker count") {
  const SimConfig cfg = small(3000);
  const SimSummary ref = run_coverage_serial(cfg);
  for (int threads : {1, 2, 8}) {
    SimConfig c = cfg;
    c.threads = threads;
    CHECK(same_records(ref, run_coverage(c)));
  }
}

TEST_CASE("summary bookkeeping") {
  const SimSummary s = run_coverage(small(1500).adjusted());
  CHECK(s.replicates.size() == 1500);
  CHECK(s.z == Approx(1.959963984540054).epsilon(1e-15));
  for (std::size_t m = 0; m < kSimMethods; ++m) {
    const MethodSummary& ms = s.methods[m];
    CHECK(ms.coverage_error >= 0.0);
    CHECK(ms.coverage_error <= 1.0);
    CHECK(ms.count + s.failures == 1500);
    CHECK(ms.coverage_se == Approx(std::sqrt(ms.coverage_error * (1.0 - ms.coverage_error) / ms.count)));
  }
  // Observed-information Wald width is 2 adj z / sqrt(I_obs) exactly.
  const double adj = s.config.adjustments[1];
  for (const auto& r : s.replicates) {
    if (r.failed) continue;
    CHECK(r.width[1] == Approx(2.0 * adj * s.z / std::sqrt(r.i_obs)).epsilon(1e-14));
  }
}

TEST_CASE("a single replicate has coverage error 0 or 1") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const SimSummary s = run_coverage(small(1, seed));
    for (const auto& m : s.methods) CHECK((m.coverage_error == 0.0 || m.coverage_error == 1.0));
  }
}

TEST_CASE("location equivariance of hit flags") {
  SimConfig a = small(800);
  SimConfig b = a;
  b.theta_true = 3.0;
  const SimSummary sa = run_coverage(a);
  const SimSummary sb = run_coverage(b);
  int differing = 0;
  for (std::size_t i = 0; i < sa.replicates.size(); ++i) {
    differing += sa.replicates[i].hit != sb.replicates[i].hit;
    CHECK(sb.replicates[i].theta_hat - sa.replicates[i].theta_hat == Approx(3.0).epsilon(1e-9));
    CHECK(sb.replicates[i].kl_length[2] == Approx(sa.replicates[i].kl_length[2]).epsilon(1e-7));
  }
  CHECK(differing == 0);
}

TEST_CASE("disabled methods are skipped") {
  SimConfig c = small(300);
  c.enabled = {false, true, false};
  const SimSummary s = run_coverage(c);
  CHECK_FALSE(s[SimMethod::wald_expected].enabled);
  CHECK(s[SimMethod::wald_observed].enabled);
  CHECK(s[SimMethod::wald_expected].count == 0);
  CHECK(s[SimMethod::wald_observed].count == 300);
}

TEST_CASE("invalid configurations") {
  SimConfig c = small();
  c.reps = 0;
  CHECK_THROWS_AS(run_coverage(c), DomainError);
  c = small();
  c.alpha = 1.0;
  CHECK_THROWS_AS(run_coverage(c), DomainError);
  c = small();
  c.adjustments[0] = -1.0;
  CHECK_THROWS_AS(run_coverage(c), DomainError);
}

TEST_CASE("coverage_by_obs_info") {
  const SimSummary s = run_coverage(small(2000));
  const auto one = coverage_by_obs_info(s, 1);
  REQUIRE(one.size() == 1);
  for (std::size_t m = 0; m < kSimMethods; ++m) CHECK(one[0].coverage_error[m] == s.methods[m].coverage_error);

  const auto bins = coverage_by_obs_info(s, 20);
  REQUIRE(bins.size() == 20);
  std::int64_t total = 0;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    total += bins[i].count;
    CHECK(bins[i].count == 100);
    CHECK(bins[i].i_obs_lo <= bins[i].i_obs_hi);
    if (i > 0) CHECK(bins[i - 1].i_obs_hi <= bins[i].i_obs_lo);
  }
  CHECK(total == 2000);
  CHECK_THROWS_AS(coverage_by_obs_info(s, 0), DomainError);
}

TEST_CASE("qq_data") {
  const SimSummary s = run_coverage(small(5000));
  for (auto stat : {QqStatistic::signed_root_lrt, QqStatistic::standardized_score_at_true,
                    QqStatistic::median_standardized}) {
    const auto pairs = qq_data(s, stat);
    REQUIRE(pairs.size() == 5000);
    for (std::size_t i = 1; i < pairs.size(); ++i) {
      CHECK(pairs[i - 1].first <= pairs[i].first);
      CHECK(pairs[i - 1].second <= pairs[i].second);
    }
    CHECK(pairs[2500].first == Approx(normal_quantile(2500.5 / 5000.0)));
  }
  const auto sc = qq_data(s, QqStatistic::standardized_score_at_true);
  double sum = 0.0;
  double sum2 = 0.0;
  for (const auto& [q, v] : sc) {
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / 5000.0;
  CHECK(std::abs(mean) < 3.0 / std::sqrt(5000.0));
  // Variance of the squared standardized Cauchy score is small, so 1 +- 0.04 at this size.
  CHECK(std::abs(sum2 / 5000.0 - mean * mean - 1.0) < 0.04);

  SimConfig even = small(100);
  even.n = 4;
  CHECK_THROWS_AS(qq_data(run_coverage(even), QqStatistic::median_standardized), DomainError);
  SimConfig three = small(100);
  three.n = 3;
  CHECK_THROWS_AS(qq_data(run_coverage(three), QqStatistic::median_standardized), DomainError);
}

TEST_CASE("qq_max_gap") {
  std::vector<std::pair<double, double>> exact;
  for (int i = 0; i < 1000; ++i) {
    const double q = normal_quantile((i + 0.5) / 1000.0);
    exact.emplace_back(q, q);
  }
  CHECK(qq_max_gap(exact) == 0.0);
  exact[500].second = exact[500].first + 0.3;
  CHECK(qq_max_gap(exact) == Approx(0.3));
  exact[500].second = exact[500].first;
  exact[1].second += 5.0;  // outside the central 99%
  CHECK(qq_max_gap(exact) == 0.0);
  CHECK(qq_max_gap(exact, 1.0) == Approx(5.0));
}

TEST_CASE("two_sided_z") {
  CHECK(two_sided_z(0.05) == Approx(1.959963984540054).epsilon(1e-15));
  CHECK(two_sided_z(0.3173105078629141) == Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(two_sided_z(0.0), DomainError);
}

TEST_CASE("simulate_replicate matches the standalone solvers") {
  const SimConfig cfg = small(10);
  const double z = two_sided_z(cfg.alpha);
  for (std::int64_t r = 0; r < 10; ++r) {
    const ReplicateRecord rec = simulate_replicate(cfg, z, r);
    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(r));
    const Sample y = sample_from(Family::cauchy_location(15), 0.0, rng);
    CHECK(rec.theta_hat == cauchy_mle(y));
    CHECK(rec.median == sample_median(y));
  }
}
