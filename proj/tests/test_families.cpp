#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "slope/error.hpp"
#include "slope/families.hpp"
#include "slope/gcore.hpp"

using namespace slope;
using doctest::Approx;

namespace {

const double kPi = std::numbers::pi;

std::vector<Family> scalar_families() {
  return {Family::bernoulli(10, Chart::p), Family::bernoulli(10, Chart::log_odds),
          Family::normal_location(1.3, 4), Family::cauchy_median(0), Family::cauchy_median(3)};
}

}  // namespace

TEST_CASE("loglik") {
  const Family b = Family::bernoulli(10);
  CHECK(loglik(b, 0.5, Sample::count(5)) == Approx(-6.93147).epsilon(1e-6));
  CHECK(loglik(Family::cauchy_location(1), 0.0, Sample::observations({0.0})) ==
        Approx(-std::log(kPi)).epsilon(1e-15));

  const Family nl = Family::normal_location(1.0, 4);
  const Sample xbar = Sample::scalar(0.0);
  for (double t : {-1.0, -0.1, 0.1, 2.0}) CHECK(loglik(nl, t, xbar) < loglik(nl, 0.0, xbar));

  // Full Cauchy log-likelihood against a direct sum.
  const std::vector<double> xs = {-2.0, 0.3, 0.5, 4.0};
  CHECK(loglik(Family::cauchy_location(4), 0.7, Sample::observations(xs)) ==
        Approx(oracle::cauchy_loglik(xs, 0.7)).epsilon(1e-14));
}

TEST_CASE("score") {
  CHECK(score(Family::bernoulli(10), 0.5, Sample::count(5)) == 0.0);
  CHECK(score(Family::bernoulli(10), 0.3, Sample::count(6)) ==
        Approx((6 - 3.0) / (0.3 * 0.7)).epsilon(1e-14));
  CHECK(score(Family::cauchy_location(1), 1.0, Sample::observations({0.0})) == Approx(-1.0));
  CHECK(score(Family::normal_location(1.0, 4), 0.5, Sample::scalar(1.0)) == Approx(2.0));
}

TEST_CASE("score and its derivative agree with finite differences") {
  const Sample cy = Sample::observations({-3.0, -0.2, 0.4, 1.1, 7.0});
  const Family cl = Family::cauchy_location(5);
  for (double t : {-2.0, 0.0, 0.9, 5.0}) {
    const double h = 1e-5;
    const double fd = (loglik(cl, t + h, cy) - loglik(cl, t - h, cy)) / (2 * h);
    CHECK(score(cl, t, cy) == Approx(fd).epsilon(1e-7));
    const double fd2 = (score(cl, t + h, cy) - score(cl, t - h, cy)) / (2 * h);
    CHECK(score_derivative(cl, t, cy) == Approx(fd2).epsilon(1e-6));
  }
  for (const Family& f : scalar_families()) {
    const Sample y = f.finite_support() ? Sample::count(3) : Sample::scalar(0.37);
    for (double t : default_grid(f, 7)) {
      const double h = 1e-5 * (1.0 + std::abs(t));
      const double fd = (loglik(f, t + h, y) - loglik(f, t - h, y)) / (2 * h);
      CHECK(score(f, t, y) == Approx(fd).epsilon(1e-6));
      const double fd2 = (score(f, t + h, y) - score(f, t - h, y)) / (2 * h);
      CHECK(score_derivative(f, t, y) == Approx(fd2).epsilon(1e-5).scale(1.0));
    }
  }
}

TEST_CASE("fisher_info") {
  CHECK(fisher_info(Family::cauchy_location(15), 0.3) == 7.5);
  CHECK(fisher_info(Family::bernoulli(10), 0.5) == Approx(40.0).epsilon(1e-15));
  CHECK(fisher_info(Family::cauchy_median(0), 1.0) == Approx(0.5).epsilon(1e-12));
  CHECK(fisher_info(Family::normal_location(2.0, 8), -1.0) == Approx(2.0));
  // Log-odds chart: n p (1 - p).
  CHECK(fisher_info(Family::bernoulli(10, Chart::log_odds), 0.0) == Approx(2.5));
  // Median information is location invariant.
  CHECK(fisher_info(Family::cauchy_median(4), 2.5) ==
        Approx(fisher_info(Family::cauchy_median(4), -1.0)).epsilon(1e-10));
}

TEST_CASE("median information matches an independent quadrature") {
  for (int k : {1, 2, 7}) {
    const double h = 1e-6;
    const auto integrand = [&](double z) {
      const double d = oracle::median_density(k, z);
      if (d < 1e-200) return 0.0;
      const double s = (std::log(oracle::median_density(k, z + h)) -
                        std::log(oracle::median_density(k, z - h))) / (2 * h);
      return s * s * d;
    };
    const double ref = oracle::integrate_real_line(integrand);
    CHECK(fisher_info(Family::cauchy_median(k), 0.0) == Approx(ref).epsilon(1e-6));
  }
}

TEST_CASE("densities normalize") {
  for (int n : {1, 5, 10, 40}) {
    for (double p : {0.03, 0.5, 0.91}) {
      double total = 0.0;
      for (int y = 0; y <= n; ++y) total += density(Family::bernoulli(n), p, Sample::count(y));
      CHECK(std::abs(total - 1.0) < 1e-12);
    }
  }
  const Family nl = Family::normal_location(0.7, 3);
  CHECK(std::abs(oracle::integrate_real_line(
                     [&](double x) { return density(nl, 1.2, Sample::scalar(x)); }) - 1.0) < 1e-8);
  for (int k : {0, 1, 3, 7, 30}) {
    const double total = oracle::integrate_real_line([&](double z) { return median_density(k, z, 0.4); });
    CHECK(std::abs(total - 1.0) < 1e-8);
  }
}

TEST_CASE("median_density") {
  CHECK(median_density(0, 2.0, 2.0) == Approx(1.0 / kPi).epsilon(1e-15));
  CHECK(std::abs(median_density(3, 1.7, 0.0) - median_density(3, -1.7, 0.0)) < 1e-12);
  for (int k : {0, 1, 2, 5, 10})
    for (double z : {-40.0, -3.0, -0.5, 0.0, 0.2, 6.0, 1e3})
      CHECK(median_density(k, z, 0.0) == Approx(oracle::median_density(k, z)).epsilon(1e-11));
  // No overflow far past where (2k+1)! leaves double range.
  const double big = median_density(200, 0.0, 0.0);
  CHECK(std::isfinite(big));
  CHECK(big > 0.0);
  CHECK(median_log_normalizer(0) == Approx(0.0));
  CHECK(median_log_normalizer(2) == Approx(std::log(30.0)).epsilon(1e-14));
  // Far tail stays finite in log space.
  CHECK(std::isfinite(median_log_density(7, 1e150, 0.0)));
}

TEST_CASE("median variance exists only for k >= 2") {
  CHECK_FALSE(median_variance(0).has_value());
  CHECK_FALSE(median_variance(1).has_value());
  const auto v = median_variance(7);
  REQUIRE(v.has_value());
  const double ref = oracle::integrate_real_line([](double z) { return z * z * oracle::median_density(7, z); });
  CHECK(*v == Approx(ref).epsilon(1e-8));
}

TEST_CASE("reparam") {
  const Family b = Family::bernoulli(10);
  CHECK(reparam(b, Chart::p, Chart::log_odds, 0.5) == 0.0);
  CHECK(std::abs(reparam(b, Chart::p, Chart::log_odds, reparam(b, Chart::log_odds, Chart::p, 0.0))) < 1e-14);
  CHECK(reparam(b, Chart::p, Chart::log_odds, 0.75) == Approx(std::log(3.0)).epsilon(1e-14));
  for (double t : {-30.0, -2.0, 0.4, 12.0})
    CHECK(reparam(b, Chart::p, Chart::log_odds, reparam(b, Chart::log_odds, Chart::p, t)) ==
          Approx(t).epsilon(1e-12));
  CHECK_THROWS_AS(reparam(b, Chart::p, Chart::log_odds, 1.0), DomainError);
  CHECK_THROWS_AS(reparam(b, Chart::p, Chart::log_odds, 0.0), DomainError);
  CHECK_THROWS_AS(reparam(Family::cauchy_location(3), Chart::theta, Chart::p, 0.0), DomainError);
}

TEST_CASE("score transforms covariantly between charts") {
  const Family fp = Family::bernoulli(10, Chart::p);
  const Family ft = Family::bernoulli(10, Chart::log_odds);
  for (double p : linspace(0.02, 0.98, 25)) {
    const double t = reparam(fp, Chart::p, Chart::log_odds, p);
    const double dtdp = reparam_jacobian(fp, Chart::p, Chart::log_odds, p);
    CHECK(dtdp == Approx(1.0 / (p * (1.0 - p))).epsilon(1e-14));
    for (int y = 0; y <= 10; ++y) {
      const Sample s = Sample::count(y);
      CHECK(std::abs(score(fp, p, s) - dtdp * score(ft, t, s)) < 1e-10 * (1.0 + std::abs(score(fp, p, s))));
    }
  }
}

TEST_CASE("score has mean zero and variance equal to minus expected curvature") {
  for (const Family& f : scalar_families()) {
    for (double t : default_grid(f, 10)) {
      const double m = expect(f, t, [&](const Sample& y) { return score(f, t, y); });
      const double v = expect(f, t, [&](const Sample& y) { return std::pow(score(f, t, y), 2); });
      const double c = -expect(f, t, [&](const Sample& y) { return score_derivative(f, t, y); });
      CHECK(std::abs(m) < 1e-8);
      CHECK(std::abs(v - c) < 1e-6);
      CHECK(v == Approx(fisher_info(f, t)).epsilon(1e-8));
    }
  }
}

TEST_CASE("domain checks") {
  const Family b = Family::bernoulli(10);
  CHECK_THROWS_AS(loglik(b, 1.0, Sample::count(3)), DomainError);
  CHECK_THROWS_AS(loglik(b, 0.4, Sample::count(11)), DomainError);
  CHECK_THROWS_AS(loglik(b, 0.4, Sample::count(-1)), DomainError);
  CHECK_THROWS_AS(score(Family::cauchy_location(3), 0.0, Sample::observations({1.0, 2.0})), DomainError);
  CHECK_THROWS_AS(Family::bernoulli(0), DomainError);
  CHECK_THROWS_AS(Family::normal_location(-1.0, 3), DomainError);
  CHECK_THROWS_AS(Family::cauchy_median(-1), DomainError);
  CHECK_THROWS_AS(fisher_info(b, std::nan("")), DomainError);
  CHECK(b.param_domain().first == 0.0);
  CHECK_FALSE(b.in_domain(0.0));
  CHECK_FALSE(b.in_domain(1.0));
  CHECK(Family::cauchy_median(7).sample_size() == 15);
}

TEST_CASE("samples are sorted and sampling is deterministic") {
  const Sample s = Sample::observations({3.0, -1.0, 2.0});
  CHECK(s.values == std::vector<double>{-1.0, 2.0, 3.0});

  const Family b = Family::bernoulli(10);
  for (std::uint64_t r = 0; r < 200; ++r) {
    CounterRng rng(9, r);
    const int y = static_cast<int>(sample_from(b, 0.3, rng).scalar_value());
    CHECK(y >= 0);
    CHECK(y <= 10);
  }
  const Family c = Family::cauchy_location(15);
  CounterRng r1(77, 0);
  CounterRng r2(77, 0);
  const Sample a = sample_from(c, 0.0, r1);
  CHECK(a.values == sample_from(c, 0.0, r2).values);
  CHECK(std::is_sorted(a.values.begin(), a.values.end()));

  CounterRng big(5, 0);
  const Sample many = sample_from(Family::cauchy_location(100'000), 3.0, big);
  CHECK(std::abs(sample_median(many) - 3.0) < 0.02);
}

TEST_CASE("binomial draws have the right mean") {
  const Family b = Family::bernoulli(10);
  double sum = 0.0;
  const int reps = 20'000;
  for (int r = 0; r < reps; ++r) {
    CounterRng rng(11, static_cast<std::uint64_t>(r));
    sum += sample_from(b, 0.3, rng).scalar_value();
  }
  CHECK(std::abs(sum / reps - 3.0) < 4.0 * std::sqrt(2.1 / reps));
}
