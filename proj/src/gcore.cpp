#include "slope/gcore.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "slope/error.hpp"

namespace slope {
namespace {

double central_step(double theta) { return 1e-5 * (1.0 + std::abs(theta)); }

/// Bernoulli mean parameter p and dp/dtheta for the family's chart.
std::pair<double, double> bernoulli_p(const Family& f, double theta) {
  if (f.chart() == Chart::p) return {theta, 1.0};
  const double p = reparam(f, Chart::log_odds, Chart::p, theta);
  return {p, p * (1.0 - p)};
}

/// Binomial(n, p) probabilities for y = 0..n.
std::vector<double> binomial_pmf(int n, double p) {
  std::vector<double> pmf(static_cast<std::size_t>(n) + 1);
  const Family f = Family::bernoulli(n, Chart::p);
  for (int y = 0; y <= n; ++y) pmf[static_cast<std::size_t>(y)] = density(f, p, Sample::count(y));
  return pmf;
}

double median_quadrature_scale(int k) {
  return k == 0 ? 1.0 : std::numbers::pi / (2.0 * std::sqrt(2.0 * k + 1.0));
}

}  // namespace

Expectation expect_detail(const Family& f, double theta, const Statistic& phi,
                          const ExpectOptions& opt) {
  if (!f.in_domain(theta)) throw DomainError("expect: parameter outside the domain of " + f.describe());
  switch (f.kind()) {
    case FamilyKind::bernoulli: {
      const auto [p, dp] = bernoulli_p(f, theta);
      (void)dp;
      const auto pmf = binomial_pmf(f.sample_size(), p);
      double total = 0.0;
      for (int y = 0; y <= f.sample_size(); ++y)
        total += phi(Sample::count(y)) * pmf[static_cast<std::size_t>(y)];
      return {total, 0.0, ExpectationMethod::exact_sum};
    }
    case FamilyKind::normal_location: {
      const double s = f.sigma() / std::sqrt(static_cast<double>(f.sample_size()));
      const double norm = 1.0 / (s * std::sqrt(2.0 * std::numbers::pi));
      const auto integrand = [&](double w) {
        const double d = w / s;
        const double weight = norm * std::exp(-0.5 * d * d);
        if (weight == 0.0) return 0.0;
        return phi(Sample::scalar(theta + w)) * weight;
      };
      return {quad::integrate_real_line(integrand, 0.0, s, opt.quadrature), 0.0,
              ExpectationMethod::quadrature};
    }
    case FamilyKind::cauchy_median: {
      const int k = f.k();
      const auto integrand = [&](double w) {
        const double weight = median_density(k, w, 0.0);
        if (weight == 0.0) return 0.0;
        return phi(Sample::scalar(theta + w)) * weight;
      };
      return {quad::integrate_real_line(integrand, 0.0, median_quadrature_scale(k), opt.quadrature),
              0.0, ExpectationMethod::quadrature};
    }
    case FamilyKind::cauchy_location: {
      const auto draws = static_cast<std::int64_t>(opt.mc_draws);
      if (draws < 2) throw DomainError("expect: Monte Carlo needs at least two draws");
      std::vector<double> values(static_cast<std::size_t>(draws));
#pragma omp parallel for schedule(static)
      for (std::int64_t i = 0; i < draws; ++i) {
        CounterRng rng(opt.mc_seed, static_cast<std::uint64_t>(i));
        values[static_cast<std::size_t>(i)] = phi(sample_from(f, theta, rng));
      }
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= static_cast<double>(draws);
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      const double var = ss / static_cast<double>(draws - 1);
      if (!std::isfinite(mean) || !std::isfinite(var))
        throw NumericalError("expect: Monte Carlo produced a non-finite estimate");
      return {mean, std::sqrt(var / static_cast<double>(draws)), ExpectationMethod::monte_carlo};
    }
  }
  return {};
}

double expect(const Family& f, double theta, const Statistic& phi, const ExpectOptions& opt) {
  return expect_detail(f, theta, phi, opt).value;
}

GenEstimator::GenEstimator(Family family, EstimatorKind kind, std::string label,
                           SliceFactory value, SliceFactory derivative)
    : family_(std::move(family)),
      kind_(kind),
      label_(std::move(label)),
      value_(std::move(value)),
      derivative_(std::move(derivative)) {
  if (!value_) throw DomainError("GenEstimator: value map is required");
}

GenEstimator GenEstimator::custom(Family family, std::string label, Pointwise value,
                                  Pointwise derivative) {
  SliceFactory v = [value](double theta) -> Slice {
    return [value, theta](const Sample& y) { return value(y, theta); };
  };
  SliceFactory d;
  if (derivative) {
    d = [derivative](double theta) -> Slice {
      return [derivative, theta](const Sample& y) { return derivative(y, theta); };
    };
  }
  return GenEstimator(std::move(family), EstimatorKind::custom, std::move(label), std::move(v),
                      std::move(d));
}

GenEstimator::Slice GenEstimator::derivative_at(double theta) const {
  if (derivative_) return derivative_(theta);
  const double h = central_step(theta);
  Slice plus = value_(theta + h);
  Slice minus = value_(theta - h);
  return [plus = std::move(plus), minus = std::move(minus), h](const Sample& y) {
    return (plus(y) - minus(y)) / (2.0 * h);
  };
}

GenEstimator GenEstimator::scaled(std::function<double(double)> k,
                                  std::function<double(double)> k_prime) const {
  const GenEstimator base = *this;
  SliceFactory v = [base, k](double theta) -> Slice {
    Slice inner = base.at(theta);
    const double factor = k(theta);
    return [inner = std::move(inner), factor](const Sample& y) { return factor * inner(y); };
  };
  SliceFactory d;
  if (k_prime && base.has_analytic_derivative()) {
    d = [base, k, k_prime](double theta) -> Slice {
      Slice g = base.at(theta);
      Slice dg = base.derivative_at(theta);
      const double kv = k(theta);
      const double dk = k_prime(theta);
      return [g = std::move(g), dg = std::move(dg), kv, dk](const Sample& y) {
        return dk * g(y) + kv * dg(y);
      };
    };
  }
  GenEstimator out(family_, EstimatorKind::custom, label_ + "*k(theta)", std::move(v), std::move(d));
  out.expect_options = expect_options;
  return out;
}

GenEstimator score_estimator(const Family& f) {
  GenEstimator::SliceFactory v = [f](double theta) -> GenEstimator::Slice {
    return [f, theta](const Sample& y) { return score(f, theta, y); };
  };
  GenEstimator::SliceFactory d = [f](double theta) -> GenEstimator::Slice {
    return [f, theta](const Sample& y) { return score_derivative(f, theta, y); };
  };
  return GenEstimator(f, EstimatorKind::score, "score", std::move(v), std::move(d));
}

double statistic_mean(const Family& f, const Statistic& u, double theta, const ExpectOptions& opt) {
  return expect(f, theta, u, opt);
}

GenEstimator lift_point_estimator(const Family& f, Statistic u, std::string label, LiftOptions opt) {
  if (!u) throw DomainError("lift_point_estimator: statistic is required");

  std::function<double(double)> mean_fn;
  std::function<double(double)> mean_deriv = opt.mean_derivative;

  if (f.finite_support()) {
    const int n = f.sample_size();
    std::vector<double> table(static_cast<std::size_t>(n) + 1);
    for (int y = 0; y <= n; ++y) table[static_cast<std::size_t>(y)] = u(Sample::count(y));
    mean_fn = [f, table](double theta) {
      const auto [p, dp] = bernoulli_p(f, theta);
      (void)dp;
      const auto pmf = binomial_pmf(f.sample_size(), p);
      double total = 0.0;
      for (std::size_t y = 0; y < table.size(); ++y) total += table[y] * pmf[y];
      return total;
    };
    if (!mean_deriv) {
      // d/dp sum u_y b_{y,n}(p) = n sum_{y<n} (u_{y+1} - u_y) b_{y,n-1}(p).
      mean_deriv = [f, table](double theta) {
        const auto [p, dp] = bernoulli_p(f, theta);
        const int n = f.sample_size();
        if (n == 1) return (table[1] - table[0]) * dp;
        const auto pmf = binomial_pmf(n - 1, p);
        double total = 0.0;
        for (std::size_t y = 0; y + 1 < table.size(); ++y) total += (table[y + 1] - table[y]) * pmf[y];
        return n * total * dp;
      };
    }
  } else {
    const ExpectOptions eo = opt.expect;
    mean_fn = [f, u, eo](double theta) { return expect(f, theta, u, eo); };
    if (!mean_deriv) {
      mean_deriv = [mean_fn](double theta) {
        const double h = central_step(theta);
        return (mean_fn(theta + h) - mean_fn(theta - h)) / (2.0 * h);
      };
    }
  }

  GenEstimator::SliceFactory value = [u, mean_fn](double theta) -> GenEstimator::Slice {
    const double upsilon = mean_fn(theta);
    return [u, upsilon](const Sample& y) { return u(y) - upsilon; };
  };
  GenEstimator::SliceFactory derivative = [mean_deriv](double theta) -> GenEstimator::Slice {
    const double slope = -mean_deriv(theta);
    return [slope](const Sample&) { return slope; };
  };
  GenEstimator h(f, EstimatorKind::lifted_point, std::move(label), std::move(value),
                 std::move(derivative));
  h.expect_options = opt.expect;

  if (opt.check_orientation) {
    std::vector<double> grid = opt.check_grid;
    if (grid.empty()) {
      grid = f.kind() == FamilyKind::cauchy_location ? linspace(-2.0, 2.0, 5) : default_grid(f);
    }
    for (double theta : grid) {
      // Throws QuadratureError when the second moment does not exist.
      const double second = expect(f, theta, [&u](const Sample& y) {
        const double v = u(y);
        return v * v;
      }, opt.expect);
      const double cov = score_covariance(h, theta);
      const double scale = std::sqrt(std::abs(second) * fisher_info(f, theta));
      if (cov < -1e-9 * (1.0 + scale)) {
        std::ostringstream msg;
        msg << "lift '" << h.label() << "' violates E(h * score) >= 0 at theta=" << theta
            << " (covariance " << cov << "); negate the statistic";
        throw EstimatorError(msg.str());
      }
    }
  }
  return h;
}

double mean_of(const GenEstimator& g, double theta) {
  return expect(g.family(), theta, g.at(theta), g.expect_options);
}

double variance(const GenEstimator& g, double theta) {
  const auto slice = g.at(theta);
  const double m = expect(g.family(), theta, slice, g.expect_options);
  const double m2 = expect(g.family(), theta, [&slice](const Sample& y) {
    const double v = slice(y);
    return v * v;
  }, g.expect_options);
  return m2 - m * m;
}

double mean_slope(const GenEstimator& g, double theta) {
  return expect(g.family(), theta, g.derivative_at(theta), g.expect_options);
}

double score_covariance(const GenEstimator& g, double theta) {
  const auto slice = g.at(theta);
  const Family& f = g.family();
  return expect(f, theta, [&](const Sample& y) { return slice(y) * score(f, theta, y); },
                g.expect_options);
}

namespace {

void require_positive_variance(const GenEstimator& g, double theta, double v) {
  if (!(v > 0.0)) {
    std::ostringstream msg;
    msg << "estimator '" << g.label() << "' has zero variance at theta=" << theta;
    throw EstimatorError(msg.str());
  }
}

}  // namespace

double standardize(const GenEstimator& g, double theta, const Sample& y) {
  const double v = variance(g, theta);
  require_positive_variance(g, theta, v);
  return g(y, theta) / std::sqrt(v);
}

double squared_slope(const GenEstimator& g, double theta) {
  const double v = variance(g, theta);
  require_positive_variance(g, theta, v);
  const double slope = mean_slope(g, theta);
  return slope * slope / v;
}

double score_correlation2(const GenEstimator& g, double theta) {
  const double v = variance(g, theta);
  require_positive_variance(g, theta, v);
  const double cov = score_covariance(g, theta);
  return cov * cov / (v * fisher_info(g.family(), theta));
}

double lambda_efficiency(const GenEstimator& g, double theta) {
  return squared_slope(g, theta) / fisher_info(g.family(), theta);
}

double effective_n(const GenEstimator& g, double theta) {
  return score_correlation2(g, theta) * g.family().sample_size();
}

double v_efficiency(const Family& f, const Statistic& u, double theta, const ExpectOptions& opt) {
  const double m = expect(f, theta, u, opt);
  if (std::abs(m - theta) >= 1e-8) {
    std::ostringstream msg;
    msg << "v_efficiency: statistic is biased at theta=" << theta << " (mean " << m << ")";
    throw EstimatorError(msg.str());
  }
  const double m2 = expect(f, theta, [&u](const Sample& y) {
    const double v = u(y);
    return v * v;
  }, opt);
  const double v = m2 - m * m;
  if (!(v > 0.0)) throw EstimatorError("v_efficiency: zero variance");
  return 1.0 / (fisher_info(f, theta) * v);
}

double check_identity(const GenEstimator& g, double theta) {
  return std::abs(-mean_slope(g, theta) - score_covariance(g, theta));
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 1) throw DomainError("linspace: need at least one point");
  std::vector<double> out(static_cast<std::size_t>(points));
  if (points == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = lo + step * i;
  out.back() = hi;
  return out;
}

std::vector<double> default_grid(const Family& f, int points) {
  if (f.kind() == FamilyKind::bernoulli && f.chart() == Chart::p) return linspace(0.02, 0.98, points);
  return linspace(-4.0, 4.0, points);
}

namespace {

void fill_report_point(const GenEstimator& g, double theta, SlopeReport& r, std::size_t i) {
  const Family& f = g.family();
  const double v = variance(g, theta);
  require_positive_variance(g, theta, v);
  const double slope = mean_slope(g, theta);
  const double cov = score_covariance(g, theta);
  const double info = fisher_info(f, theta);
  r.lambda[i] = slope * slope / v;
  r.rho2[i] = cov * cov / (v * info);
  r.eff_lambda[i] = r.lambda[i] / info;
  r.eff_n[i] = r.rho2[i] * f.sample_size();
  r.identity_residual[i] = std::abs(-slope - cov);
}

SlopeReport empty_report(std::span<const double> grid) {
  SlopeReport r;
  r.grid.assign(grid.begin(), grid.end());
  const std::size_t n = grid.size();
  r.lambda.resize(n);
  r.rho2.resize(n);
  r.eff_lambda.resize(n);
  r.eff_n.resize(n);
  r.identity_residual.resize(n);
  return r;
}

}  // namespace

SlopeReport slope_report_serial(const GenEstimator& g, std::span<const double> grid) {
  SlopeReport r = empty_report(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) fill_report_point(g, grid[i], r, i);
  return r;
}

SlopeReport slope_report(const GenEstimator& g, std::span<const double> grid) {
  SlopeReport r = empty_report(grid);
  const auto n = static_cast<std::int64_t>(grid.size());
  std::string first_error;
  bool failed = false;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      fill_report_point(g, grid[static_cast<std::size_t>(i)], r, static_cast<std::size_t>(i));
    } catch (const std::exception& e) {
#pragma omp critical(slope_report_error)
      {
        if (!failed) first_error = e.what();
        failed = true;
      }
    }
  }
  if (failed) throw NumericalError("slope_report: " + first_error);
  return r;
}

std::optional<double> median_variance(int k) {
  if (k < 0) throw DomainError("median_variance: k must be nonnegative");
  const auto integrand = [k](double w) {
    const double d = median_density(k, w, 0.0);
    return d == 0.0 ? 0.0 : w * w * d;
  };
  quad::Options opt;
  opt.abs_tol = 1e-12;
  opt.rel_tol = 1e-12;
  const quad::Result r = quad::try_integrate_real_line(integrand, 0.0, median_quadrature_scale(k), opt);
  if (!r.converged) return std::nullopt;
  return r.value;
}

CauchyTableRow cauchy_table_row(int n) {
  if (n < 1 || n > 31 || n % 2 == 0) throw DomainError("cauchy_table_row: n must be odd in [1, 31]");
  const int k = (n - 1) / 2;
  const Family median_law = Family::cauchy_median(k);
  const double full_info = n / 2.0;

  CauchyTableRow row;
  row.n = n;
  row.lambda_full_score = full_info;
  row.lambda_median_score = fisher_info(median_law, 0.0);
  if (median_variance(k)) {
    LiftOptions lo;
    lo.check_grid = {0.0};
    const GenEstimator median = lift_point_estimator(
        median_law, [](const Sample& y) { return y.scalar_value(); }, "median", lo);
    row.lambda_median_point = squared_slope(median, 0.0);
  } else {
    row.variance_diverged = true;
  }
  row.eff_median_point_pct = 100.0 * row.lambda_median_point / full_info;
  row.eff_median_score_pct = 100.0 * row.lambda_median_score / full_info;
  row.n_median_point = n * row.lambda_median_point / full_info;
  row.n_median_score = n * row.lambda_median_score / full_info;
  return row;
}

std::vector<BernoulliEffRow> bernoulli_efficiency_curves(int n, std::span<const double> grid) {
  const Family f = Family::bernoulli(n, Chart::p);
  for (double p : grid)
    if (!f.in_domain(p)) throw DomainError("bernoulli_efficiency_curves: grid must lie in (0, 1)");
  LiftOptions lo;
  lo.check_grid.assign(grid.begin(), grid.end());
  const auto count = [](const Sample& y) { return y.scalar_value(); };
  const GenEstimator h1 = lift_point_estimator(f, count, "y", lo);
  const GenEstimator h2 = lift_point_estimator(
      f, [](const Sample& y) { const double c = y.scalar_value(); return c * (c - 1.0); },
      "y(y-1)", lo);
  const GenEstimator h3 = lift_point_estimator(
      f, [](const Sample& y) { const double c = y.scalar_value(); return c * c; }, "y^2", lo);

  std::vector<BernoulliEffRow> rows(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double p = grid[i];
    rows[i] = {p, lambda_efficiency(h1, p), lambda_efficiency(h2, p), lambda_efficiency(h3, p)};
  }
  return rows;
}

SubmanifoldSlopes two_submanifold_slopes(int n, double theta, bool first_axis) {
  if (n < 1) throw DomainError("two_submanifold_slopes: n must be positive");
  // Three-point Gauss-Hermite rule for a standard normal; exact through degree 5.
  const double r3 = std::sqrt(3.0);
  const double nodes[3] = {-r3, 0.0, r3};
  const double weights[3] = {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0};
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  const double d1 = first_axis ? 1.0 : 0.0;
  const double d2 = first_axis ? 0.0 : 1.0;

  const auto expect2 = [&](double t, const auto& phi) {
    double total = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        total += weights[i] * weights[j] * phi(t * d1 + s * nodes[i], t * d2 + s * nodes[j], t);
    return total;
  };
  const auto score_at = [&](double x1, double x2, double t) {
    return n * (d1 * (x1 - t * d1) + d2 * (x2 - t * d2));
  };

  SubmanifoldSlopes out;
  out.fisher_info = n;
  for (int component = 0; component < 2; ++component) {
    const auto u = [component](double x1, double x2) { return component == 0 ? x1 : x2; };
    const auto upsilon = [&](double t) {
      return expect2(t, [&](double x1, double x2, double) { return u(x1, x2); });
    };
    // The rule is exact for quadratics, so the mean function is at most
    // quadratic in theta and a unit central difference is exact.
    const double slope = (upsilon(theta + 0.5) - upsilon(theta - 0.5));
    const double mean = upsilon(theta);
    const double var = expect2(theta, [&](double x1, double x2, double) {
      const double c = u(x1, x2) - mean;
      return c * c;
    });
    const double cov = expect2(theta, [&](double x1, double x2, double t) {
      return (u(x1, x2) - mean) * score_at(x1, x2, t);
    });
    const double lambda = slope * slope / var;
    const double rho2 = cov * cov / (var * n);
    if (component == 0) {
      out.lambda_x1 = lambda;
      out.variance_x1 = var;
      out.rho2_x1 = rho2;
    } else {
      out.lambda_x2 = lambda;
      out.variance_x2 = var;
      out.rho2_x2 = rho2;
    }
  }
  return out;
}

}  // namespace slope
