#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slope/families.hpp"
#include "slope/quadrature.hpp"

namespace slope {

using Statistic = std::function<double(const Sample&)>;

enum class ExpectationMethod { exact_sum, quadrature, monte_carlo };

struct ExpectOptions {
  quad::Options quadrature{1e-12, 1e-12, 4000};
  std::size_t mc_draws = 1'000'000;
  std::uint64_t mc_seed = 0x5EED5EED5EED5EEDull;
};

struct Expectation {
  double value = 0.0;
  double std_error = 0.0;  // zero unless Monte Carlo
  ExpectationMethod method = ExpectationMethod::exact_sum;
};

/// E_theta phi(Y). Exact binomial sum for Bernoulli, real-line quadrature in
/// the centred variable for the scalar continuous families, seeded Monte
/// Carlo for the full Cauchy sample.
Expectation expect_detail(const Family& f, double theta, const Statistic& phi,
                          const ExpectOptions& opt = {});
double expect(const Family& f, double theta, const Statistic& phi, const ExpectOptions& opt = {});

enum class EstimatorKind { score, lifted_point, custom };

/// A member of the space of generalized estimators: a map (sample, theta) ->
/// real with zero mean at every theta. Evaluation goes through per-theta
/// slices so that theta-only work (the mean function of a lift) is done once.
class GenEstimator {
 public:
  using Slice = std::function<double(const Sample&)>;
  using SliceFactory = std::function<Slice(double)>;
  using Pointwise = std::function<double(const Sample&, double)>;

  GenEstimator(Family family, EstimatorKind kind, std::string label, SliceFactory value,
               SliceFactory derivative = {});

  /// Custom member from a pointwise map; the derivative falls back to
  /// central differences when omitted.
  static GenEstimator custom(Family family, std::string label, Pointwise value,
                             Pointwise derivative = {});

  const Family& family() const noexcept { return family_; }
  EstimatorKind kind() const noexcept { return kind_; }
  const std::string& label() const noexcept { return label_; }
  bool has_analytic_derivative() const noexcept { return static_cast<bool>(derivative_); }

  Slice at(double theta) const { return value_(theta); }
  /// y -> d/dtheta g(y, theta); central difference with step 1e-5 (1 + |theta|)
  /// when no analytic derivative was supplied.
  Slice derivative_at(double theta) const;
  double operator()(const Sample& y, double theta) const { return value_(theta)(y); }

  /// k(theta) * g, an equivalent member. `k_prime` enables an analytic
  /// derivative when g has one.
  GenEstimator scaled(std::function<double(double)> k,
                      std::function<double(double)> k_prime = {}) const;

  ExpectOptions expect_options;

 private:
  Family family_;
  EstimatorKind kind_;
  std::string label_;
  SliceFactory value_;
  SliceFactory derivative_;
};

GenEstimator score_estimator(const Family& f);

struct LiftOptions {
  /// Analytic derivative of the mean function; when empty a Bernstein
  /// derivative is used for Bernoulli and central differences otherwise.
  std::function<double(double)> mean_derivative;
  /// Points at which E(h * score) >= 0 and E u^2 < infinity are checked.
  /// Empty means the default grid for the family.
  std::vector<double> check_grid;
  bool check_orientation = true;
  ExpectOptions expect{};
};

/// h(y, theta) = u(y) - E_theta u. Throws EstimatorError when the
/// orientation restriction E(h * score) >= 0 fails on the check grid and
/// QuadratureError when E u^2 does not exist.
GenEstimator lift_point_estimator(const Family& f, Statistic u, std::string label = "lift",
                                  LiftOptions opt = {});

/// Mean function of a statistic, E_theta u, and its derivative as used by lifts.
double statistic_mean(const Family& f, const Statistic& u, double theta,
                      const ExpectOptions& opt = {});

double mean_of(const GenEstimator& g, double theta);
double variance(const GenEstimator& g, double theta);
double mean_slope(const GenEstimator& g, double theta);
double score_covariance(const GenEstimator& g, double theta);

/// g(y, theta) / sqrt(V_theta g).
double standardize(const GenEstimator& g, double theta, const Sample& y);

/// Lambda(g)(theta) = (E g')^2 / V(g).
double squared_slope(const GenEstimator& g, double theta);
/// rho^2(g, score) = E(g score)^2 / (V(g) I).
double score_correlation2(const GenEstimator& g, double theta);
/// Lambda / I.
double lambda_efficiency(const GenEstimator& g, double theta);
/// rho^2 * n.
double effective_n(const GenEstimator& g, double theta);
/// I^{-1} / V(u) for a statistic unbiased for theta (checked to 1e-8).
double v_efficiency(const Family& f, const Statistic& u, double theta,
                    const ExpectOptions& opt = {});
/// |-E g' - E(g score)|.
double check_identity(const GenEstimator& g, double theta);

/// 41 equally spaced points: p in [0.02, 0.98] or theta in [-4, 4].
std::vector<double> default_grid(const Family& f, int points = 41);
std::vector<double> linspace(double lo, double hi, int points);

struct SlopeReport {
  std::vector<double> grid;
  std::vector<double> lambda;
  std::vector<double> rho2;
  std::vector<double> eff_lambda;
  std::vector<double> eff_n;
  std::vector<double> identity_residual;
};

/// Grid evaluation, OpenMP-parallel over grid points.
SlopeReport slope_report(const GenEstimator& g, std::span<const double> grid);
/// Serial reference for slope_report; identical results.
SlopeReport slope_report_serial(const GenEstimator& g, std::span<const double> grid);

struct CauchyTableRow {
  int n = 0;
  double lambda_median_point = 0.0;  // Lambda of the sample median (0 when V diverges)
  double lambda_median_score = 0.0;  // Lambda of the median-law score
  double lambda_full_score = 0.0;    // n / 2
  double eff_median_point_pct = 0.0;
  double eff_median_score_pct = 0.0;
  double n_median_point = 0.0;
  double n_median_score = 0.0;
  bool variance_diverged = false;
};

/// Variance of the median of 2k+1 Cauchy observations; nullopt when the
/// quadrature detects divergence (k in {0, 1}).
std::optional<double> median_variance(int k);

/// Squared slopes, efficiencies, and effective sample sizes for the sample
/// median, its score, and the full-sample score at odd n in [1, 31].
CauchyTableRow cauchy_table_row(int n);

struct BernoulliEffRow {
  double p = 0.0;
  double eff_y = 0.0;
  double eff_y_y_minus_1 = 0.0;
  double eff_y_squared = 0.0;
};

/// Lambda-efficiencies of the lifts of y, y(y-1), and y^2 by exact sums.
std::vector<BernoulliEffRow> bernoulli_efficiency_curves(int n, std::span<const double> grid);

/// Bivariate normal with identity covariance restricted to the line
/// mean = theta * direction. Quantities for the sample means xbar_1, xbar_2.
struct SubmanifoldSlopes {
  double lambda_x1 = 0.0;
  double lambda_x2 = 0.0;
  double variance_x1 = 0.0;
  double variance_x2 = 0.0;
  double rho2_x1 = 0.0;
  double rho2_x2 = 0.0;
  double fisher_info = 0.0;
};

/// `first_axis` selects M1 (mean (theta, 0)); otherwise M2 (mean (0, theta)).
SubmanifoldSlopes two_submanifold_slopes(int n, double theta, bool first_axis = true);

}  // namespace slope
