#pragma once

#include <string>
#include <utility>
#include <vector>

#include "slope/rng.hpp"

namespace slope {

enum class FamilyKind { bernoulli, normal_location, cauchy_location, cauchy_median };

/// Coordinate chart on the parameter manifold. Bernoulli admits the mean
/// `p` and `log_odds`; the location families use `theta`.
enum class Chart { p, log_odds, theta };

std::string to_string(FamilyKind kind);
std::string to_string(Chart chart);

/// One-parameter family together with the chart its parameter is read in.
class Family {
 public:
  static Family bernoulli(int n, Chart chart = Chart::p);
  static Family normal_location(double sigma, int n);
  static Family cauchy_location(int n);
  /// Law of the median of 2k+1 iid standard-Cauchy observations shifted by theta.
  static Family cauchy_median(int k);

  FamilyKind kind() const noexcept { return kind_; }
  Chart chart() const noexcept { return chart_; }
  double sigma() const noexcept { return sigma_; }
  int k() const noexcept { return k_; }

  /// Number of underlying observations: n, or 2k+1 for the median law.
  int sample_size() const noexcept;

  /// Same family read in a different admissible chart.
  Family with_chart(Chart chart) const;

  /// Open parameter interval of the current chart.
  std::pair<double, double> param_domain() const noexcept;
  bool in_domain(double theta) const noexcept;

  /// True when the reduced sample space is finite (Bernoulli counts).
  bool finite_support() const noexcept { return kind_ == FamilyKind::bernoulli; }
  /// True when the reduced sample is a single real number.
  bool scalar_continuous() const noexcept {
    return kind_ == FamilyKind::normal_location || kind_ == FamilyKind::cauchy_median;
  }

  std::string describe() const;

 private:
  Family(FamilyKind kind, Chart chart, int n, double sigma, int k)
      : kind_(kind), chart_(chart), n_(n), sigma_(sigma), k_(k) {}

  FamilyKind kind_;
  Chart chart_;
  int n_;
  double sigma_;
  int k_;
};

/// Reduced sample. Bernoulli: one count y in {0..n}. Normal location: the
/// sample mean. Cauchy median: the sample median. Cauchy location: the full
/// sample, sorted ascending.
struct Sample {
  std::vector<double> values;

  static Sample count(int y) { return Sample{{static_cast<double>(y)}}; }
  static Sample scalar(double v) { return Sample{{v}}; }
  static Sample observations(std::vector<double> xs);

  double scalar_value() const { return values.front(); }
};

/// Throws DomainError unless `y` is a valid sample for `f`.
void validate_sample(const Family& f, const Sample& y);

/// Log-likelihood with all additive constants k(n, y) set to zero. For the
/// Cauchy location family this is -sum log((x_i - theta)^2 + 1) - n log(pi).
double loglik(const Family& f, double theta, const Sample& y);

/// First derivative of loglik in the family's chart.
double score(const Family& f, double theta, const Sample& y);

/// Second derivative of loglik in the family's chart (analytic).
double score_derivative(const Family& f, double theta, const Sample& y);

/// Expected information I(theta) = V(score) in the family's chart.
/// Cauchy median information is computed by quadrature.
double fisher_info(const Family& f, double theta);

/// Probability mass (Bernoulli) or density (scalar continuous families) of
/// the reduced sample. Not defined for the full Cauchy sample.
double density(const Family& f, double theta, const Sample& y);

/// Draws one reduced sample; deterministic in the generator state.
Sample sample_from(const Family& f, double theta, CounterRng& rng);

/// Density of the median of 2k+1 standard-Cauchy observations shifted by theta.
double median_density(int k, double z, double theta);
double median_log_density(int k, double z, double theta);

/// log((2k+1)! / (k!)^2), through log-gamma.
double median_log_normalizer(int k);

/// Bijective chart change. Bernoulli: p <-> log-odds. Same-chart calls are
/// identities (after a domain check).
double reparam(const Family& f, Chart from, Chart to, double value);

/// d(theta_to)/d(theta_from) evaluated at `value` given in chart `from`.
double reparam_jacobian(const Family& f, Chart from, Chart to, double value);

/// Median of the full Cauchy sample (middle order statistic; mean of the two
/// middle values for even n).
double sample_median(const Sample& y);

}  // namespace slope
