#include "slope/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "slope/error.hpp"
#include "slope/quadrature.hpp"

namespace slope {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double logistic(double theta) {
  return theta >= 0 ? 1.0 / (1.0 + std::exp(-theta)) : std::exp(theta) / (1.0 + std::exp(theta));
}

double log_odds(double p) { return std::log(p) - std::log1p(-p); }

void require_domain(const Family& f, double theta) {
  if (!f.in_domain(theta)) {
    std::ostringstream msg;
    msg << "parameter " << theta << " outside the open domain of " << f.describe();
    throw DomainError(msg.str());
  }
}

/// Bernoulli mean parameter from the family's current chart.
double mean_param(const Family& f, double theta) {
  return f.chart() == Chart::log_odds ? logistic(theta) : theta;
}

// Median law helpers, all in the centred coordinate w = z - theta.
struct MedianTerms {
  double lower;   // F(w)
  double upper;   // 1 - F(w)
  double cauchy;  // standard Cauchy density at w
};

MedianTerms median_terms(double w) {
  // atan2 forms keep both tails accurate where 1/2 +- atan(w)/pi cancels.
  return {std::atan2(1.0, -w) / kPi, std::atan2(1.0, w) / kPi, 1.0 / (kPi * (1.0 + w * w))};
}

double median_dlogf_dw(int k, double w) {
  const MedianTerms m = median_terms(w);
  return k * m.cauchy * (1.0 / m.lower - 1.0 / m.upper) - 2.0 * w / (1.0 + w * w);
}

double median_d2logf_dw2(int k, double w) {
  const MedianTerms m = median_terms(w);
  const double w2 = w * w;
  const double dcauchy = -2.0 * w * m.cauchy / (1.0 + w2);
  const double a2 = m.cauchy * m.cauchy;
  const double d2log_cdf =
      dcauchy * (1.0 / m.lower - 1.0 / m.upper) -
      a2 * (1.0 / (m.lower * m.lower) + 1.0 / (m.upper * m.upper));
  return k * d2log_cdf - 2.0 * (1.0 - w2) / ((1.0 + w2) * (1.0 + w2));
}

double median_fisher_info(int k) {
  if (k == 0) return 0.5;
  const auto integrand = [k](double w) {
    const double s = median_dlogf_dw(k, w);
    return s * s * median_density(k, w, 0.0);
  };
  quad::Options opt;
  opt.abs_tol = 1e-12;
  opt.rel_tol = 1e-12;
  return quad::integrate_real_line(integrand, 0.0, 1.0, opt);
}

}  // namespace

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::bernoulli: return "bernoulli";
    case FamilyKind::normal_location: return "normal_location";
    case FamilyKind::cauchy_location: return "cauchy_location";
    case FamilyKind::cauchy_median: return "cauchy_median";
  }
  return "unknown";
}

std::string to_string(Chart chart) {
  switch (chart) {
    case Chart::p: return "p";
    case Chart::log_odds: return "log_odds";
    case Chart::theta: return "theta";
  }
  return "unknown";
}

Family Family::bernoulli(int n, Chart chart) {
  if (n < 1) throw DomainError("bernoulli: n must be positive");
  if (chart == Chart::theta) throw DomainError("bernoulli: admissible charts are p and log_odds");
  return Family(FamilyKind::bernoulli, chart, n, 0.0, 0);
}

Family Family::normal_location(double sigma, int n) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("normal_location: sigma must be positive");
  if (n < 1) throw DomainError("normal_location: n must be positive");
  return Family(FamilyKind::normal_location, Chart::theta, n, sigma, 0);
}

Family Family::cauchy_location(int n) {
  if (n < 1) throw DomainError("cauchy_location: n must be positive");
  return Family(FamilyKind::cauchy_location, Chart::theta, n, 0.0, 0);
}

Family Family::cauchy_median(int k) {
  if (k < 0) throw DomainError("cauchy_median: k must be nonnegative");
  return Family(FamilyKind::cauchy_median, Chart::theta, 2 * k + 1, 0.0, k);
}

int Family::sample_size() const noexcept { return n_; }

Family Family::with_chart(Chart chart) const {
  if (kind_ == FamilyKind::bernoulli) return bernoulli(n_, chart);
  if (chart != Chart::theta) throw DomainError(to_string(kind_) + ": only the theta chart is admissible");
  return *this;
}

std::pair<double, double> Family::param_domain() const noexcept {
  if (kind_ == FamilyKind::bernoulli && chart_ == Chart::p) return {0.0, 1.0};
  return {-kInf, kInf};
}

bool Family::in_domain(double theta) const noexcept {
  const auto [lo, hi] = param_domain();
  return std::isfinite(theta) && theta > lo && theta < hi;
}

std::string Family::describe() const {
  std::ostringstream out;
  out << to_string(kind_) << "(";
  switch (kind_) {
    case FamilyKind::bernoulli: out << "n=" << n_ << ", chart=" << to_string(chart_); break;
    case FamilyKind::normal_location: out << "sigma=" << sigma_ << ", n=" << n_; break;
    case FamilyKind::cauchy_location: out << "n=" << n_; break;
    case FamilyKind::cauchy_median: out << "k=" << k_; break;
  }
  out << ")";
  return out.str();
}

Sample Sample::observations(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  return Sample{std::move(xs)};
}

void validate_sample(const Family& f, const Sample& y) {
  const auto fail = [&](const std::string& why) {
    throw DomainError("invalid sample for " + f.describe() + ": " + why);
  };
  if (y.values.empty()) fail("empty");
  for (double v : y.values)
    if (!std::isfinite(v)) fail("non-finite value");
  switch (f.kind()) {
    case FamilyKind::bernoulli: {
      if (y.values.size() != 1) fail("expected a single count");
      const double c = y.values[0];
      if (c != std::floor(c) || c < 0 || c > f.sample_size()) fail("count outside {0..n}");
      break;
    }
    case FamilyKind::normal_location:
    case FamilyKind::cauchy_median:
      if (y.values.size() != 1) fail("expected a single real");
      break;
    case FamilyKind::cauchy_location:
      if (static_cast<int>(y.values.size()) != f.sample_size()) fail("expected n observations");
      if (!std::is_sorted(y.values.begin(), y.values.end())) fail("observations must be sorted");
      break;
  }
}

double loglik(const Family& f, double theta, const Sample& y) {
  require_domain(f, theta);
  validate_sample(f, y);
  switch (f.kind()) {
    case FamilyKind::bernoulli: {
      const double n = f.sample_size();
      const double c = y.values[0];
      if (f.chart() == Chart::log_odds) {
        // y*theta - n*log(1 + e^theta), written to avoid overflow.
        const double softplus = theta > 0 ? theta + std::log1p(std::exp(-theta))
                                          : std::log1p(std::exp(theta));
        return c * theta - n * softplus;
      }
      double value = 0.0;
      if (c > 0) value += c * std::log(theta);
      if (c < n) value += (n - c) * std::log1p(-theta);
      return value;
    }
    case FamilyKind::normal_location: {
      const double d = y.values[0] - theta;
      return -f.sample_size() * d * d / (2.0 * f.sigma() * f.sigma());
    }
    case FamilyKind::cauchy_location: {
      double value = 0.0;
      for (double x : y.values) {
        const double d = x - theta;
        value -= std::log1p(d * d);
      }
      return value - f.sample_size() * std::log(kPi);
    }
    case FamilyKind::cauchy_median:
      return median_log_density(f.k(), y.values[0], theta);
  }
  return 0.0;
}

double score(const Family& f, double theta, const Sample& y) {
  require_domain(f, theta);
  validate_sample(f, y);
  switch (f.kind()) {
    case FamilyKind::bernoulli: {
      const double n = f.sample_size();
      const double c = y.values[0];
      if (f.chart() == Chart::log_odds) return c - n * logistic(theta);
      return (c - n * theta) / (theta * (1.0 - theta));
    }
    case FamilyKind::normal_location:
      return f.sample_size() * (y.values[0] - theta) / (f.sigma() * f.sigma());
    case FamilyKind::cauchy_location: {
      double value = 0.0;
      for (double x : y.values) {
        const double d = x - theta;
        value += 2.0 * d / (d * d + 1.0);
      }
      return value;
    }
    case FamilyKind::cauchy_median:
      return -median_dlogf_dw(f.k(), y.values[0] - theta);
  }
  return 0.0;
}

double score_derivative(const Family& f, double theta, const Sample& y) {
  require_domain(f, theta);
  validate_sample(f, y);
  switch (f.kind()) {
    case FamilyKind::bernoulli: {
      const double n = f.sample_size();
      const double c = y.values[0];
      if (f.chart() == Chart::log_odds) {
        const double p = logistic(theta);
        return -n * p * (1.0 - p);
      }
      const double q = 1.0 - theta;
      return -c / (theta * theta) - (n - c) / (q * q);
    }
    case FamilyKind::normal_location:
      return -f.sample_size() / (f.sigma() * f.sigma());
    case FamilyKind::cauchy_location: {
      double value = 0.0;
      for (double x : y.values) {
        const double d2 = (x - theta) * (x - theta);
        value -= 2.0 * (1.0 - d2) / ((1.0 + d2) * (1.0 + d2));
      }
      return value;
    }
    case FamilyKind::cauchy_median:
      return median_d2logf_dw2(f.k(), y.values[0] - theta);
  }
  return 0.0;
}

double fisher_info(const Family& f, double theta) {
  require_domain(f, theta);
  switch (f.kind()) {
    case FamilyKind::bernoulli: {
      const double n = f.sample_size();
      if (f.chart() == Chart::log_odds) {
        const double p = logistic(theta);
        return n * p * (1.0 - p);
      }
      return n / (theta * (1.0 - theta));
    }
    case FamilyKind::normal_location:
      return f.sample_size() / (f.sigma() * f.sigma());
    case FamilyKind::cauchy_location:
      return f.sample_size() / 2.0;
    case FamilyKind::cauchy_median:
      // Location family: information does not depend on theta.
      return median_fisher_info(f.k());
  }
  return 0.0;
}

double density(const Family& f, double theta, const Sample& y) {
  require_domain(f, theta);
  validate_sample(f, y);
  switch (f.kind()) {
    case FamilyKind::bernoulli: {
      const int n = f.sample_size();
      const int c = static_cast<int>(y.values[0]);
      const double p = mean_param(f, theta);
      const double log_choose =
          std::lgamma(n + 1.0) - std::lgamma(c + 1.0) - std::lgamma(n - c + 1.0);
      double lp = log_choose;
      if (c > 0) lp += c * std::log(p);
      if (c < n) lp += (n - c) * std::log1p(-p);
      return std::exp(lp);
    }
    case FamilyKind::normal_location: {
      const double s = f.sigma() / std::sqrt(static_cast<double>(f.sample_size()));
      const double d = (y.values[0] - theta) / s;
      return std::exp(-0.5 * d * d) / (s * std::sqrt(2.0 * kPi));
    }
    case FamilyKind::cauchy_median:
      return median_density(f.k(), y.values[0], theta);
    case FamilyKind::cauchy_location:
      break;
  }
  throw DomainError("density: full Cauchy sample has no reduced density; use loglik");
}

Sample sample_from(const Family& f, double theta, CounterRng& rng) {
  require_domain(f, theta);
  switch (f.kind()) {
    case FamilyKind::bernoulli: {
      const double p = mean_param(f, theta);
      int y = 0;
      for (int i = 0; i < f.sample_size(); ++i)
        if (rng.uniform_open() < p) ++y;
      return Sample::count(y);
    }
    case FamilyKind::normal_location: {
      const double s = f.sigma() / std::sqrt(static_cast<double>(f.sample_size()));
      return Sample::scalar(theta + s * rng.standard_normal());
    }
    case FamilyKind::cauchy_location: {
      std::vector<double> xs(static_cast<std::size_t>(f.sample_size()));
      for (double& x : xs) x = theta + rng.standard_cauchy();
      return Sample::observations(std::move(xs));
    }
    case FamilyKind::cauchy_median: {
      std::vector<double> xs(static_cast<std::size_t>(f.sample_size()));
      for (double& x : xs) x = rng.standard_cauchy();
      auto mid = xs.begin() + f.k();
      std::nth_element(xs.begin(), mid, xs.end());
      return Sample::scalar(theta + *mid);
    }
  }
  return {};
}

double median_log_normalizer(int k) {
  if (k < 0) throw DomainError("median law: k must be nonnegative");
  return std::lgamma(2.0 * k + 2.0) - 2.0 * std::lgamma(k + 1.0);
}

double median_log_density(int k, double z, double theta) {
  if (k < 0) throw DomainError("median law: k must be nonnegative");
  const double w = z - theta;
  const MedianTerms m = median_terms(w);
  return median_log_normalizer(k) + k * (std::log(m.lower) + std::log(m.upper)) +
         std::log(m.cauchy);
}

double median_density(int k, double z, double theta) {
  return std::exp(median_log_density(k, z, theta));
}

double reparam(const Family& f, Chart from, Chart to, double value) {
  const Family src = f.with_chart(from);
  (void)f.with_chart(to);
  require_domain(src, value);
  if (from == to) return value;
  return from == Chart::p ? log_odds(value) : logistic(value);
}

double reparam_jacobian(const Family& f, Chart from, Chart to, double value) {
  const Family src = f.with_chart(from);
  (void)f.with_chart(to);
  require_domain(src, value);
  if (from == to) return 1.0;
  if (from == Chart::p) return 1.0 / (value * (1.0 - value));
  const double p = logistic(value);
  return p * (1.0 - p);
}

double sample_median(const Sample& y) {
  std::vector<double> xs = y.values;
  if (xs.empty()) throw DomainError("sample_median: empty sample");
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size() / 2;
  return xs.size() % 2 == 1 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

}  // namespace slope
