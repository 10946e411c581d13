#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "slope/families.hpp"

namespace slope {

enum class IntervalMethod { score_inversion, lrt, wald_expected, wald_observed, exact_bernoulli };

std::string to_string(IntervalMethod method);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  IntervalMethod method = IntervalMethod::score_inversion;
  double level_k = 0.0;  // k, z, or alpha (exact_bernoulli) used to build it
  std::optional<double> slope_b;  // slope of the linearization, when one was used
  double adjustment = 1.0;        // multiplier applied to z
  bool disconnected = false;      // the level set was a union; [lo, hi] is its hull

  double width() const noexcept { return hi - lo; }
  bool contains(double theta) const noexcept { return lo < theta && theta < hi; }
};

/// Local extrema of the Cauchy log-likelihood, ascending.
struct StationaryPoints {
  std::vector<double> maxima;
  std::vector<double> minima;
  double global_max = 0.0;
};

/// Every sign change of the score on a 2001-point grid over [x_(1), x_(n)]
/// (plus the observations), refined by bisection to machine precision.
StationaryPoints cauchy_stationary_points(const Sample& y);

/// Global maximizer of the Cauchy location log-likelihood. Ties go to the
/// larger log-likelihood, then to the smaller theta.
double cauchy_mle(const Sample& y);

/// Root of the score with the largest likelihood: closed form for the
/// Bernoulli (1 <= y <= n-1), normal, and median families; cauchy_mle for
/// the full sample. Throws NonexistenceError when the maximum is on the
/// chart boundary.
double maximum_likelihood(const Family& f, const Sample& y);

/// -l''(theta_hat); throws NumericalError when the curvature is not negative.
double observed_info(const Family& f, double theta_hat, const Sample& y);

/// {theta : -k < standardized score < k}. Endpoints solved by bisection after
/// a 64-point sign scan of segments starting at theta_hat +- 50 / sqrt(I),
/// doubled at most 60 times. A bounded chart side without a crossing yields
/// the chart boundary; an unbounded one throws NonexistenceError. A
/// standardized score that is not strictly decreasing across the interval
/// throws NumericalError. Bernoulli counts 0 and n give one-sided intervals
/// ending at the chart boundary.
Interval score_interval(const Family& f, const Sample& y, double k);

/// S(theta) = 2 (l(theta) - sup l), with the local maxima needed to take the
/// outermost level crossings.
struct LrtEstimate {
  Family family;
  Sample sample;
  double mle = 0.0;
  double max_loglik = 0.0;
  std::vector<double> local_maxima;
  std::vector<double> local_minima;

  double operator()(double theta) const;
  /// sign(mle - theta) * sqrt(-S(theta)).
  double signed_root(double theta) const;
};

LrtEstimate lrt_estimate(const Family& f, const Sample& y);

/// Hull of {theta : S(theta) > -z^2}: outermost roots found outward from the
/// extreme qualifying local maxima with geometric bracket expansion (at most
/// 60 doublings). `disconnected` is set when a local minimum between them
/// drops to or below -z^2.
Interval lrt_interval(const LrtEstimate& est, double z);

/// theta_hat +- adjustment * z / sqrt(info). slope_b records -sqrt(info).
Interval wald_interval(double theta_hat, double info, double z, double adjustment = 1.0,
                       IntervalMethod method = IntervalMethod::wald_expected);

/// Inversion of exact binomial tails under the score ordering of {0..n}:
/// lo = sup{p : P_p(s >= s(y)) <= alpha/2}, hi = inf{p : P_p(s <= s(y)) <= alpha/2};
/// lo = 0 when y = 0 and hi = 1 when y = n.
Interval exact_bernoulli_interval(int n, int y, double alpha);

/// Bisection to machine precision on [a, b]; `f(a)` and `f(b)` must have
/// opposite signs (zero counts as the sign of `b`'s side).
double bisect_root(const std::function<double(double)>& f, double a, double b);

}  // namespace slope
