#pragma once

#include "slope/families.hpp"
#include "slope/intervals.hpp"

namespace slope {

/// Kullback-Leibler ball {m : D(m, center) < radius} in chart coordinates.
struct KlBall {
  double center = 0.0;
  double radius = 0.0;

  bool contains(const Family& f, double theta) const;
};

/// D(m1, m2) = E_{m1} log(m1 / m2) for the reduced-sample laws. Closed forms:
/// Cauchy log((t1 - t2)^2 + 4) - log 4 per observation, normal
/// n (t1 - t2)^2 / (2 sigma^2), Bernoulli n times the binary relative entropy.
/// The Cauchy form is the single-observation divergence regardless of n.
double kl_divergence(const Family& f, double theta1, double theta2);

/// Smallest covering KL ball of (lo, hi): golden-section search over centers
/// in [lo, hi] of max(D(lo, c), D(hi, c)), to 1e-10 in the center.
KlBall smallest_covering_ball(const Family& f, double lo, double hi);

/// Radius of the smallest covering KL ball.
double kl_length(const Family& f, const Interval& iv);

}  // namespace slope
