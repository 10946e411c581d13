#include "slope/klgeom.hpp"

#include <cmath>
#include <limits>

#include "slope/error.hpp"

namespace slope {
namespace {

/// x log(x / y) with the 0 log 0 = 0 convention.
double xlogratio(double x, double y) { return x == 0.0 ? 0.0 : x * (std::log(x) - std::log(y)); }

double bernoulli_mean(const Family& f, double theta) {
  return f.chart() == Chart::p ? theta : reparam(f, Chart::log_odds, Chart::p, theta);
}

bool on_closure(const Family& f, double theta) {
  const auto [lo, hi] = f.param_domain();
  return f.in_domain(theta) || (std::isfinite(lo) && theta == lo) || (std::isfinite(hi) && theta == hi);
}

}  // namespace

double kl_divergence(const Family& f, double theta1, double theta2) {
  // The first model may sit on a finite chart boundary (a degenerate law).
  if (!on_closure(f, theta1) || !f.in_domain(theta2))
    throw DomainError("kl_divergence: parameters outside the domain of " + f.describe());
  switch (f.kind()) {
    case FamilyKind::cauchy_location: {
      const double d = theta1 - theta2;
      return std::log1p(d * d / 4.0);
    }
    case FamilyKind::normal_location: {
      const double d = theta1 - theta2;
      return f.sample_size() * d * d / (2.0 * f.sigma() * f.sigma());
    }
    case FamilyKind::bernoulli: {
      const double p1 = bernoulli_mean(f, theta1);
      const double p2 = bernoulli_mean(f, theta2);
      return f.sample_size() * (xlogratio(p1, p2) + xlogratio(1.0 - p1, 1.0 - p2));
    }
    case FamilyKind::cauchy_median:
      break;
  }
  throw DomainError("kl_divergence: no closed form for " + f.describe());
}

bool KlBall::contains(const Family& f, double theta) const {
  return kl_divergence(f, theta, center) < radius;
}

KlBall smallest_covering_ball(const Family& f, double lo, double hi) {
  if (!(lo <= hi)) throw DomainError("smallest_covering_ball: need lo <= hi");
  if (lo == hi) return {lo, 0.0};
  if (!std::isfinite(lo) || !std::isfinite(hi))
    return {0.5 * (lo + hi), std::numeric_limits<double>::infinity()};

  const auto cover = [&](double c) {
    return std::max(kl_divergence(f, lo, c), kl_divergence(f, hi, c));
  };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  // Keep probes strictly inside so the center stays in the open domain.
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = cover(c);
  double fd = cover(d);
  while (b - a > 1e-10) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = cover(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = cover(d);
    }
  }
  const double center = 0.5 * (a + b);
  return {center, cover(center)};
}

double kl_length(const Family& f, const Interval& iv) {
  return smallest_covering_ball(f, iv.lo, iv.hi).radius;
}

}  // namespace slope
