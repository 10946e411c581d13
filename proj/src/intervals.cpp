#include "slope/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "slope/error.hpp"

namespace slope {
namespace {

constexpr int kMaxDoublings = 60;
constexpr int kScanPoints = 64;
constexpr int kMleGridIntervals = 2000;

/// Bisection keeping pred(lo) true and pred(hi) false, to adjacent doubles.
double bisect_predicate(const std::function<bool(double)>& pred, double lo, double hi) {
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (pred(mid)) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double standardized_score(const Family& f, double theta, const Sample& y) {
  return score(f, theta, y) / std::sqrt(fisher_info(f, theta));
}

/// Point `j` of the outward bracket sequence from `start` toward side `dir`.
/// Unbounded sides double a base step; bounded sides halve the gap to the boundary.
double bracket_point(double start, double dir, double base, double boundary, int j) {
  if (std::isfinite(boundary)) return start + (boundary - start) * (1.0 - std::ldexp(1.0, -j));
  return start + dir * base * std::ldexp(1.0, j - 1);
}

}  // namespace

std::string to_string(IntervalMethod method) {
  switch (method) {
    case IntervalMethod::score_inversion: return "score_inversion";
    case IntervalMethod::lrt: return "lrt";
    case IntervalMethod::wald_expected: return "wald_expected";
    case IntervalMethod::wald_observed: return "wald_observed";
    case IntervalMethod::exact_bernoulli: return "exact_bernoulli";
  }
  return "unknown";
}

double bisect_root(const std::function<double(double)>& f, double a, double b) {
  const double fa = f(a);
  const double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0)) throw NumericalError("bisect_root: endpoints do not bracket a root");
  const bool a_positive = fa > 0;
  return bisect_predicate([&](double x) { return (f(x) > 0) == a_positive; }, a, b);
}

StationaryPoints cauchy_stationary_points(const Sample& y) {
  const Family f = Family::cauchy_location(static_cast<int>(y.values.size()));
  validate_sample(f, y);
  const double lo = y.values.front();
  const double hi = y.values.back();
  StationaryPoints out;
  if (lo == hi) {
    out.maxima = {lo};
    out.global_max = lo;
    return out;
  }

  std::vector<double> grid;
  grid.reserve(kMleGridIntervals + 1 + y.values.size());
  const double step = (hi - lo) / kMleGridIntervals;
  for (int i = 0; i <= kMleGridIntervals; ++i) grid.push_back(i == kMleGridIntervals ? hi : lo + step * i);
  grid.insert(grid.end(), y.values.begin(), y.values.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const auto s = [&](double t) { return score(f, t, y); };
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = s(grid[i]);

  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = grid[i];
    const double b = grid[i + 1];
    if (values[i] > 0 && values[i + 1] <= 0) {
      out.maxima.push_back(bisect_predicate([&](double t) { return s(t) > 0; }, a, b));
    } else if (values[i] < 0 && values[i + 1] >= 0) {
      out.minima.push_back(bisect_predicate([&](double t) { return s(t) < 0; }, a, b));
    }
  }
  if (out.maxima.empty()) throw NumericalError("cauchy_stationary_points: no local maximum found");

  double best = out.maxima.front();
  double best_ll = loglik(f, best, y);
  for (std::size_t i = 1; i < out.maxima.size(); ++i) {
    const double ll = loglik(f, out.maxima[i], y);
    if (ll > best_ll) {
      best = out.maxima[i];
      best_ll = ll;
    }
  }
  out.global_max = best;
  return out;
}

double cauchy_mle(const Sample& y) { return cauchy_stationary_points(y).global_max; }

double maximum_likelihood(const Family& f, const Sample& y) {
  validate_sample(f, y);
  switch (f.kind()) {
    case FamilyKind::bernoulli: {
      const int n = f.sample_size();
      const int c = static_cast<int>(y.values[0]);
      if (c == 0 || c == n)
        throw NonexistenceError("maximum_likelihood: Bernoulli maximum lies on the chart boundary");
      const double p = static_cast<double>(c) / n;
      return f.chart() == Chart::p ? p : reparam(f, Chart::p, Chart::log_odds, p);
    }
    case FamilyKind::normal_location:
    case FamilyKind::cauchy_median:
      return y.values[0];
    case FamilyKind::cauchy_location:
      return cauchy_mle(y);
  }
  return 0.0;
}

double observed_info(const Family& f, double theta_hat, const Sample& y) {
  const double info = -score_derivative(f, theta_hat, y);
  if (!(info > 0.0)) {
    std::ostringstream msg;
    msg << "observed_info: nonpositive curvature " << info << " at " << theta_hat;
    throw NumericalError(msg.str());
  }
  return info;
}

Interval score_interval(const Family& f, const Sample& y, double k) {
  if (!(k > 0.0)) throw DomainError("score_interval: k must be positive");
  if (f.kind() == FamilyKind::bernoulli) {
    validate_sample(f, y);
    const int n = f.sample_size();
    const int c = static_cast<int>(y.values[0]);
    if (c == 0 || c == n) {
      // No interior root: the standardized score keeps one sign and is
      // +-sqrt(n p / (1 - p)) or its mirror, so the single crossing is explicit.
      const double edge = c == 0 ? k * k / (n + k * k) : n / (n + k * k);
      const double t = reparam(f, Chart::p, f.chart(), edge);
      const auto [dom_lo, dom_hi] = f.param_domain();
      Interval iv;
      iv.lo = c == 0 ? dom_lo : t;
      iv.hi = c == 0 ? t : dom_hi;
      iv.method = IntervalMethod::score_inversion;
      iv.level_k = k;
      return iv;
    }
  }
  const double center = maximum_likelihood(f, y);
  const auto gbar = [&](double t) { return standardized_score(f, t, y); };
  const double base = 50.0 / std::sqrt(fisher_info(f, center));
  const auto [dom_lo, dom_hi] = f.param_domain();

  // Left of the root gbar climbs toward +k, right of it falls toward -k.
  const auto find_end = [&](double dir) -> double {
    const double boundary = dir < 0 ? dom_lo : dom_hi;
    const auto beyond = [&](double t) { return dir < 0 ? gbar(t) >= k : gbar(t) <= -k; };
    double prev = center;
    for (int j = 1; j <= kMaxDoublings + 1; ++j) {
      const double seg_end = bracket_point(center, dir, base, boundary, j);
      for (int i = 1; i <= kScanPoints; ++i) {
        const double t = prev + (seg_end - prev) * i / kScanPoints;
        if (!f.in_domain(t)) break;
        if (beyond(t)) {
          const double inner = prev + (seg_end - prev) * (i - 1) / kScanPoints;
          return bisect_predicate([&](double x) { return !beyond(x); }, inner, t);
        }
      }
      prev = seg_end;
    }
    if (std::isfinite(boundary)) return boundary;
    std::ostringstream msg;
    msg << "score_interval: standardized score never reaches " << (dir < 0 ? "+" : "-") << k
        << " on the " << (dir < 0 ? "left" : "right") << " of " << center;
    throw NonexistenceError(msg.str());
  };

  Interval iv;
  iv.lo = find_end(-1.0);
  iv.hi = find_end(+1.0);
  iv.method = IntervalMethod::score_inversion;
  iv.level_k = k;

  double last = 0.0;
  for (int i = 1; i <= kScanPoints; ++i) {
    const double t = iv.lo + (iv.hi - iv.lo) * i / (kScanPoints + 1);
    const double v = gbar(t);
    if (i > 1 && !(v < last)) {
      std::ostringstream msg;
      msg << "score_interval: standardized score is not monotone on (" << iv.lo << ", " << iv.hi << ")";
      throw NumericalError(msg.str());
    }
    last = v;
  }
  return iv;
}

double LrtEstimate::operator()(double theta) const {
  return 2.0 * (loglik(family, theta, sample) - max_loglik);
}

double LrtEstimate::signed_root(double theta) const {
  const double s = (*this)(theta);
  const double root = std::sqrt(std::max(0.0, -s));
  return mle > theta ? root : (mle < theta ? -root : 0.0);
}

LrtEstimate lrt_estimate(const Family& f, const Sample& y) {
  validate_sample(f, y);
  LrtEstimate est{f, y, 0.0, 0.0, {}, {}};
  if (f.kind() == FamilyKind::cauchy_location) {
    StationaryPoints sp = cauchy_stationary_points(y);
    est.mle = sp.global_max;
    est.local_maxima = std::move(sp.maxima);
    est.local_minima = std::move(sp.minima);
  } else {
    est.mle = maximum_likelihood(f, y);
    est.local_maxima = {est.mle};
  }
  est.max_loglik = loglik(f, est.mle, y);
  return est;
}

Interval lrt_interval(const LrtEstimate& est, double z) {
  if (!(z >= 0.0)) throw DomainError("lrt_interval: z must be nonnegative");
  Interval iv;
  iv.method = IntervalMethod::lrt;
  iv.level_k = z;
  if (z == 0.0) {
    iv.lo = iv.hi = est.mle;
    return iv;
  }
  const double target = -z * z;
  const auto inside = [&](double t) { return est(t) > target; };

  double left_anchor = est.mle;
  double right_anchor = est.mle;
  for (double m : est.local_maxima) {
    if (!inside(m)) continue;
    left_anchor = std::min(left_anchor, m);
    right_anchor = std::max(right_anchor, m);
  }

  const double base = z / std::sqrt(fisher_info(est.family, est.mle));
  const auto [dom_lo, dom_hi] = est.family.param_domain();
  const auto find_end = [&](double anchor, double dir) -> double {
    const double boundary = dir < 0 ? dom_lo : dom_hi;
    double prev = anchor;
    for (int j = 1; j <= kMaxDoublings; ++j) {
      const double b = bracket_point(anchor, dir, base, boundary, j);
      if (!est.family.in_domain(b)) break;
      if (!inside(b)) return bisect_predicate(inside, prev, b);
      prev = b;
    }
    if (std::isfinite(boundary)) return boundary;
    throw NumericalError("lrt_interval: bracket expansion failed after 60 doublings");
  };

  iv.lo = find_end(left_anchor, -1.0);
  iv.hi = find_end(right_anchor, +1.0);
  for (double m : est.local_minima)
    if (m > left_anchor && m < right_anchor && !inside(m)) iv.disconnected = true;
  return iv;
}

Interval wald_interval(double theta_hat, double info, double z, double adjustment,
                       IntervalMethod method) {
  if (!(info > 0.0) || !std::isfinite(info)) throw DomainError("wald_interval: information must be positive");
  if (!std::isfinite(theta_hat)) throw DomainError("wald_interval: non-finite estimate");
  const double half = adjustment * z / std::sqrt(info);
  Interval iv;
  iv.lo = theta_hat - half;
  iv.hi = theta_hat + half;
  iv.method = method;
  iv.level_k = z;
  iv.slope_b = -std::sqrt(info);
  iv.adjustment = adjustment;
  return iv;
}

Interval exact_bernoulli_interval(int n, int y, double alpha) {
  if (n < 1 || y < 0 || y > n) throw DomainError("exact_bernoulli_interval: need 0 <= y <= n");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("exact_bernoulli_interval: alpha must be in (0, 1)");
  const Family f = Family::bernoulli(n, Chart::p);
  const Sample obs = Sample::count(y);

  // Probability that the standardized score is at least (upper) or at most
  // (lower) its observed value, summing the pmf over that part of {0..n}.
  const auto tail = [&](double p, bool upper) {
    const double observed = standardized_score(f, p, obs);
    double total = 0.0;
    for (int c = 0; c <= n; ++c) {
      const Sample s = Sample::count(c);
      const double v = standardized_score(f, p, s);
      if (upper ? v >= observed : v <= observed) total += density(f, p, s);
    }
    return total;
  };
  const double half_alpha = 0.5 * alpha;
  constexpr double kEdge = 1e-300;
  constexpr double kTop = 1.0 - 0x1.0p-53;

  Interval iv;
  iv.method = IntervalMethod::exact_bernoulli;
  iv.level_k = alpha;
  iv.lo = y == 0 ? 0.0
                 : bisect_predicate([&](double p) { return tail(p, true) <= half_alpha; }, kEdge, kTop);
  iv.hi = y == n ? 1.0
                 : bisect_predicate([&](double p) { return tail(p, false) > half_alpha; }, kEdge, kTop);
  return iv;
}

}  // namespace slope
