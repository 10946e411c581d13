#include "slope/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

#include "slope/error.hpp"

namespace slope::quad {
namespace {

// 15-point Kronrod abscissae on [-1, 1]; odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  int edge = 0;  // -1 touches a, +1 touches b, 2 both
  int run = 0;   // consecutive edge splits that kept (or grew) the mass
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod15(const Integrand& f, double a, double b, bool& finite) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  finite = finite && std::isfinite(kronrod) && std::isfinite(gauss);
  // Plain |K - G|; the QUADPACK rescaling is deliberately not applied so that
  // slowly divergent integrands keep a large error estimate.
  return {a, b, kronrod, std::abs(kronrod - gauss), 0, 0};
}

// A segment touching an endpoint whose mass does not shrink when halved
// this many times in a row marks a non-integrable endpoint singularity.
constexpr int kDivergentRun = 10;

void inherit_edge(const Segment& parent, Segment& child, int edge) {
  child.edge = edge;
  if (std::abs(child.value) >= (1.0 - 1e-6) * std::abs(parent.value)) child.run = parent.run + 1;
}

}  // namespace

Result try_integrate(const Integrand& f, double a, double b, const Options& opt) {
  Result result;
  if (a == b) {
    result.converged = true;
    return result;
  }
  bool finite = true;
  std::priority_queue<Segment> heap;
  Segment first = kronrod15(f, a, b, finite);
  first.edge = 2;
  double total = first.value;
  double total_error = first.error;
  heap.push(first);
  const auto tolerance = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };

  while (finite && total_error > tolerance() && result.subdivisions < opt.max_subdivisions) {
    Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // collapsed to adjacent doubles
    heap.pop();
    Segment left = kronrod15(f, worst.a, mid, finite);
    Segment right = kronrod15(f, mid, worst.b, finite);
    if (worst.edge == -1 || worst.edge == 2) inherit_edge(worst, left, -1);
    if (worst.edge == 1 || worst.edge == 2) inherit_edge(worst, right, 1);
    if (std::abs(worst.value) > opt.abs_tol &&
        (left.run >= kDivergentRun || right.run >= kDivergentRun))
      result.divergent = true;
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++result.subdivisions;
    if (result.divergent) break;
  }

  // Re-sum from the segment list to remove accumulated update round-off.
  double value = 0.0;
  double error = 0.0;
  std::vector<Segment> segments;
  segments.reserve(heap.size());
  while (!heap.empty()) {
    segments.push_back(heap.top());
    heap.pop();
  }
  std::sort(segments.begin(), segments.end(),
            [](const Segment& x, const Segment& y) { return x.a < y.a; });
  for (const auto& s : segments) {
    value += s.value;
    error += s.error;
  }
  result.value = value;
  result.error = error;
  result.converged =
      finite && !result.divergent && error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(value));
  return result;
}

double integrate(const Integrand& f, double a, double b, const Options& opt) {
  const Result r = try_integrate(f, a, b, opt);
  if (!r.converged) {
    std::ostringstream msg;
    msg << "quadrature on [" << a << ", " << b << "] " << (r.divergent ? "diverges" : "did not converge") << ": estimate " << r.value
        << ", error " << r.error << " after " << r.subdivisions << " subdivisions";
    throw QuadratureError(msg.str(), r.value, r.error);
  }
  return r.value;
}

Result try_integrate_real_line(const Integrand& f, double center, double scale,
                               const Options& opt) {
  const auto mapped = [&](double t) {
    const double c = std::cos(t);
    const double x = center + scale * std::tan(t);
    const double v = f(x);
    if (v == 0.0) return 0.0;
    return v * scale / (c * c);
  };
  constexpr double h = std::numbers::pi / 2;
  return try_integrate(mapped, -h, h, opt);
}

double integrate_real_line(const Integrand& f, double center, double scale,
                           const Options& opt) {
  const Result r = try_integrate_real_line(f, center, scale, opt);
  if (!r.converged) {
    std::ostringstream msg;
    msg << "real-line quadrature " << (r.divergent ? "diverges" : "did not converge") << ": estimate " << r.value << ", error "
        << r.error;
    throw QuadratureError(msg.str(), r.value, r.error);
  }
  return r.value;
}

}  // namespace slope::quad
