#pragma once

#include <functional>

namespace slope::quad {

struct Options {
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  int max_subdivisions = 2000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
  bool converged = false;
  bool divergent = false;  // an endpoint segment kept its mass under repeated halving
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 15-point Gauss-Kronrod on the finite interval [a, b].
/// Never throws; `converged` is false when the tolerance was not met before
/// the subdivision cap, when intervals collapsed to machine precision, or
/// when the integrand produced a non-finite value, or when an endpoint
/// singularity is found to be non-integrable (`divergent`).
Result try_integrate(const Integrand& f, double a, double b, const Options& opt = {});

/// As try_integrate but throws QuadratureError on failure.
double integrate(const Integrand& f, double a, double b, const Options& opt = {});

/// Integral over the real line through x = center + scale * tan(t),
/// t in (-pi/2, pi/2). Kronrod nodes are interior so the endpoints of the
/// t-interval are never evaluated.
Result try_integrate_real_line(const Integrand& f, double center, double scale,
                               const Options& opt = {});
double integrate_real_line(const Integrand& f, double center, double scale,
                           const Options& opt = {});

}  // namespace slope::quad
