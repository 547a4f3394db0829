#pragma once

#include <functional>
#include <initializer_list>

namespace conc::quad {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
};

/// Tanh-sinh (double exponential) quadrature on [a, b]. Integrable endpoint
/// singularities such as x^q near 0 are fine. Throws NumericFailure when the
/// error estimate stays above `tolerance`.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double tolerance);

/// Integrates f over [a, b] split at the given interior points, summing both
/// values and error estimates. Points outside (a, b) are ignored.
QuadResult integrate_split(const std::function<double(double)>& f, double a,
                           double b, std::initializer_list<double> breaks,
                           double tolerance);

/// Smallest x >= start (stepping by `step`) where |f(x)| drops below
/// relative * peak and keeps decreasing. Used to truncate Gaussian-type tails.
double tail_cutoff(const std::function<double(double)>& f, double start,
                   double peak, double relative = 1e-16, double step = 0.25);

}  // namespace conc::quad
