#include "concentration/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "concentration/errors.hpp"

namespace conc::quad {

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double tolerance) {
  if (!(a <= b)) throw InvalidInput("integrate: need a <= b");
  if (a == b) return {};
  // The abscissa tables are built once per thread.
  thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
  double error = 0.0;
  double l1 = 0.0;
  const double value = rule.integrate([&f](double x) { return f(x); }, a, b, 1e-14, &error, &l1);
  if (!std::isfinite(value) || !(error <= tolerance)) {
    std::ostringstream msg;
    msg << "quadrature on [" << a << ", " << b << "] reached error " << error
        << " > tolerance " << tolerance;
    throw NumericFailure(msg.str(), error);
  }
  return {value, error};
}

QuadResult integrate_split(const std::function<double(double)>& f, double a,
                           double b, std::initializer_list<double> breaks,
                           double tolerance) {
  std::vector<double> knots{a};
  for (double x : breaks)
    if (x > a && x < b) knots.push_back(x);
  knots.push_back(b);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  QuadResult total;
  const double piece_tol = tolerance / static_cast<double>(knots.size() - 1);
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const QuadResult part = integrate(f, knots[i], knots[i + 1], piece_tol);
    total.value += part.value;
    total.abs_error += part.abs_error;
  }
  return total;
}

double tail_cutoff(const std::function<double(double)>& f, double start,
                   double peak, double relative, double step) {
  double x = start;
  double prev = std::abs(f(x));
  for (int i = 0; i < 100000; ++i) {
    x += step;
    const double v = std::abs(f(x));
    if (v <= relative * peak && v <= prev) return x;
    prev = v;
  }
  throw NumericFailure("tail_cutoff: integrand does not decay", prev);
}

}  // namespace conc::quad
