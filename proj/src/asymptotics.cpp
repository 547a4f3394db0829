#include "concentration/asymptotics.hpp"

#include <cmath>
#include <limits>

#include "concentration/errors.hpp"

namespace conc {

SmoothFunction power_function(double a) {
  SmoothFunction f;
  f.value = [a](double u) { return std::pow(std::abs(u), a); };
  f.first = [a](double u) {
    const double s = u < 0.0 ? -1.0 : 1.0;
    return s * a * std::pow(std::abs(u), a - 1.0);
  };
  f.second = [a](double u) {
    if (a == 1.0) return 0.0;
    return a * (a - 1.0) * std::pow(std::abs(u), a - 2.0);
  };
  return f;
}

SecondOrderExpansion second_order_mean(const SmoothFunction& phi, double mu,
                                       double sigma2, std::uint64_t d) {
  if (d == 0) throw InvalidInput("second_order_mean: d must be >= 1");
  if (!(sigma2 >= 0.0)) throw InvalidInput("second_order_mean: sigma2 must be >= 0");
  SecondOrderExpansion e;
  e.phi_at_mu = phi.value(mu);
  e.phi2_at_mu = phi.second(mu);
  if (!std::isfinite(e.phi_at_mu) || !std::isfinite(e.phi2_at_mu))
    throw SingularExpansion("second_order_mean: phi or phi'' is not finite at mu");
  e.correction = e.phi2_at_mu * sigma2 / (2.0 * static_cast<double>(d));
  return e;
}

PredictionReport predict(const MomentPair& m, std::uint64_t d) {
  if (d == 0) throw InvalidInput("predict: d must be >= 1");
  if (!(m.p > 0.0)) throw InvalidInput("predict: p must be > 0");
  if (!(m.mu_p > 0.0))
    throw DegenerateDistribution("predict: mu_p = 0, the norm vanishes almost surely");

  const double p = m.p;
  const double dd = static_cast<double>(d);
  const double sigma2 = m.sigma_p * m.sigma_p;

  PredictionReport r;
  r.p = p;
  r.d = d;
  r.mu_p = m.mu_p;
  r.sigma_p = m.sigma_p;
  r.mean_leading = std::pow(dd, 1.0 / p) * std::pow(m.mu_p, 1.0 / p);
  const auto expansion = second_order_mean(power_function(1.0 / p), m.mu_p, sigma2, d);
  r.mean_second_order = std::pow(dd, 1.0 / p) * expansion.value();
  r.var_leading = std::pow(m.mu_p, 2.0 / p - 2.0) * sigma2 /
                  (std::pow(dd, 1.0 - 2.0 / p) * p * p);
  r.rsd_scaled_limit = m.sigma_p / (p * m.mu_p);
  return r;
}

PredictionReport predict(const DistributionSpec& spec, double p, std::uint64_t d) {
  PredictionReport r = predict(moments(spec, p), d);
  r.assumption_checks.push_back(check_assumptions(spec, p, Proposition::Prop2));
  r.assumption_checks.push_back(check_assumptions(spec, p, Proposition::IFC));
  return r;
}

BoundReport bounds(const MomentPair& m, std::uint64_t d, double epsilon,
                   std::optional<double> support_C) {
  if (!(epsilon > 0.0)) throw InvalidInput("bounds: epsilon must be > 0");
  if (d == 0) throw InvalidInput("bounds: d must be >= 1");
  if (!(m.mu_p > 0.0)) throw DegenerateDistribution("bounds: mu_p = 0");

  const double p = m.p;
  const double dd = static_cast<double>(d);
  BoundReport b;
  b.epsilon = epsilon;
  b.chebyshev_bound = m.sigma_p * m.sigma_p /
                      (epsilon * epsilon * dd * p * p * m.mu_p * m.mu_p);
  b.chebyshev_bound_clamped = std::min(b.chebyshev_bound, 1.0);

  if (support_C) {
    if (p < 1.0)
      throw AssumptionViolation("bounded-difference bound requires p >= 1");
    if (!(*support_C > 0.0)) throw InvalidInput("bounds: support bound C must be > 0");
    const double C = *support_C;
    b.support_bound_C = C;
    b.mcdiarmid_bound = 2.0 * std::exp(-epsilon * epsilon * std::pow(dd, 2.0 / p - 1.0) *
                                       std::pow(m.mu_p, 2.0 / p) / (2.0 * C * C));
  }
  return b;
}

ConsistencyLimit consistency_limit(const MomentPair& m, double r,
                                   bool required_moment_finite) {
  if (!(r > 0.0)) throw InvalidInput("consistency_limit: r must be > 0");
  if (!required_moment_finite)
    return {std::numeric_limits<double>::infinity(), true};
  return {std::pow(m.mu_p, r / m.p), false};
}

}  // namespace conc
