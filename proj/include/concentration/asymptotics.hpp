#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "concentration/distributions.hpp"

namespace conc {

/// Leading-order predictions for ||X||_p with X in R^d, i.i.d. coordinates.
/// The o(.) remainders are not estimated; `leading_order` is always true and
/// tells consumers that agreement is only asymptotic in d.
struct PredictionReport {
  double p = 0.0;
  std::uint64_t d = 0;
  double mu_p = 0.0;
  double sigma_p = 0.0;
  /// d^{1/p} mu_p^{1/p}
  double mean_leading = 0.0;
  /// mean_leading plus the explicit 1/d correction of E|Ybar_d|^{1/p}
  double mean_second_order = 0.0;
  /// mu_p^{2/p-2} sigma_p^2 / (d^{1-2/p} p^2)
  double var_leading = 0.0;
  /// limit of sqrt(d Var||X||_p) / E||X||_p, i.e. sigma_p / (p mu_p)
  double rsd_scaled_limit = 0.0;
  bool leading_order = true;
  std::vector<AssumptionCheck> assumption_checks;
};

/// A scalar function with analytic first and second derivatives.
struct SmoothFunction {
  std::function<double(double)> value;
  std::function<double(double)> first;
  std::function<double(double)> second;
};

/// u -> |u|^a with exact derivatives for u != 0 (derivatives at 0 are
/// non-finite when a < 2).
SmoothFunction power_function(double exponent);

/// E phi(Ybar_d) ~ phi(mu) + phi''(mu) sigma^2 / (2d) for the mean of d
/// i.i.d. variables with mean mu and variance sigma^2.
struct SecondOrderExpansion {
  double phi_at_mu = 0.0;
  double phi2_at_mu = 0.0;
  double correction = 0.0;
  double value() const noexcept { return phi_at_mu + correction; }
};

SecondOrderExpansion second_order_mean(const SmoothFunction& phi, double mu,
                                       double sigma2, std::uint64_t d);

PredictionReport predict(const MomentPair& moments, std::uint64_t d);

/// predict() with moments and the IFC / Prop2 assumption checks for `spec`.
PredictionReport predict(const DistributionSpec& spec, double p, std::uint64_t d);

struct BoundReport {
  double epsilon = 0.0;
  /// Raw Chebyshev-type value; may exceed 1, in which case it is vacuous.
  double chebyshev_bound = 0.0;
  /// min(chebyshev_bound, 1), for display.
  double chebyshev_bound_clamped = 0.0;
  std::optional<double> mcdiarmid_bound;
  std::optional<double> support_bound_C;
  bool leading_order = true;
};

/// Leading-order tail bounds for |‖X‖_p / E‖X‖_p - 1| >= epsilon.
/// The bounded-difference value is only produced when `support_C` is given,
/// which requires p >= 1 (AssumptionViolation otherwise).
BoundReport bounds(const MomentPair& moments, std::uint64_t d, double epsilon,
                   std::optional<double> support_C = std::nullopt);

struct ConsistencyLimit {
  double value = 0.0;
  bool diverges = false;
};

/// lim E||X||_p^r / d^{r/p} = mu_p^{r/p}. Pass required_moment_finite = false
/// when the governing moment (E|X|^p for r < p, E|X|^r otherwise) is infinite;
/// the limit is then +inf and flagged.
ConsistencyLimit consistency_limit(const MomentPair& moments, double r,
                                   bool required_moment_finite = true);

}  // namespace conc
