#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "concentration/rng.hpp"

namespace conc {

enum class Family { Uniform01, StandardNormal, GaussianMixtureSym, Empirical };

std::string_view to_string(Family family);

/// Law of a single coordinate X of the random vector.
///
/// Built with the named constructors, which validate their arguments; a
/// DistributionSpec that exists is always a valid law.
class DistributionSpec {
 public:
  static DistributionSpec uniform01();
  static DistributionSpec standard_normal();
  /// Balanced mixture 1/2 N(-offset, 1) + 1/2 N(+offset, 1).
  static DistributionSpec gaussian_mixture(double offset = 1.0);
  /// Resampled with replacement. Needs at least two distinct finite values.
  static DistributionSpec empirical(std::vector<double> values,
                                    std::string description = "empirical");

  Family family() const noexcept { return family_; }
  double offset() const noexcept { return offset_; }
  std::span<const double> values() const noexcept { return values_; }
  const std::string& description() const noexcept { return description_; }

  /// Sup of |X| over the support, +inf for the Gaussian families.
  double support_bound() const noexcept;

 private:
  DistributionSpec(Family family, std::string description)
      : family_(family), description_(std::move(description)) {}

  Family family_;
  double offset_ = 0.0;
  std::vector<double> values_;
  std::string description_;
};

enum class MomentMethod { ClosedForm, Quadrature, MonteCarlo };

std::string_view to_string(MomentMethod method);

/// mu_p = E|X|^p and sigma_p = sqrt(Var |X|^p).
struct MomentPair {
  double p = 0.0;
  double mu_p = 0.0;
  double sigma_p = 0.0;
  MomentMethod method = MomentMethod::ClosedForm;
  double abs_error_bound = 0.0;
  /// E|X|^{2p} - mu_p^2 came out slightly negative and was clamped to 0.
  bool variance_clamped = false;
};

/// Draws `count` i.i.d. values. The output depends only on (spec, rng state).
std::vector<double> sample(const DistributionSpec& spec, std::size_t count,
                           RngStream& rng);

/// Fills `out` with i.i.d. draws; the allocation-free form of sample().
void sample_into(const DistributionSpec& spec, std::span<double> out,
                 RngStream& rng);

/// Closed form for Uniform01 and for StandardNormal at even integer p;
/// adaptive quadrature for the other built-in cases (error <= 1e-10 absolute
/// for moments of order one, scaled by the moment size above that); plug-in
/// sample moments for Empirical.
MomentPair moments(const DistributionSpec& spec, double p);

/// moments() computed by quadrature even where a closed form exists
/// (Uniform01, StandardNormal at even p). Not available for Empirical.
MomentPair moments_by_quadrature(const DistributionSpec& spec, double p);

/// E|X|^q for one exponent, same method selection as moments().
struct AbsoluteMoment {
  double value;
  double abs_error;
  MomentMethod method;
};
AbsoluteMoment absolute_moment(const DistributionSpec& spec, double q);

enum class Proposition { Prop2, IFC, FhI, FhII, Tcl, Yu };

std::string_view to_string(Proposition prop);

enum class TriState { Yes, No, Unknown };

std::string_view to_string(TriState t);

struct AssumptionCheck {
  Proposition proposition = Proposition::Prop2;
  double p = 0.0;
  /// Order m such that E|X|^m < inf is required.
  double required_order = 0.0;
  TriState holds = TriState::Unknown;
  std::string note;
};

/// Moment hypotheses: max(2,p) for Prop2, max(4,3p) for IFC and the
/// Chebyshev-type bound, p for the fixed-n range law, 3p for the growing-n
/// law. The bounded-difference bound additionally needs 0 < |X| <= C a.s.
/// and p >= 1.
AssumptionCheck check_assumptions(const DistributionSpec& spec, double p,
                                  Proposition proposition);

}  // namespace conc
