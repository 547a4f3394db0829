#include "concentration/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "concentration/errors.hpp"
#include "concentration/quadrature.hpp"

namespace conc {

namespace {

constexpr double kAbsTolerance = 1e-10;
constexpr double kRelTolerance = 1e-13;

double double_factorial_odd(int k) {
  // (2j-1)!! for k = 2j-1; 1 for k <= 0.
  double r = 1.0;
  for (int i = k; i > 1; i -= 2) r *= i;
  return r;
}

bool is_even_integer(double p) {
  return p == std::floor(p) && std::fmod(p, 2.0) == 0.0 && p < 1e6;
}

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// E|X|^q for the symmetric mixture with component means +-c (c = 0 gives the
// standard normal), as the integral of x^q (phi(x-c) + phi(x+c)) over x >= 0.
AbsoluteMoment gaussian_abs_moment(double c, double q) {
  auto integrand = [c, q](double x) {
    const double w = normal_pdf(x - c) + normal_pdf(x + c);
    return x == 0.0 ? (q == 0.0 ? w : 0.0) : std::pow(x, q) * w;
  };
  const double peak_x = 0.5 * (c + std::sqrt(c * c + 4.0 * q));
  const double peak = std::max(integrand(peak_x), integrand(std::max(peak_x, 1.0)));
  const double cutoff = quad::tail_cutoff(integrand, std::max(peak_x, 1.0), peak);
  const auto r = quad::integrate_split(integrand, 0.0, cutoff,
                                       {std::min(peak_x, 1.0), peak_x, c},
                                       std::numeric_limits<double>::infinity());
  const double allowed = std::max(kAbsTolerance, kRelTolerance * std::abs(r.value));
  if (!(r.abs_error <= allowed)) {
    std::ostringstream msg;
    msg << "moment quadrature for E|X|^" << q << " did not converge (error "
        << r.abs_error << ")";
    throw NumericFailure(msg.str(), r.abs_error);
  }
  return {r.value, r.abs_error, MomentMethod::Quadrature};
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::Uniform01: return "uniform01";
    case Family::StandardNormal: return "normal";
    case Family::GaussianMixtureSym: return "mixture";
    case Family::Empirical: return "empirical";
  }
  return "?";
}

std::string_view to_string(MomentMethod method) {
  switch (method) {
    case MomentMethod::ClosedForm: return "closed_form";
    case MomentMethod::Quadrature: return "quadrature";
    case MomentMethod::MonteCarlo: return "monte_carlo";
  }
  return "?";
}

std::string_view to_string(Proposition prop) {
  switch (prop) {
    case Proposition::Prop2: return "prop2";
    case Proposition::IFC: return "ifc";
    case Proposition::FhI: return "fh_i";
    case Proposition::FhII: return "fh_ii";
    case Proposition::Tcl: return "tcl";
    case Proposition::Yu: return "yu";
  }
  return "?";
}

std::string_view to_string(TriState t) {
  switch (t) {
    case TriState::Yes: return "yes";
    case TriState::No: return "no";
    case TriState::Unknown: return "unknown";
  }
  return "?";
}

DistributionSpec DistributionSpec::uniform01() {
  return DistributionSpec(Family::Uniform01, "uniform on [0,1]");
}

DistributionSpec DistributionSpec::standard_normal() {
  return DistributionSpec(Family::StandardNormal, "standard normal");
}

DistributionSpec DistributionSpec::gaussian_mixture(double offset) {
  if (!std::isfinite(offset)) throw InvalidSpec("mixture offset must be finite");
  std::ostringstream desc;
  desc << "balanced mixture of N(-" << offset << ",1) and N(+" << offset << ",1)";
  DistributionSpec spec(Family::GaussianMixtureSym, desc.str());
  spec.offset_ = std::abs(offset);
  return spec;
}

DistributionSpec DistributionSpec::empirical(std::vector<double> values,
                                             std::string description) {
  for (double v : values)
    if (!std::isfinite(v)) throw InvalidSpec("empirical values must be finite");
  const bool distinct = std::adjacent_find(values.begin(), values.end(),
                                           std::not_equal_to<>()) != values.end();
  if (values.size() < 2 || !distinct)
    throw InvalidSpec("empirical distribution needs at least 2 distinct values");
  DistributionSpec spec(Family::Empirical, std::move(description));
  spec.values_ = std::move(values);
  return spec;
}

double DistributionSpec::support_bound() const noexcept {
  switch (family_) {
    case Family::Uniform01: return 1.0;
    case Family::Empirical: {
      double m = 0.0;
      for (double v : values_) m = std::max(m, std::abs(v));
      return m;
    }
    default: return std::numeric_limits<double>::infinity();
  }
}

void sample_into(const DistributionSpec& spec, std::span<double> out,
                 RngStream& rng) {
  switch (spec.family()) {
    case Family::Uniform01:
      for (double& x : out) x = rng.uniform();
      break;
    case Family::StandardNormal:
      for (double& x : out) x = rng.normal();
      break;
    case Family::GaussianMixtureSym: {
      const double c = spec.offset();
      for (double& x : out) {
        const double centre = (rng.next() >> 63) ? c : -c;
        x = centre + rng.normal();
      }
      break;
    }
    case Family::Empirical: {
      const auto values = spec.values();
      for (double& x : out) x = values[rng.below(values.size())];
      break;
    }
  }
}

std::vector<double> sample(const DistributionSpec& spec, std::size_t count,
                           RngStream& rng) {
  if (count == 0) throw InvalidInput("sample: count must be >= 1");
  std::vector<double> out(count);
  sample_into(spec, out, rng);
  return out;
}

AbsoluteMoment absolute_moment(const DistributionSpec& spec, double q) {
  if (!(q >= 0.0) || !std::isfinite(q)) throw InvalidInput("moment order must be >= 0");
  switch (spec.family()) {
    case Family::Uniform01:
      return {1.0 / (q + 1.0), 0.0, MomentMethod::ClosedForm};
    case Family::StandardNormal:
      if (is_even_integer(q))
        return {double_factorial_odd(static_cast<int>(q) - 1), 0.0,
                MomentMethod::ClosedForm};
      return gaussian_abs_moment(0.0, q);
    case Family::GaussianMixtureSym:
      return gaussian_abs_moment(spec.offset(), q);
    case Family::Empirical: {
      double sum = 0.0;
      for (double v : spec.values()) sum += std::pow(std::abs(v), q);
      return {sum / static_cast<double>(spec.values().size()), 0.0,
              MomentMethod::MonteCarlo};
    }
  }
  throw InvalidSpec("unknown family");
}

MomentPair moments(const DistributionSpec& spec, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw InvalidInput("p must be finite and > 0");
  MomentPair m;
  m.p = p;

  if (spec.family() == Family::Uniform01) {
    m.mu_p = 1.0 / (p + 1.0);
    m.sigma_p = p / (p + 1.0) * std::sqrt(1.0 / (2.0 * p + 1.0));
    m.method = MomentMethod::ClosedForm;
    return m;
  }

  const AbsoluteMoment first = absolute_moment(spec, p);
  const AbsoluteMoment second = absolute_moment(spec, 2.0 * p);
  m.mu_p = first.value;
  m.method = (first.method == MomentMethod::ClosedForm &&
              second.method == MomentMethod::ClosedForm)
                 ? MomentMethod::ClosedForm
                 : first.method == MomentMethod::MonteCarlo ? MomentMethod::MonteCarlo
                                                            : MomentMethod::Quadrature;

  double variance = second.value - first.value * first.value;
  const double variance_error = second.abs_error + 2.0 * first.value * first.abs_error;
  if (variance < 0.0) {
    // Only round-off can push the variance below zero.
    variance = 0.0;
    m.variance_clamped = true;
  }
  m.sigma_p = std::sqrt(variance);
  const double sigma_error =
      m.sigma_p > 0.0 ? variance_error / (2.0 * m.sigma_p) : std::sqrt(variance_error);
  m.abs_error_bound = std::max(first.abs_error, sigma_error);

  if (spec.family() == Family::Empirical) {
    // Standard error of the plug-in mean.
    m.abs_error_bound =
        m.sigma_p / std::sqrt(static_cast<double>(spec.values().size()));
  }
  return m;
}

MomentPair moments_by_quadrature(const DistributionSpec& spec, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw InvalidInput("p must be finite and > 0");
  AbsoluteMoment first{}, second{};
  switch (spec.family()) {
    case Family::Uniform01: {
      auto raw = [](double q) {
        const auto r = quad::integrate([q](double x) { return std::pow(x, q); }, 0.0, 1.0,
                                       kAbsTolerance);
        return AbsoluteMoment{r.value, r.abs_error, MomentMethod::Quadrature};
      };
      first = raw(p);
      second = raw(2.0 * p);
      break;
    }
    case Family::StandardNormal:
      first = gaussian_abs_moment(0.0, p);
      second = gaussian_abs_moment(0.0, 2.0 * p);
      break;
    case Family::GaussianMixtureSym:
      first = gaussian_abs_moment(spec.offset(), p);
      second = gaussian_abs_moment(spec.offset(), 2.0 * p);
      break;
    case Family::Empirical:
      throw InvalidInput("moments_by_quadrature: empirical laws have no density");
  }
  MomentPair m;
  m.p = p;
  m.mu_p = first.value;
  m.method = MomentMethod::Quadrature;
  double variance = second.value - first.value * first.value;
  if (variance < 0.0) {
    variance = 0.0;
    m.variance_clamped = true;
  }
  m.sigma_p = std::sqrt(variance);
  const double variance_error = second.abs_error + 2.0 * first.value * first.abs_error;
  m.abs_error_bound = std::max(first.abs_error, m.sigma_p > 0.0
                                                    ? variance_error / (2.0 * m.sigma_p)
                                                    : std::sqrt(variance_error));
  return m;
}

AssumptionCheck check_assumptions(const DistributionSpec& spec, double p,
                                  Proposition proposition) {
  AssumptionCheck check;
  check.proposition = proposition;
  check.p = p;
  switch (proposition) {
    case Proposition::Prop2: check.required_order = std::max(2.0, p); break;
    case Proposition::IFC:
    case Proposition::FhI:
    case Proposition::FhII: check.required_order = std::max(4.0, 3.0 * p); break;
    case Proposition::Tcl: check.required_order = p; break;
    case Proposition::Yu: check.required_order = 3.0 * p; break;
  }

  if (spec.family() == Family::Empirical) {
    check.holds = TriState::Unknown;
    check.note = "a finite sample cannot certify tail moments";
  } else {
    check.holds = TriState::Yes;
    check.note = "built-in family has finite moments of every order";
  }

  if (proposition == Proposition::FhII) {
    if (p < 1.0) {
      check.holds = TriState::No;
      check.note = "bounded-difference bound needs p >= 1";
    } else if (spec.family() == Family::StandardNormal ||
               spec.family() == Family::GaussianMixtureSym) {
      check.holds = TriState::No;
      check.note = "needs 0 < |X| <= C almost surely; support is unbounded";
    } else if (spec.family() == Family::Uniform01) {
      check.note = "0 < |X| <= 1 almost surely";
    } else {
      check.note = "empirical support is bounded but the population law is unknown";
    }
  }
  if (proposition == Proposition::Yu && p < 1.0) {
    check.note += "; the growing-n law is stated for p >= 1, runs with p < 1 are exploratory";
  }
  return check;
}

}  // namespace conc
