#include "concentration/limit_laws.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "concentration/errors.hpp"
#include "concentration/quadrature.hpp"

namespace conc {

namespace {

constexpr double kSqrt1_2 = 0.70710678118654752440;

// Phi(b) - Phi(a) for a <= b, using whichever tail keeps precision.
double normal_interval(double a, double b) {
  if (a >= 0.0) return normal_sf(a) - normal_sf(b);
  if (b <= 0.0) return normal_cdf(b) - normal_cdf(a);
  return 1.0 - normal_cdf(a) - normal_sf(b);
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kSqrt1_2); }

double normal_sf(double x) { return 0.5 * std::erfc(x * kSqrt1_2); }

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

GumbelConstants gumbel_constants(std::uint64_t n) {
  if (n < 2) throw InvalidInput("gumbel_constants: n must be >= 2");
  const double log_n = std::log(static_cast<double>(n));
  GumbelConstants g;
  g.n = n;
  g.a_n = std::sqrt(2.0 * log_n);
  g.b_n = g.a_n - 0.5 * (std::log(log_n) + std::log(4.0 * std::numbers::pi)) / g.a_n;
  return g;
}

double gumbel_sum_cdf(double x) {
  if (!std::isfinite(x)) throw InvalidInput("gumbel_sum_cdf: x must be finite");
  auto integrand = [x](double t) {
    return std::exp(-t - std::exp(-t) - std::exp(-(x - t)));
  };
  // Outside [-40, 40] + x/2 the integrand is below 1e-16.
  const double lo = -40.0 + 0.5 * x;
  const double hi = 40.0 + 0.5 * x;
  const auto r = quad::integrate_split(integrand, lo, hi, {0.0, 0.5 * x, x}, 1e-9);
  return std::clamp(r.value, 0.0, 1.0);
}

double gumbel_sum_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) throw InvalidInput("gumbel_sum_quantile: q must be in (0,1)");
  double lo = -20.0;
  double hi = 60.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (gumbel_sum_cdf(mid) < q)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double normal_range_cdf(std::uint64_t n, double x) {
  if (n < 2) throw InvalidInput("normal_range_cdf: n must be >= 2");
  if (!(x >= 0.0) || std::isnan(x)) throw InvalidInput("normal_range_cdf: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double exponent = static_cast<double>(n - 1);
  auto integrand = [x, exponent](double t) {
    return normal_pdf(t) * std::pow(normal_interval(t, t + x), exponent);
  };
  // phi(t) < 1e-22 beyond |t| = 10.
  const auto r = quad::integrate_split(integrand, -10.0, 10.0, {-0.5 * x, 0.0}, 1e-9);
  return std::clamp(static_cast<double>(n) * r.value, 0.0, 1.0);
}

std::string law_name(LawKind kind) {
  switch (kind) {
    case LawKind::GumbelSum: return "gumbel_sum";
    case LawKind::NormalRange: return "normal_range";
    case LawKind::RatioLaw: return "ratio_law";
  }
  return "?";
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count < 2) throw InvalidInput("linspace: need at least 2 points");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

LimitLawTable tabulate_gumbel_sum(std::span<const double> grid) {
  LimitLawTable t;
  t.law = LawKind::GumbelSum;
  t.grid.assign(grid.begin(), grid.end());
  std::sort(t.grid.begin(), t.grid.end());
  t.cdf_values.reserve(t.grid.size());
  for (double x : t.grid) t.cdf_values.push_back(gumbel_sum_cdf(x));
  t.quad_error = 1e-9;
  return t;
}

LimitLawTable tabulate_normal_range(std::uint64_t n, std::span<const double> grid) {
  LimitLawTable t;
  t.law = LawKind::NormalRange;
  t.n = n;
  t.grid.assign(grid.begin(), grid.end());
  std::sort(t.grid.begin(), t.grid.end());
  t.cdf_values.reserve(t.grid.size());
  for (double x : t.grid) t.cdf_values.push_back(normal_range_cdf(n, std::max(x, 0.0)));
  t.quad_error = 1e-9 * static_cast<double>(n);
  return t;
}

LimitLawTable ratio_law_table(std::uint64_t n, std::uint64_t samples, RngStream& rng) {
  if (n < 2) throw InvalidInput("ratio_law_table: n must be >= 2");
  if (samples < 100000) throw InvalidInput("ratio_law_table: need samples >= 1e5");

  std::vector<double> draws(samples);
  for (auto& r : draws) {
    double hi = rng.normal();
    double lo = hi;
    for (std::uint64_t i = 1; i < n; ++i) {
      const double z = rng.normal();
      hi = std::max(hi, z);
      lo = std::min(lo, z);
    }
    r = hi / lo;
  }
  std::sort(draws.begin(), draws.end());

  LimitLawTable t;
  t.law = LawKind::RatioLaw;
  t.n = n;
  t.empirical = true;
  t.seed = rng.master_seed();
  t.samples = samples;
  constexpr std::size_t kPoints = 1001;
  const double total = static_cast<double>(samples);
  for (std::size_t k = 0; k < kPoints; ++k) {
    const auto idx = static_cast<std::size_t>(
        std::llround(static_cast<double>(k) * (total - 1.0) / (kPoints - 1)));
    const double x = draws[idx];
    if (!t.grid.empty() && x == t.grid.back()) continue;
    const auto count = std::upper_bound(draws.begin(), draws.end(), x) - draws.begin();
    t.grid.push_back(x);
    t.cdf_values.push_back(static_cast<double>(count) / total);
  }
  t.quad_error = std::sqrt(std::log(2.0 / 0.05) / (2.0 * total));
  return t;
}

double table_cdf(const LimitLawTable& table, double x) {
  const auto it = std::upper_bound(table.grid.begin(), table.grid.end(), x);
  if (it == table.grid.begin()) return 0.0;
  return table.cdf_values[static_cast<std::size_t>(it - table.grid.begin()) - 1];
}

double interpolate_cdf(const LimitLawTable& table, double x) {
  const auto& g = table.grid;
  if (g.empty()) throw InvalidInput("interpolate_cdf: empty table");
  if (x <= g.front()) return table.cdf_values.front();
  if (x >= g.back()) return table.cdf_values.back();
  const auto i = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), x) - g.begin());
  const double w = (x - g[i - 1]) / (g[i] - g[i - 1]);
  return table.cdf_values[i - 1] + w * (table.cdf_values[i] - table.cdf_values[i - 1]);
}

}  // namespace conc
