#include "concentration/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "concentration/asymptotics.hpp"
#include "concentration/distributions.hpp"
#include "concentration/errors.hpp"
#include "concentration/goodness.hpp"
#include "concentration/limit_laws.hpp"
#include "concentration/montecarlo.hpp"

namespace conc::verify {

namespace {

using Suite = std::function<std::vector<Check>(const BudgetRow&, std::uint64_t, unsigned)>;

// Committed budget table. Standard rows are the acceptance sizes; Fast rows
// were fixed from pilot runs (see README) with margins of several Monte Carlo
// standard errors.
const std::vector<BudgetRow>& budget_table() {
  static const std::vector<BudgetRow> table = {
      {"moments", Budget::Fast, 0, {}, 1e-9},
      {"moments", Budget::Standard, 0, {}, 1e-9},
      {"moments", Budget::Paper, 0, {}, 1e-9},

      {"rsd", Budget::Fast, 2000, {1000}, 0.08},
      {"rsd", Budget::Standard, 10000, {10000}, 0.05},
      {"rsd", Budget::Paper, 40000, {10000}, 0.05},

      {"variance-rate", Budget::Fast, 2000, {1000}, 0.15},
      {"variance-rate", Budget::Standard, 10000, {10000}, 0.10},
      {"variance-rate", Budget::Paper, 40000, {10000}, 0.10},

      {"tcl", Budget::Fast, 5000, {2000}, 0.04},
      {"tcl", Budget::Standard, 100000, {10000}, 0.02},
      {"tcl", Budget::Paper, 400000, {10000}, 0.02},

      {"gumbel-sum", Budget::Fast, 100000, {}, 0.01},
      {"gumbel-sum", Budget::Standard, 1000000, {}, 0.005},
      {"gumbel-sum", Budget::Paper, 4000000, {}, 0.005},

      {"yu", Budget::Fast, 2000, {1000, 100000}, 0.20},
      {"yu", Budget::Standard, 10000, {10000, 1000000}, 0.15},
      {"yu", Budget::Paper, 20000, {10000, 1000000}, 0.15},

      {"bounds", Budget::Fast, 10000, {1000}, 0.0},
      {"bounds", Budget::Standard, 100000, {10000}, 0.0},
      {"bounds", Budget::Paper, 400000, {10000}, 0.0},

      {"contrast-rate", Budget::Fast, 200, {100, 1000, 10000, 100000}, 0.06},
      {"contrast-rate", Budget::Standard, 1000, {100, 1000, 10000, 100000}, 0.05},
      {"contrast-rate", Budget::Paper, 4000, {100, 1000, 10000, 100000}, 0.05},

      {"mixture-ordering", Budget::Fast, 0, {}, 0.0},
      {"mixture-ordering", Budget::Standard, 0, {}, 0.0},
      {"mixture-ordering", Budget::Paper, 0, {}, 0.0},

      {"engine", Budget::Fast, 100000, {}, 1e-10},
      {"engine", Budget::Standard, 1000000, {}, 1e-10},
      {"engine", Budget::Paper, 1000000, {}, 1e-10},
  };
  return table;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

Check make_check(std::string name, double value, double threshold, std::string comparison,
                 bool passed, std::string detail = {}) {
  return {std::move(name), value, threshold, std::move(comparison), passed, std::move(detail)};
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t k) { return mix64(seed + 0x9e37 * (k + 1)); }

// Uniform01 only: the suites below all use the closed-form uniform moments.
SimulationConfig base_config(double p, std::uint64_t d, std::uint64_t replicates,
                             std::uint64_t seed, unsigned workers) {
  SimulationConfig c;
  c.spec = DistributionSpec::uniform01();
  c.p = p;
  c.d_values = {d};
  c.replicates = replicates;
  c.master_seed = seed;
  c.workers = workers;
  return c;
}

std::vector<Check> suite_moments(const BudgetRow& row, std::uint64_t, unsigned) {
  std::vector<Check> out;
  const auto spec = DistributionSpec::uniform01();
  for (double p : {0.5, 1.0, 2.0, 3.0, 5.0}) {
    const MomentPair q = moments_by_quadrature(spec, p);
    const double mu = 1.0 / (p + 1.0);
    const double sigma = p / (p + 1.0) * std::sqrt(1.0 / (2.0 * p + 1.0));
    const double e_mu = std::abs(q.mu_p - mu);
    const double e_sigma = std::abs(q.sigma_p - sigma);
    out.push_back(make_check("uniform mu_p p=" + fmt(p), e_mu, row.tolerance, "abs_diff<=",
                             e_mu <= row.tolerance,
                             "quadrature " + fmt(q.mu_p) + " vs 1/(p+1) " + fmt(mu)));
    out.push_back(make_check("uniform sigma_p p=" + fmt(p), e_sigma, row.tolerance, "abs_diff<=",
                             e_sigma <= row.tolerance,
                             "quadrature " + fmt(q.sigma_p) + " vs closed form " + fmt(sigma)));
  }
  return out;
}

std::vector<Check> suite_rsd(const BudgetRow& row, std::uint64_t seed, unsigned workers) {
  std::vector<Check> out;
  const std::uint64_t d = row.d.front();
  std::uint64_t k = 0;
  for (double p : {1.0, 2.0}) {
    auto c = base_config(p, d, row.replicates, sub_seed(seed, k++), workers);
    c.statistic = Statistic::NormMoments;
    c.sample_cap = 0;
    const auto r = simulate(c);
    const double scaled = std::sqrt(static_cast<double>(d)) * std::sqrt(r.variance) / r.mean;
    const double target = std::sqrt(1.0 / (2.0 * p + 1.0));
    const double rel = std::abs(scaled - target) / target;
    out.push_back(make_check("sqrt(d) RSD p=" + fmt(p), rel, row.tolerance, "rel_err<=",
                             rel <= row.tolerance,
                             "empirical " + fmt(scaled) + " vs sqrt(1/(2p+1)) " + fmt(target)));
  }
  return out;
}

std::vector<Check> suite_variance_rate(const BudgetRow& row, std::uint64_t seed, unsigned workers) {
  std::vector<Check> out;
  const std::uint64_t d = row.d.front();
  std::uint64_t k = 0;
  for (const auto& spec : {DistributionSpec::uniform01(), DistributionSpec::standard_normal()}) {
    for (double p : {1.0, 2.0, 3.0}) {
      auto c = base_config(p, d, row.replicates, sub_seed(seed, k++), workers);
      c.spec = spec;
      c.statistic = Statistic::NormMoments;
      c.sample_cap = 0;
      const auto r = simulate(c);
      const auto pred = predict(moments(spec, p), d);
      const double ratio = r.variance / pred.var_leading;
      out.push_back(make_check(std::string(to_string(spec.family())) + " Var ratio p=" + fmt(p),
                               ratio, row.tolerance, "abs(value-1)<=",
                               std::abs(ratio - 1.0) <= row.tolerance,
                               "empirical variance " + fmt(r.variance) + ", leading term " +
                                   fmt(pred.var_leading)));
    }
  }
  return out;
}

std::vector<Check> suite_tcl(const BudgetRow& row, std::uint64_t seed, unsigned workers) {
  constexpr double p = 2.0;
  constexpr std::uint64_t n = 5;
  const std::uint64_t d = row.d.front();
  auto c = base_config(p, d, row.replicates, sub_seed(seed, 0), workers);
  c.statistic = Statistic::ScaledRangeTcl;
  c.n = SampleSizeRule::fixed(n);
  c.sample_cap = row.replicates;
  const auto r = simulate(c);

  const MomentPair m = moments(c.spec, p);
  const double scale = m.sigma_p * std::pow(m.mu_p, 1.0 / p - 1.0) / p;
  const auto grid = linspace(0.0, 12.0, 4801);
  const LimitLawTable law = tabulate_normal_range(n, grid);
  const auto ks = ks_against_law(
      r.empirical_samples, [&](double x) { return interpolate_cdf(law, x / scale); },
      "scaled normal range M_5", row.tolerance);
  return {make_check("KS vs (sigma_p mu_p^(1/p-1)/p) M_5", ks.statistic, row.tolerance, "<=",
                     ks.verdict, "scale " + fmt(scale) + ", " + std::to_string(ks.sample_size) +
                                     " samples")};
}

LimitLawTable gumbel_sum_table() {
  const auto grid = linspace(-12.0, 28.0, 8001);
  return tabulate_gumbel_sum(grid);
}

// Independent route to P{E+E' <= 0}: with u = e^{-t} it equals
// int_0^inf exp(-u - 1/u) du; composite Simpson in s = log u.
double gumbel_sum_cdf_at_zero_oracle() {
  const double lo = -40.0, hi = 6.0;
  const int steps = 200000;
  const double h = (hi - lo) / steps;
  auto f = [](double s) {
    const double u = std::exp(s);
    return std::exp(-u - 1.0 / u) * u;
  };
  double sum = f(lo) + f(hi);
  for (int i = 1; i < steps; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
  return sum * h / 3.0;
}

std::vector<Check> suite_gumbel_sum(const BudgetRow& row, std::uint64_t seed, unsigned) {
  std::vector<Check> out;
  RngStream rng(sub_seed(seed, 0), 0);
  std::vector<double> draws(row.replicates);
  for (double& x : draws) {
    const double e1 = -std::log(-std::log(rng.uniform_open()));
    const double e2 = -std::log(-std::log(rng.uniform_open()));
    x = e1 + e2;
  }
  const LimitLawTable law = gumbel_sum_table();
  const auto ks = ks_against_law(draws, [&](double x) { return interpolate_cdf(law, x); },
                                 "gumbel_sum", row.tolerance);
  out.push_back(make_check("KS quadrature CDF vs Monte Carlo E+E'", ks.statistic, row.tolerance,
                           "<=", ks.verdict, std::to_string(ks.sample_size) + " draws"));

  const double at_zero = gumbel_sum_cdf(0.0);
  const double oracle = gumbel_sum_cdf_at_zero_oracle();
  const double diff = std::abs(at_zero - oracle);
  out.push_back(make_check("CDF(0) vs brute-force oracle", diff, 1e-4, "abs_diff<=", diff <= 1e-4,
                           "quadrature " + fmt(at_zero) + ", oracle " + fmt(oracle)));
  const double frozen = std::abs(at_zero - 0.279733);
  out.push_back(make_check("CDF(0) vs 0.279733", frozen, 1e-4, "abs_diff<=", frozen <= 1e-4));
  return out;
}

std::vector<Check> suite_yu(const BudgetRow& row, std::uint64_t seed, unsigned workers) {
  std::vector<Check> out;
  constexpr double p = 2.0;
  const LimitLawTable law = gumbel_sum_table();
  std::vector<double> distances;
  std::uint64_t k = 0;
  for (std::uint64_t d : row.d) {
    auto c = base_config(p, d, row.replicates, sub_seed(seed, k++), workers);
    c.statistic = Statistic::NormalizedRangeYu;
    c.n = SampleSizeRule::power(0.15);
    c.sample_cap = row.replicates;
    const auto r = simulate(c);
    const auto ks = ks_against_law(r.empirical_samples,
                                   [&](double x) { return interpolate_cdf(law, x); },
                                   "gumbel_sum", row.tolerance);
    distances.push_back(ks.statistic);
    out.push_back(make_check("KS to E+E' at d=" + std::to_string(d), ks.statistic, 1.0, "report",
                             true, "n(d) = " + std::to_string(r.n)));
  }
  const bool decreasing = distances.back() < distances.front();
  out.push_back(make_check("KS decreases from smallest to largest d",
                           distances.front() - distances.back(), 0.0, ">", decreasing));
  out.push_back(make_check("KS at largest d", distances.back(), row.tolerance, "<=",
                           distances.back() <= row.tolerance));
  return out;
}

std::vector<Check> suite_bounds(const BudgetRow& row, std::uint64_t seed, unsigned workers) {
  std::vector<Check> out;
  constexpr double p = 2.0;
  const std::uint64_t d = row.d.front();
  auto c = base_config(p, d, row.replicates, sub_seed(seed, 0), workers);
  c.statistic = Statistic::NormMoments;
  c.keep_all_samples = true;
  const auto r = simulate(c);
  const MomentPair m = moments(c.spec, p);
  for (double eps : {0.05, 0.1}) {
    const auto b = bounds(m, d, eps, 1.0);
    const auto hits = std::count_if(r.empirical_samples.begin(), r.empirical_samples.end(),
                                    [&](double x) { return std::abs(x / r.mean - 1.0) >= eps; });
    const double freq = static_cast<double>(hits) / static_cast<double>(r.count);
    out.push_back(make_check("frequency <= Chebyshev-type bound, eps=" + fmt(eps), freq,
                             b.chebyshev_bound, "<=", freq <= b.chebyshev_bound));
    out.push_back(make_check("frequency <= bounded-difference bound, eps=" + fmt(eps), freq,
                             *b.mcdiarmid_bound, "<=", freq <= *b.mcdiarmid_bound));
  }
  return out;
}

std::vector<Check> suite_contrast_rate(const BudgetRow& row, std::uint64_t seed, unsigned workers) {
  std::vector<Check> out;
  std::uint64_t k = 0;
  for (double p : {1.0, 2.0, 4.0}) {
    auto c = base_config(p, row.d.front(), row.replicates, sub_seed(seed, k++), workers);
    c.d_values = row.d;
    c.statistic = Statistic::Contrast;
    c.n = SampleSizeRule::fixed(10);
    c.sample_cap = 0;
    const auto results = simulate_schedule(c);
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : results) pts.emplace_back(static_cast<double>(r.d), r.mean);
    const auto fit = fit_rate(pts);
    const double expected = 1.0 / p - 0.5;
    const double err = std::abs(fit.slope - expected);
    out.push_back(make_check("contrast slope p=" + fmt(p), err, row.tolerance, "abs_diff<=",
                             err <= row.tolerance,
                             "slope " + fmt(fit.slope) + " vs 1/p-1/2 = " + fmt(expected)));
  }
  return out;
}

std::vector<Check> suite_mixture_ordering(const BudgetRow&, std::uint64_t, unsigned) {
  const auto spec = DistributionSpec::gaussian_mixture(1.0);
  auto rsd = [&](double p) {
    const MomentPair m = moments(spec, p);
    return m.sigma_p / (p * m.mu_p);
  };
  std::vector<Check> out;
  const double at1 = rsd(1.0), at10 = rsd(10.0);
  out.push_back(make_check("sigma_p/(p mu_p): p=1 below p=10", at1, at10, "<", at1 < at10,
                           "p=1: " + fmt(at1) + ", p=10: " + fmt(at10)));
  double worst_fractional = 0.0;
  for (double p : {0.25, 0.5, 1.0}) worst_fractional = std::max(worst_fractional, rsd(p));
  double best_large = rsd(8.0);
  for (double p : {10.0, 15.0, 20.0, 30.0}) best_large = std::min(best_large, rsd(p));
  out.push_back(make_check("max over p<=1 below min over p in [8,30]", worst_fractional,
                           best_large, "<", worst_fractional < best_large));
  return out;
}

std::vector<Check> suite_engine(const BudgetRow& row, std::uint64_t seed, unsigned) {
  std::vector<Check> out;

  // Worker-count independence.
  auto c = base_config(2.0, 257, 3000, sub_seed(seed, 0), 1);
  c.statistic = Statistic::ScaledRangeTcl;
  c.n = SampleSizeRule::fixed(4);
  const auto reference = simulate(c);
  bool identical = true;
  for (unsigned w : {2u, 3u, 8u}) {
    c.workers = w;
    const auto again = simulate(c);
    identical = identical && again.empirical_samples == reference.empirical_samples &&
                again.mean == reference.mean && again.variance == reference.variance;
  }
  out.push_back(make_check("bit-identical results for 1, 2, 3, 8 workers", identical ? 1 : 0, 1,
                           "==", identical));

  // Streaming vs two-pass variance.
  auto s = base_config(1.0, 3, row.replicates, sub_seed(seed, 1), 0);
  s.statistic = Statistic::NormMoments;
  s.keep_all_samples = true;
  const auto r = simulate(s);
  double mean = 0.0;
  for (double v : r.empirical_samples) mean += v;
  mean /= static_cast<double>(r.empirical_samples.size());
  double ss = 0.0;
  for (double v : r.empirical_samples) ss += (v - mean) * (v - mean);
  const double two_pass = ss / static_cast<double>(r.empirical_samples.size() - 1);
  const double rel = std::abs(r.variance - two_pass) / two_pass;
  out.push_back(make_check("streaming vs two-pass variance", rel, row.tolerance, "rel_err<=",
                           rel <= row.tolerance, std::to_string(r.count) + " values"));

  // Quadratic case of the second-order expansion is exact.
  const auto square = power_function(2.0);
  double worst = 0.0;
  for (double mu : {-2.5, 0.3, 1.0, 3.0, 17.0})
    for (double sigma2 : {0.0, 0.01, 4.0, 9.5})
      for (std::uint64_t d : {1u, 7u, 100u, 100000u}) {
        const double expansion = second_order_mean(square, mu, sigma2, d).value();
        const double exact = mu * mu + sigma2 / static_cast<double>(d);
        worst = std::max(worst, std::abs(expansion - exact) / std::max(1.0, std::abs(exact)));
      }
  out.push_back(make_check("E Ybar^2 = mu^2 + sigma^2/d", worst, 1e-14, "rel_err<=",
                           worst <= 1e-14));
  return out;
}

const std::map<std::string, Suite, std::less<>>& suites() {
  static const std::map<std::string, Suite, std::less<>> table = {
      {"moments", suite_moments},
      {"rsd", suite_rsd},
      {"variance-rate", suite_variance_rate},
      {"tcl", suite_tcl},
      {"gumbel-sum", suite_gumbel_sum},
      {"yu", suite_yu},
      {"bounds", suite_bounds},
      {"contrast-rate", suite_contrast_rate},
      {"mixture-ordering", suite_mixture_ordering},
      {"engine", suite_engine},
  };
  return table;
}

}  // namespace

std::string_view to_string(Budget b) {
  switch (b) {
    case Budget::Fast: return "fast";
    case Budget::Standard: return "standard";
    case Budget::Paper: return "paper";
  }
  return "?";
}

std::optional<Budget> parse_budget(std::string_view name) {
  for (auto b : {Budget::Fast, Budget::Standard, Budget::Paper})
    if (to_string(b) == name) return b;
  return std::nullopt;
}

const BudgetRow& budget_row(std::string_view suite, Budget budget) {
  for (const auto& row : budget_table())
    if (row.suite == suite && row.budget == budget) return row;
  throw InvalidInput("unknown verification suite '" + std::string(suite) + "'");
}

bool SuiteResult::passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "moments", "rsd", "variance-rate", "tcl", "gumbel-sum",
      "yu", "bounds", "contrast-rate", "mixture-ordering", "engine"};
  return names;
}

SuiteResult run_suite(std::string_view suite, Budget budget, std::uint64_t seed, unsigned workers) {
  const auto it = suites().find(suite);
  if (it == suites().end())
    throw InvalidInput("unknown verification suite '" + std::string(suite) + "'");
  const auto start = std::chrono::steady_clock::now();
  SuiteResult result;
  result.suite = std::string(suite);
  result.budget = budget;
  result.seed = seed;
  result.checks = it->second(budget_row(suite, budget), seed, workers);
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace conc::verify
