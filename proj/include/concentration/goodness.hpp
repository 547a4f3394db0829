#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace conc {

struct KsReport {
  double statistic = 0.0;
  std::uint64_t sample_size = 0;
  std::string reference_law;
  double pass_threshold = 0.0;
  bool verdict = false;
};

/// Asymptotic one-sample critical value 1.358 / sqrt(n) (alpha = 0.05).
double ks_critical_value(std::uint64_t n);

/// Exact one-sample Kolmogorov-Smirnov distance
/// max_i max(F(x_(i)) - (i-1)/n, i/n - F(x_(i))).
/// A non-positive pass_threshold selects ks_critical_value(n).
KsReport ks_against_law(std::span<const double> samples,
                        const std::function<double(double)>& law_cdf,
                        std::string reference_law = "reference",
                        double pass_threshold = 0.0);

struct RateFit {
  std::vector<std::pair<double, double>> points;  // (log d, log statistic)
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

/// OLS of log(statistic) on log(d). Needs >= 4 positive points whose d values
/// span at least two decades.
RateFit fit_rate(std::span<const std::pair<double, double>> results);

/// |empirical - theoretical| <= k * std_error.
bool tolerance_verdict(double empirical, double theoretical, double std_error, double k = 3.0);

}  // namespace conc
