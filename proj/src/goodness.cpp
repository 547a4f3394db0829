#include "concentration/goodness.hpp"

#include <algorithm>
#include <cmath>

#include "concentration/errors.hpp"

namespace conc {

double ks_critical_value(std::uint64_t n) {
  return 1.358 / std::sqrt(static_cast<double>(n));
}

KsReport ks_against_law(std::span<const double> samples,
                        const std::function<double(double)>& law_cdf,
                        std::string reference_law, double pass_threshold) {
  if (samples.empty()) throw InvalidInput("ks_against_law: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  for (double v : sorted)
    if (std::isnan(v)) throw InvalidInput("ks_against_law: NaN sample");
  std::sort(sorted.begin(), sorted.end());

  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = law_cdf(sorted[i]);
    const double below = f - static_cast<double>(i) / n;
    const double above = static_cast<double>(i + 1) / n - f;
    d = std::max({d, below, above});
  }

  KsReport r;
  r.statistic = std::clamp(d, 0.0, 1.0);
  r.sample_size = sorted.size();
  r.reference_law = std::move(reference_law);
  r.pass_threshold = pass_threshold > 0.0 ? pass_threshold : ks_critical_value(sorted.size());
  r.verdict = r.statistic <= r.pass_threshold;
  return r;
}

RateFit fit_rate(std::span<const std::pair<double, double>> results) {
  if (results.size() < 4) throw InvalidInput("fit_rate: need at least 4 points");
  RateFit fit;
  double d_min = results.front().first;
  double d_max = d_min;
  for (const auto& [d, stat] : results) {
    if (!(d > 0.0)) throw InvalidInput("fit_rate: d must be positive");
    if (!(stat > 0.0)) throw InvalidInput("fit_rate: statistic must be positive (log undefined)");
    d_min = std::min(d_min, d);
    d_max = std::max(d_max, d);
    fit.points.emplace_back(std::log(d), std::log(stat));
  }
  if (d_max / d_min < 100.0 * (1.0 - 1e-12))
    throw InvalidInput("fit_rate: d values must span at least two decades");

  const double m = static_cast<double>(fit.points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : fit.points) {
    mx += x;
    my += y;
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : fit.points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (const auto& [x, y] : fit.points) {
    const double e = y - (fit.intercept + fit.slope * x);
    rss += e * e;
  }
  fit.slope_stderr = std::sqrt(rss / (m - 2.0) / sxx);
  return fit;
}

bool tolerance_verdict(double empirical, double theoretical, double std_error, double k) {
  if (!(std_error >= 0.0)) throw InvalidInput("tolerance_verdict: stderr must be >= 0");
  return std::abs(empirical - theoretical) <= k * std_error;
}

}  // namespace conc
