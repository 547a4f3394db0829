#include "concentration/pnorm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "concentration/errors.hpp"

namespace conc {

PNormParams::PNormParams(double p) : p_(p) {
  if (!(p > 0.0) || !std::isfinite(p))
    throw InvalidInput("p must be finite and positive");
}

double pnorm(std::span<const double> x, double p) {
  const PNormParams params(p);
  if (x.empty()) throw InvalidInput("pnorm: empty vector");
  double m = 0.0;
  for (double v : x) {
    if (!std::isfinite(v)) throw InvalidInput("pnorm: non-finite entry");
    m = std::max(m, std::abs(v));
  }
  if (m == 0.0) return 0.0;

  double sum = 0.0;
  if (params.p() == 1.0) {
    for (double v : x) sum += std::abs(v) / m;
    return m * sum;
  }
  if (params.p() == 2.0) {
    for (double v : x) {
      const double r = v / m;
      sum += r * r;
    }
    return m * std::sqrt(sum);
  }
  for (double v : x) sum += std::pow(std::abs(v) / m, params.p());
  return m * std::pow(sum, 1.0 / params.p());
}

ContrastStats contrast_stats(std::span<const double> norms) {
  if (norms.size() < 2) throw InvalidInput("contrast_stats: need at least 2 norms");
  for (double v : norms)
    if (!std::isfinite(v) || v < 0.0)
      throw InvalidInput("contrast_stats: norms must be finite and >= 0");
  const auto [lo, hi] = std::minmax_element(norms.begin(), norms.end());
  ContrastStats s;
  s.min_norm = *lo;
  s.max_norm = *hi;
  s.contrast = s.max_norm - s.min_norm;
  if (s.min_norm > 0.0) s.relative_contrast = s.contrast / s.min_norm;
  return s;
}

std::vector<double> dataset_norms(const std::vector<std::vector<double>>& rows,
                                  double p) {
  if (rows.empty()) throw InvalidInput("dataset_norms: no rows");
  const std::size_t d = rows.front().size();
  if (d == 0) throw InvalidInput("dataset_norms: rows have no columns");
  std::vector<double> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) {
      std::ostringstream msg;
      msg << "dataset_norms: row " << i << " has " << rows[i].size()
          << " columns, expected " << d;
      throw InvalidInput(msg.str());
    }
    out.push_back(pnorm(rows[i], p));
  }
  return out;
}

}  // namespace conc
