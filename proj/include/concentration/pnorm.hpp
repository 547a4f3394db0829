#pragma once

#include <optional>
#include <span>
#include <vector>

namespace conc {

/// Exponent of a p-norm. For 0 < p < 1 the map is only a prenorm (the
/// triangle inequality fails) but it is computed the same way.
class PNormParams {
 public:
  explicit PNormParams(double p);
  double p() const noexcept { return p_; }
  bool is_prenorm() const noexcept { return p_ < 1.0; }

 private:
  double p_;
};

/// (sum_j |x_j|^p)^(1/p), computed as m * (sum_j (|x_j|/m)^p)^(1/p) with
/// m = max_j |x_j| so that neither the sum nor the powers overflow.
double pnorm(std::span<const double> x, double p);

struct ContrastStats {
  double max_norm = 0.0;
  double min_norm = 0.0;
  double contrast = 0.0;
  /// (max - min) / min; empty when min == 0.
  std::optional<double> relative_contrast;
};

/// Needs at least two finite, nonnegative norms.
ContrastStats contrast_stats(std::span<const double> norms);

/// Row-wise pnorm. Rows must all have the same length.
std::vector<double> dataset_norms(const std::vector<std::vector<double>>& rows,
                                  double p);

}  // namespace conc
