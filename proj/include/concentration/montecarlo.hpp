#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "concentration/distributions.hpp"

namespace conc {

/// Per-replicate statistic computed from the norms ||X_1||_p..||X_n||_p.
enum class Statistic {
  NormMoments,        // ||X||_p of a single point (n = 1)
  Contrast,           // max - min
  RelativeContrast,   // (max - min) / min; replicates with min = 0 dropped
  ScaledRangeTcl,     // d^{1/2-1/p} (max - min)
  NormalizedRangeYu,  // p a_n d^{1/2-1/p} / (mu_p^{1/p-1} sigma_p) (max - min) - 2 a_n b_n
  RatioStat,          // (max - c) / (min - c), c = d^{1/p} mu_p^{1/p}
};

std::string_view to_string(Statistic s);
/// Accepts the kebab-case names printed by to_string and snake_case variants.
std::optional<Statistic> parse_statistic(std::string_view name);

/// Number of points n as a function of d: fixed, or floor(c * d^e).
class SampleSizeRule {
 public:
  static SampleSizeRule fixed(std::uint64_t n);
  static SampleSizeRule power(double exponent, double coefficient = 1.0);

  std::uint64_t operator()(std::uint64_t d) const;
  bool is_fixed() const noexcept { return fixed_.has_value(); }
  double exponent() const noexcept { return exponent_; }
  double coefficient() const noexcept { return coefficient_; }

  /// n(d)^5 log^6(d) / d; the growing-n range law is stated for rules where
  /// this tends to 0.
  double yu_condition(std::uint64_t d) const;

 private:
  std::optional<std::uint64_t> fixed_;
  double exponent_ = 0.0;
  double coefficient_ = 1.0;
};

struct SimulationConfig {
  DistributionSpec spec = DistributionSpec::uniform01();
  double p = 2.0;
  /// One value for simulate(); a strictly increasing schedule for
  /// simulate_schedule().
  std::vector<std::uint64_t> d_values{1000};
  SampleSizeRule n = SampleSizeRule::fixed(1);
  std::uint64_t replicates = 1000;
  std::uint64_t master_seed = 0;
  Statistic statistic = Statistic::NormMoments;
  /// Run even when a required hypothesis is known to fail.
  bool force = false;
  /// 0 picks std::thread::hardware_concurrency(). Results do not depend on it.
  unsigned workers = 0;
  /// Reservoir size for empirical_samples (streaming mode).
  std::size_t sample_cap = 1'000'000;
  /// Keep every per-replicate value instead of a reservoir.
  bool keep_all_samples = false;
  std::size_t memory_budget_bytes = std::size_t{2} << 30;
};

/// Welford running mean / variance; merge() follows Chan et al.
class RunningStats {
 public:
  void add(double x) noexcept {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }
  void merge(const RunningStats& other) noexcept;

  std::uint64_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }
  /// Unbiased sample variance; 0 for fewer than 2 values.
  double variance() const noexcept {
    return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
  }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct SimulationResult {
  SimulationConfig config;
  std::uint64_t d = 0;
  std::uint64_t n = 0;
  /// Number of aggregated values; count + dropped == replicates.
  std::uint64_t count = 0;
  std::uint64_t dropped = 0;
  double mean = 0.0;
  double variance = 0.0;
  /// Per-replicate values in replicate order, or a uniform reservoir of
  /// sample_cap of them when `samples_thinned`.
  std::vector<double> empirical_samples;
  bool samples_thinned = false;
  /// Replicate r used RngStream(master_seed, stream_id_first + r).
  std::uint64_t stream_id_first = 0;
  /// Moments used by the normalized statistics.
  std::optional<MomentPair> moments;
  std::vector<std::string> tags;
  std::vector<std::string> warnings;

  double standard_error() const;
};

/// Runs config.replicates independent replicates at the single d in
/// config.d_values. Bit-identical for identical configs, whatever the worker
/// count. Throws AssumptionViolation when a hypothesis fails and !force,
/// ResourceError when the sample storage exceeds the memory budget.
SimulationResult simulate(const SimulationConfig& config);

/// One result per scheduled d (>= 4 strictly increasing values), sharing the
/// master seed with disjoint stream ids.
std::vector<SimulationResult> simulate_schedule(const SimulationConfig& config);

struct RelativeContrastPoint {
  std::uint64_t d = 0;
  double mean_relative_contrast = 0.0;
  std::uint64_t dropped = 0;
};

/// Mean of (max/min - 1) over replicates, for each d of a fixed-n schedule.
std::vector<RelativeContrastPoint> relative_contrast_consistency(
    const DistributionSpec& spec, double p, std::uint64_t n,
    const std::vector<std::uint64_t>& schedule, std::uint64_t replicates,
    std::uint64_t seed, unsigned workers = 0);

/// Stream id of replicate r at schedule position k.
constexpr std::uint64_t replicate_stream_id(std::uint64_t schedule_index,
                                            std::uint64_t replicate) {
  return (schedule_index << 40) | replicate;
}

}  // namespace conc
