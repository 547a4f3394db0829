#include "concentration/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "concentration/errors.hpp"
#include "concentration/limit_laws.hpp"

namespace conc {

namespace {

constexpr std::size_t kBlock = 4096;
constexpr std::uint64_t kChunk = 256;
constexpr std::uint64_t kWave = 65536;
constexpr std::uint64_t kMaxReplicates = std::uint64_t{1} << 40;
constexpr std::uint64_t kReservoirStreamBit = std::uint64_t{1} << 63;

enum class PowerKind { One, Two, Three, Four, Half, General };

PowerKind power_kind(double p) {
  if (p == 1.0) return PowerKind::One;
  if (p == 2.0) return PowerKind::Two;
  if (p == 3.0) return PowerKind::Three;
  if (p == 4.0) return PowerKind::Four;
  if (p == 0.5) return PowerKind::Half;
  return PowerKind::General;
}

template <typename F>
double accumulate4(const double* x, std::size_t len, F f) {
  std::array<double, 4> acc{};
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    acc[0] += f(x[i]);
    acc[1] += f(x[i + 1]);
    acc[2] += f(x[i + 2]);
    acc[3] += f(x[i + 3]);
  }
  for (; i < len; ++i) acc[0] += f(x[i]);
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

double power_sum(const double* x, std::size_t len, PowerKind kind, double p) {
  switch (kind) {
    case PowerKind::One: return accumulate4(x, len, [](double v) { return std::abs(v); });
    case PowerKind::Two: return accumulate4(x, len, [](double v) { return v * v; });
    case PowerKind::Three:
      return accumulate4(x, len, [](double v) { const double a = std::abs(v); return a * a * a; });
    case PowerKind::Four:
      return accumulate4(x, len, [](double v) { const double s = v * v; return s * s; });
    case PowerKind::Half:
      return accumulate4(x, len, [](double v) { return std::sqrt(std::abs(v)); });
    case PowerKind::General:
      return accumulate4(x, len, [p](double v) { return std::pow(std::abs(v), p); });
  }
  return 0.0;
}

// Everything a worker needs to turn one RngStream into one statistic value.
struct ReplicateKernel {
  const DistributionSpec* spec;
  double p;
  std::uint64_t d;
  std::uint64_t n;
  Statistic statistic;
  PowerKind kind;
  double range_scale = 1.0;   // multiplies (max - min)
  double range_shift = 0.0;   // subtracted afterwards
  double ratio_centre = 0.0;

  double norm(RngStream& rng, std::vector<double>& buffer) const {
    double sum = 0.0;
    for (std::uint64_t done = 0; done < d;) {
      const std::size_t len = static_cast<std::size_t>(std::min<std::uint64_t>(kBlock, d - done));
      sample_into(*spec, std::span<double>(buffer.data(), len), rng);
      sum += power_sum(buffer.data(), len, kind, p);
      done += len;
    }
    switch (kind) {
      case PowerKind::One: return sum;
      case PowerKind::Two: return std::sqrt(sum);
      case PowerKind::Half: return sum * sum;
      default: return std::pow(sum, 1.0 / p);
    }
  }

  // NaN marks a dropped replicate.
  double operator()(RngStream& rng, std::vector<double>& buffer) const {
    double hi = norm(rng, buffer);
    double lo = hi;
    for (std::uint64_t i = 1; i < n; ++i) {
      const double v = norm(rng, buffer);
      hi = std::max(hi, v);
      lo = std::min(lo, v);
    }
    switch (statistic) {
      case Statistic::NormMoments: return hi;
      case Statistic::Contrast: return hi - lo;
      case Statistic::RelativeContrast:
        return lo > 0.0 ? (hi - lo) / lo : std::numeric_limits<double>::quiet_NaN();
      case Statistic::ScaledRangeTcl:
      case Statistic::NormalizedRangeYu: return range_scale * (hi - lo) - range_shift;
      case Statistic::RatioStat: return (hi - ratio_centre) / (lo - ratio_centre);
    }
    return 0.0;
  }
};

Proposition governing_proposition(Statistic s) {
  switch (s) {
    case Statistic::NormMoments: return Proposition::Prop2;
    case Statistic::NormalizedRangeYu: return Proposition::Yu;
    default: return Proposition::Tcl;
  }
}

void validate(const SimulationConfig& c) {
  if (!(c.p > 0.0) || !std::isfinite(c.p)) throw InvalidInput("p must be finite and > 0");
  if (c.replicates == 0) throw InvalidInput("replicates must be >= 1");
  if (c.replicates >= kMaxReplicates) throw InvalidInput("replicates must be < 2^40");
  if (c.d_values.empty()) throw InvalidInput("no dimension given");
  for (auto d : c.d_values)
    if (d == 0) throw InvalidInput("d must be >= 1");
  if (c.statistic == Statistic::NormMoments && !(c.n.is_fixed() && c.n(1) == 1))
    throw InvalidInput("norm-moments uses a single point per replicate (n = 1)");
}

SimulationResult run_one(const SimulationConfig& config, std::uint64_t d,
                         std::uint64_t schedule_index) {
  validate(config);
  SimulationResult result;
  result.config = config;
  result.d = d;
  result.n = config.n(d);
  result.stream_id_first = replicate_stream_id(schedule_index, 0);

  const AssumptionCheck check =
      check_assumptions(config.spec, config.p, governing_proposition(config.statistic));
  if (check.holds == TriState::No) {
    if (!config.force)
      throw AssumptionViolation(std::string("assumption check failed: ") + check.note);
    result.tags.emplace_back("assumptions_overridden");
  } else if (check.holds == TriState::Unknown) {
    result.tags.emplace_back("assumptions_unknown");
  }

  ReplicateKernel kernel{&config.spec, config.p, d, result.n, config.statistic,
                         power_kind(config.p)};
  const double dd = static_cast<double>(d);
  const double p = config.p;
  switch (config.statistic) {
    case Statistic::ScaledRangeTcl:
      kernel.range_scale = std::pow(dd, 0.5 - 1.0 / p);
      break;
    case Statistic::NormalizedRangeYu: {
      if (result.n < 2) throw InvalidInput("normalized-range-yu needs n(d) >= 2");
      const MomentPair m = moments(config.spec, p);
      if (!(m.mu_p > 0.0) || !(m.sigma_p > 0.0))
        throw DegenerateDistribution("normalized-range-yu needs mu_p > 0 and sigma_p > 0");
      const GumbelConstants g = gumbel_constants(result.n);
      kernel.range_scale = p * g.a_n * std::pow(dd, 0.5 - 1.0 / p) /
                           (std::pow(m.mu_p, 1.0 / p - 1.0) * m.sigma_p);
      kernel.range_shift = 2.0 * g.a_n * g.b_n;
      result.moments = m;
      if (p < 1.0) result.tags.emplace_back("exploratory");
      break;
    }
    case Statistic::RatioStat: {
      if (result.n < 2) throw InvalidInput("ratio-stat needs n >= 2");
      const MomentPair m = moments(config.spec, p);
      if (!(m.mu_p > 0.0)) throw DegenerateDistribution("ratio-stat needs mu_p > 0");
      kernel.ratio_centre = std::pow(dd, 1.0 / p) * std::pow(m.mu_p, 1.0 / p);
      result.moments = m;
      break;
    }
    default: break;
  }

  const unsigned workers = std::max(
      1u, config.workers ? config.workers : std::thread::hardware_concurrency());
  const std::uint64_t stored = config.keep_all_samples
                                   ? config.replicates
                                   : std::min<std::uint64_t>(config.replicates, config.sample_cap);
  const std::uint64_t wave = std::min(config.replicates, kWave);
  const double needed = 8.0 * static_cast<double>(stored + wave) +
                        8.0 * static_cast<double>(workers) * static_cast<double>(kBlock);
  if (needed > static_cast<double>(config.memory_budget_bytes)) {
    std::ostringstream msg;
    msg << "simulation needs about " << needed / 1048576.0 << " MiB of sample storage, over the "
        << config.memory_budget_bytes / 1048576.0 << " MiB budget; "
        << (config.keep_all_samples
                ? "use streaming mode (drop keep-all-samples) to keep a reservoir of sample_cap values"
                : "lower sample_cap or raise the memory budget");
    throw ResourceError(msg.str());
  }

  RunningStats stats;
  result.empirical_samples.reserve(stored);
  RngStream reservoir_rng(config.master_seed, kReservoirStreamBit | schedule_index);
  std::uint64_t seen = 0;

  std::vector<double> values(wave);
  for (std::uint64_t begin = 0; begin < config.replicates; begin += wave) {
    const std::uint64_t end = std::min(config.replicates, begin + wave);
    const std::uint64_t chunks = (end - begin + kChunk - 1) / kChunk;
    std::atomic<std::uint64_t> next_chunk{0};

    auto work = [&] {
      std::vector<double> buffer(kBlock);
      for (std::uint64_t c = next_chunk++; c < chunks; c = next_chunk++) {
        const std::uint64_t lo = begin + c * kChunk;
        const std::uint64_t hi = std::min(end, lo + kChunk);
        for (std::uint64_t r = lo; r < hi; ++r) {
          RngStream rng(config.master_seed, replicate_stream_id(schedule_index, r));
          values[r - begin] = kernel(rng, buffer);
        }
      }
    };
    const unsigned active = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks));
    if (active <= 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(active);
      for (unsigned w = 0; w < active; ++w) pool.emplace_back(work);
    }

    // Fold in replicate order so the result does not depend on scheduling.
    for (std::uint64_t r = begin; r < end; ++r) {
      const double v = values[r - begin];
      if (std::isnan(v)) {
        ++result.dropped;
        continue;
      }
      stats.add(v);
      ++seen;
      if (config.keep_all_samples || seen <= config.sample_cap) {
        result.empirical_samples.push_back(v);
      } else if (config.sample_cap > 0) {
        const std::uint64_t j = reservoir_rng.below(seen);
        if (j < config.sample_cap) result.empirical_samples[j] = v;
        result.samples_thinned = true;
      } else {
        result.samples_thinned = true;
      }
    }
  }

  result.count = stats.count();
  result.mean = stats.mean();
  result.variance = stats.variance();
  if (result.dropped > 0) {
    std::ostringstream msg;
    msg << result.dropped << " replicates dropped (minimum norm was 0)";
    result.warnings.push_back(msg.str());
  }
  return result;
}

void check_yu_condition(const SimulationConfig& config, std::vector<SimulationResult>& results) {
  if (config.statistic != Statistic::NormalizedRangeYu || results.empty()) return;
  const std::uint64_t d_max = config.d_values.back();
  const double cond = config.n.yu_condition(d_max);
  if (!(cond <= 1.0)) {
    std::ostringstream msg;
    msg << "n(d)^5 log^6(d) / d = " << cond << " > 1 at d = " << d_max
        << "; the growth condition on n(d) is not met at this scale";
    for (auto& r : results) {
      r.tags.emplace_back("yu_condition_violated");
      r.warnings.push_back(msg.str());
    }
  }
}

}  // namespace

std::string_view to_string(Statistic s) {
  switch (s) {
    case Statistic::NormMoments: return "norm-moments";
    case Statistic::Contrast: return "contrast";
    case Statistic::RelativeContrast: return "relative-contrast";
    case Statistic::ScaledRangeTcl: return "scaled-range-tcl";
    case Statistic::NormalizedRangeYu: return "normalized-range-yu";
    case Statistic::RatioStat: return "ratio-stat";
  }
  return "?";
}

std::optional<Statistic> parse_statistic(std::string_view name) {
  std::string key(name);
  std::replace(key.begin(), key.end(), '_', '-');
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  for (auto s : {Statistic::NormMoments, Statistic::Contrast, Statistic::RelativeContrast,
                 Statistic::ScaledRangeTcl, Statistic::NormalizedRangeYu, Statistic::RatioStat})
    if (to_string(s) == key) return s;
  return std::nullopt;
}

SampleSizeRule SampleSizeRule::fixed(std::uint64_t n) {
  if (n == 0) throw InvalidInput("n must be >= 1");
  SampleSizeRule r;
  r.fixed_ = n;
  return r;
}

SampleSizeRule SampleSizeRule::power(double exponent, double coefficient) {
  if (!(exponent >= 0.0) || !(coefficient > 0.0))
    throw InvalidInput("n(d) rule needs exponent >= 0 and coefficient > 0");
  SampleSizeRule r;
  r.exponent_ = exponent;
  r.coefficient_ = coefficient;
  return r;
}

std::uint64_t SampleSizeRule::operator()(std::uint64_t d) const {
  if (fixed_) return *fixed_;
  const double v = std::floor(coefficient_ * std::pow(static_cast<double>(d), exponent_));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(v));
}

double SampleSizeRule::yu_condition(std::uint64_t d) const {
  const double n = static_cast<double>((*this)(d));
  const double log_d = std::log(static_cast<double>(d));
  return std::pow(n, 5.0) * std::pow(log_d, 6.0) / static_cast<double>(d);
}

void RunningStats::merge(const RunningStats& other) noexcept {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double delta = other.mean_ - mean_;
  const double total = na + nb;
  mean_ += delta * nb / total;
  m2_ += other.m2_ + delta * delta * na * nb / total;
  count_ += other.count_;
}

double SimulationResult::standard_error() const {
  return count > 0 ? std::sqrt(variance / static_cast<double>(count)) : 0.0;
}

SimulationResult simulate(const SimulationConfig& config) {
  if (config.d_values.size() != 1)
    throw InvalidInput("simulate takes a single d; use simulate_schedule for a schedule");
  std::vector<SimulationResult> out{run_one(config, config.d_values.front(), 0)};
  check_yu_condition(config, out);
  return std::move(out.front());
}

std::vector<SimulationResult> simulate_schedule(const SimulationConfig& config) {
  const auto& ds = config.d_values;
  if (ds.size() < 4) throw InvalidInput("a d schedule needs at least 4 values");
  for (std::size_t i = 1; i < ds.size(); ++i)
    if (ds[i] <= ds[i - 1]) throw InvalidInput("d schedule must be strictly increasing");
  std::vector<SimulationResult> out;
  out.reserve(ds.size());
  for (std::size_t k = 0; k < ds.size(); ++k) out.push_back(run_one(config, ds[k], k));
  check_yu_condition(config, out);
  return out;
}

std::vector<RelativeContrastPoint> relative_contrast_consistency(
    const DistributionSpec& spec, double p, std::uint64_t n,
    const std::vector<std::uint64_t>& schedule, std::uint64_t replicates,
    std::uint64_t seed, unsigned workers) {
  if (!(moments(spec, p).mu_p > 0.0))
    throw DegenerateDistribution("relative contrast needs mu_p > 0");
  SimulationConfig config;
  config.spec = spec;
  config.p = p;
  config.d_values = schedule;
  config.n = SampleSizeRule::fixed(n);
  config.replicates = replicates;
  config.master_seed = seed;
  config.statistic = Statistic::RelativeContrast;
  config.workers = workers;
  config.sample_cap = 0;
  std::vector<RelativeContrastPoint> out;
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const SimulationResult r = run_one(config, schedule[k], k);
    out.push_back({schedule[k], r.mean, r.dropped});
  }
  return out;
}

}  // namespace conc
