#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace conc::verify {

/// Experiment scale. Standard matches the documented acceptance sizes;
/// Fast is for CI smoke runs; Paper is a larger confirmation run.
enum class Budget { Fast, Standard, Paper };

std::string_view to_string(Budget b);
std::optional<Budget> parse_budget(std::string_view name);

/// One row of the committed budget table. Fields a suite does not use are 0.
struct BudgetRow {
  std::string_view suite;
  Budget budget;
  std::uint64_t replicates;
  std::vector<std::uint64_t> d;
  /// Main pass threshold (relative error, KS distance, slope error, ...).
  double tolerance;
};

/// Looks up the committed row; throws InvalidInput for unknown suites.
const BudgetRow& budget_row(std::string_view suite, Budget budget);

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  /// How value is compared to threshold, e.g. "<=", "abs_diff<=".
  std::string comparison;
  bool passed = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  Budget budget = Budget::Standard;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool passed() const;
};

/// moments, rsd, variance-rate, tcl, gumbel-sum, yu, bounds, contrast-rate,
/// mixture-ordering, engine.
const std::vector<std::string>& suite_names();

constexpr std::uint64_t kDefaultSeed = 20130707;

/// Throws InvalidInput for an unknown suite name.
SuiteResult run_suite(std::string_view suite, Budget budget,
                      std::uint64_t seed = kDefaultSeed, unsigned workers = 0);

}  // namespace conc::verify
