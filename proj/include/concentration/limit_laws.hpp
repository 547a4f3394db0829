#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "concentration/rng.hpp"

namespace conc {

/// Standard normal CDF, 0.5 * erfc(-x / sqrt 2).
///
/// std::erfc from glibc evaluates the fdlibm (Sun Microsystems, 1993) rational
/// and continued-fraction-derived approximations, documented there with
/// errors below 1 ulp; absolute error is therefore well under 1e-15.
double normal_cdf(double x);
/// Upper tail 1 - normal_cdf(x) without cancellation.
double normal_sf(double x);
double normal_pdf(double x);

/// Normalizing constants for the extremes of n standard normals:
/// a_n = sqrt(2 log n), b_n = a_n - (log log n + log 4 pi) / (2 a_n).
struct GumbelConstants {
  std::uint64_t n = 0;
  double a_n = 0.0;
  double b_n = 0.0;
};

GumbelConstants gumbel_constants(std::uint64_t n);

/// P{E + E' <= x} for independent standard Gumbel E, E'
/// (integral of exp(-t - e^{-t} - e^{-(x-t)}) over t), absolute error <= 1e-8.
double gumbel_sum_cdf(double x);

/// Inverse of gumbel_sum_cdf by bisection on [-20, 60]; q in (0, 1).
double gumbel_sum_quantile(double q);

/// P{M_n <= x} for the range M_n of n standard normals,
/// n * int phi(t) [Phi(t+x) - Phi(t)]^{n-1} dt, absolute error <= 1e-7.
double normal_range_cdf(std::uint64_t n, double x);

enum class LawKind { GumbelSum, NormalRange, RatioLaw };

std::string law_name(LawKind kind);

/// Tabulated CDF of a limit law.
struct LimitLawTable {
  LawKind law = LawKind::GumbelSum;
  std::uint64_t n = 0;  // unused for GumbelSum
  std::vector<double> grid;
  std::vector<double> cdf_values;
  /// Quadrature error bound, or for the Monte Carlo RatioLaw table the 95%
  /// Dvoretzky-Kiefer-Wolfowitz band half-width.
  double quad_error = 0.0;
  bool empirical = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;
};

LimitLawTable tabulate_gumbel_sum(std::span<const double> grid);
LimitLawTable tabulate_normal_range(std::uint64_t n, std::span<const double> grid);

/// Monte Carlo table of R_n = max Z_i / min Z_i (no closed form is used).
/// Needs samples >= 1e5. The grid holds 1001 order statistics.
LimitLawTable ratio_law_table(std::uint64_t n, std::uint64_t samples, RngStream& rng);

/// Evaluates a tabulated CDF by step lookup (the largest grid point <= x).
double table_cdf(const LimitLawTable& table, double x);

/// Piecewise-linear interpolation of a tabulated CDF, clamped to the first
/// and last values outside the grid. With a quadrature table on a fine grid
/// this is a cheap stand-in for the exact CDF in KS computations.
double interpolate_cdf(const LimitLawTable& table, double x);

/// Evenly spaced grid helper.
std::vector<double> linspace(double lo, double hi, std::size_t count);

}  // namespace conc
