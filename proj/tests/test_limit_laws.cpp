#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "concentration/errors.hpp"
#include "concentration/limit_laws.hpp"
#include "concentration/quadrature.hpp"

using namespace conc;

namespace {

// Brute-force oracle for P{E + E' <= 0}: with u = e^{-t} the integral becomes
// int_0^inf exp(-u - 1/u) du; composite Simpson in s = log u.
double gumbel_sum_cdf_zero_oracle() {
  const double lo = -40.0, hi = 6.0;
  const int steps = 200000;
  const double h = (hi - lo) / steps;
  auto g = [](double s) {
    const double u = std::exp(s);
    return std::exp(-u - 1.0 / u) * u;
  };
  double sum = g(lo) + g(hi);
  for (int i = 1; i < steps; ++i) sum += (i % 2 ? 4.0 : 2.0) * g(lo + i * h);
  return sum * h / 3.0;
}

}  // namespace

TEST_SUITE("limit_laws") {

TEST_CASE("normal CDF helpers") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-14));
  CHECK(normal_sf(10.0) == doctest::Approx(7.61985302416047e-24).epsilon(1e-10));
  CHECK(normal_pdf(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)));
}

TEST_CASE("Gumbel constants") {
  const auto g3 = gumbel_constants(3);
  CHECK(g3.a_n == doctest::Approx(std::sqrt(2.0 * std::log(3.0))).epsilon(1e-15));
  const double a3 = g3.a_n;
  CHECK(g3.b_n == doctest::Approx(a3 - (std::log(std::log(3.0)) + std::log(4.0 * std::numbers::pi)) /
                                           (2.0 * a3)));

  const auto g100 = gumbel_constants(100);
  CHECK(std::abs(g100.a_n - 3.034854) < 1e-6);
  CHECK(std::abs(g100.b_n - 2.366255) < 1e-6);

  const auto g6 = gumbel_constants(1000000);
  CHECK(std::abs(g6.a_n / g6.b_n - 1.0) < 0.15);
  CHECK_THROWS_AS(gumbel_constants(1), InvalidInput);
}

TEST_CASE("Gumbel-sum CDF limits and the value at 0") {
  CHECK(gumbel_sum_cdf(50.0) >= 1.0 - 1e-8);
  CHECK(gumbel_sum_cdf(-30.0) <= 1e-8);
  const double oracle = gumbel_sum_cdf_zero_oracle();
  CHECK(std::abs(oracle - 0.279733) < 1e-5);
  CHECK(std::abs(gumbel_sum_cdf(0.0) - oracle) < 1e-9);
}

TEST_CASE("Gumbel-sum CDF is monotone") {
  double prev = 0.0;
  for (double x = -10.0; x <= 25.0; x += 0.25) {
    const double f = gumbel_sum_cdf(x);
    CHECK(f >= prev - 1e-12);
    CHECK(f <= 1.0);
    prev = f;
  }
}

TEST_CASE("Gumbel-sum quantile round trips") {
  CHECK(std::abs(gumbel_sum_quantile(gumbel_sum_cdf(1.0)) - 1.0) < 1e-6);
  const double m = gumbel_sum_quantile(0.5);
  CHECK(std::abs(gumbel_sum_cdf(m) - 0.5) < 1e-7);
  CHECK_THROWS_AS(gumbel_sum_quantile(0.0), InvalidInput);
  CHECK_THROWS_AS(gumbel_sum_quantile(1.0), InvalidInput);
}

TEST_CASE("Gumbel-sum mean is twice Euler's constant") {
  const auto upper = quad::integrate([](double x) { return 1.0 - gumbel_sum_cdf(x); }, 0.0, 60.0,
                                     1e-7);
  const auto lower = quad::integrate([](double x) { return gumbel_sum_cdf(x); }, -40.0, 0.0, 1e-7);
  CHECK(std::abs(upper.value - lower.value - 2.0 * std::numbers::egamma) < 1e-6);
}

TEST_CASE("normal range CDF for n = 2 matches the closed form") {
  CHECK(normal_range_cdf(2, 0.0) == 0.0);
  CHECK(normal_range_cdf(7, 0.0) == 0.0);
  for (double x : {0.1, 0.5, 1.0, 2.0, 1.96 * std::sqrt(2.0), 4.0, 8.0}) {
    const double exact = 2.0 * normal_cdf(x / std::sqrt(2.0)) - 1.0;
    CHECK(std::abs(normal_range_cdf(2, x) - exact) < 1e-7);
  }
  CHECK(normal_range_cdf(2, 1.96 * std::sqrt(2.0)) == doctest::Approx(0.95).epsilon(1e-3));
}

TEST_CASE("normal range CDF for n = 5 against Monte Carlo") {
  RngStream rng(555, 0);
  const int reps = 1000000;
  int below6 = 0, below3 = 0;
  for (int r = 0; r < reps; ++r) {
    double lo = INFINITY, hi = -INFINITY;
    for (int i = 0; i < 5; ++i) {
      const double z = rng.normal();
      lo = std::min(lo, z);
      hi = std::max(hi, z);
    }
    below6 += hi - lo <= 6.0;
    below3 += hi - lo <= 3.0;
  }
  const double p6 = static_cast<double>(below6) / reps;
  const double p3 = static_cast<double>(below3) / reps;
  CHECK(p6 >= 0.995);
  CHECK(normal_range_cdf(5, 6.0) >= 0.995);
  CHECK(std::abs(normal_range_cdf(5, 6.0) - p6) < 4.0 * std::sqrt(p6 * (1 - p6) / reps) + 1e-6);
  CHECK(std::abs(normal_range_cdf(5, 3.0) - p3) < 4.0 * std::sqrt(p3 * (1 - p3) / reps));
}

TEST_CASE("tabulated laws") {
  const auto grid = linspace(-5.0, 15.0, 81);
  CHECK(grid.size() == 81);
  CHECK(grid.front() == -5.0);
  CHECK(grid.back() == 15.0);
  const auto t = tabulate_gumbel_sum(grid);
  CHECK(t.cdf_values.size() == grid.size());
  CHECK_FALSE(t.empirical);
  CHECK(std::is_sorted(t.cdf_values.begin(), t.cdf_values.end()));
  CHECK(table_cdf(t, 0.1) == doctest::Approx(gumbel_sum_cdf(0.0)));
  CHECK(std::abs(interpolate_cdf(t, 0.1) - gumbel_sum_cdf(0.1)) < 2e-3);
  CHECK(interpolate_cdf(t, -100.0) == t.cdf_values.front());
  CHECK(interpolate_cdf(t, 100.0) == t.cdf_values.back());

  const auto r = tabulate_normal_range(4, linspace(0.0, 10.0, 41));
  CHECK(r.n == 4);
  CHECK(r.cdf_values.front() == 0.0);
  CHECK(std::is_sorted(r.cdf_values.begin(), r.cdf_values.end()));
}

TEST_CASE("ratio law table for n = 2") {
  RngStream rng(77, 0);
  const auto t = ratio_law_table(2, 200000, rng);
  CHECK(t.empirical);
  CHECK(t.grid.size() == 1001);
  CHECK(std::is_sorted(t.grid.begin(), t.grid.end()));
  CHECK(std::is_sorted(t.cdf_values.begin(), t.cdf_values.end()));
  // max and min have different signs with probability 1/2
  CHECK(std::abs(table_cdf(t, -1e-12) - 0.5) < 0.005);
  CHECK(t.quad_error > 0.0);

  RngStream again(77, 0);
  const auto t2 = ratio_law_table(2, 200000, again);
  CHECK(t2.grid == t.grid);
  CHECK(t2.cdf_values == t.cdf_values);
  RngStream small(1, 0);
  CHECK_THROWS_AS(ratio_law_table(2, 1000, small), InvalidInput);
}

}
