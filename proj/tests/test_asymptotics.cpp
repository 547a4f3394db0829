#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "concentration/asymptotics.hpp"
#include "concentration/errors.hpp"
#include "concentration/pnorm.hpp"
#include "concentration/rng.hpp"

using namespace conc;

TEST_SUITE("asymptotics") {

TEST_CASE("uniform scaled RSD limits") {
  const auto r1 = predict(moments(DistributionSpec::uniform01(), 1.0), 1000);
  CHECK(r1.rsd_scaled_limit == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  const auto r2 = predict(moments(DistributionSpec::uniform01(), 2.0), 1000);
  CHECK(r2.rsd_scaled_limit == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-14));
  CHECK(r2.rsd_scaled_limit == doctest::Approx(0.44721).epsilon(1e-5));
}

TEST_CASE("p = 1 has no second-order correction") {
  MomentPair m{1.0, 0.7, 3.3};
  const auto r = predict(m, 12345);
  CHECK(r.mean_second_order == doctest::Approx(12345 * 0.7).epsilon(1e-15));
  CHECK(r.mean_leading == doctest::Approx(12345 * 0.7).epsilon(1e-15));
}

TEST_CASE("prediction formulas") {
  const auto m = moments(DistributionSpec::uniform01(), 2.0);
  const auto r = predict(m, 10000);
  CHECK(r.mean_leading == doctest::Approx(100.0 / std::sqrt(3.0)));
  // mu^{2/p-2} sigma^2 / (d^{1-2/p} p^2) = 3 * (4/45) / 4
  CHECK(r.var_leading == doctest::Approx(1.0 / 15.0).epsilon(1e-14));
  CHECK(r.leading_order);
  CHECK(r.var_leading >= 0.0);
  CHECK(r.mean_leading > 0.0);
}

TEST_CASE("rsd limit is zero iff sigma is zero") {
  CHECK(predict(MomentPair{2.0, 1.0, 0.0}, 10).rsd_scaled_limit == 0.0);
  CHECK(predict(MomentPair{2.0, 1.0, 0.1}, 10).rsd_scaled_limit > 0.0);
  CHECK_THROWS_AS(predict(MomentPair{2.0, 0.0, 0.0}, 10), DegenerateDistribution);
}

TEST_CASE("predict from a spec attaches assumption checks") {
  const auto r = predict(DistributionSpec::standard_normal(), 3.0, 100);
  REQUIRE(r.assumption_checks.size() == 2);
  CHECK(r.assumption_checks[1].required_order == 9.0);
}

TEST_CASE("quadratic second-order expansion is exact") {
  const auto e = second_order_mean(power_function(2.0), 3.0, 4.0, 10);
  CHECK(e.value() == doctest::Approx(9.4).epsilon(1e-15));
  CHECK(e.correction == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("linear expansion has zero correction") {
  const auto e = second_order_mean(power_function(1.0), 2.5, 7.0, 3);
  CHECK(e.correction == 0.0);
  CHECK(e.value() == 2.5);
}

TEST_CASE("square-root expansion against a Monte Carlo oracle") {
  // phi(u) = u^{1/2}, mu = 1/3, sigma^2 = 4/45, d = 100:
  // 1/sqrt 3 - (1/8)(1/3)^{-3/2}(4/45)/100 = 0.57735027 - 0.00057735
  const auto e = second_order_mean(power_function(0.5), 1.0 / 3.0, 4.0 / 45.0, 100);
  CHECK(e.value() == doctest::Approx(0.5767729189).epsilon(1e-9));

  // E sqrt(mean of 100 squared uniforms)
  RngStream rng(2024, 0);
  const int reps = 1000000;
  double sum = 0.0, sum2 = 0.0;
  for (int r = 0; r < reps; ++r) {
    double s = 0.0;
    for (int j = 0; j < 100; ++j) {
      const double u = rng.uniform();
      s += u * u;
    }
    const double v = std::sqrt(s / 100.0);
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / reps;
  const double se = std::sqrt((sum2 / reps - mean * mean) / reps);
  CHECK(std::abs(mean - e.value()) < 4.0 * se);
  // the expansion beats the leading term by a wide margin
  CHECK(std::abs(mean - e.phi_at_mu) > 10.0 * se);
}

TEST_CASE("singular expansion") {
  CHECK_THROWS_AS(second_order_mean(power_function(0.5), 0.0, 1.0, 10), SingularExpansion);
}

TEST_CASE("Chebyshev-type bound for uniform p = 2") {
  const auto m = moments(DistributionSpec::uniform01(), 2.0);
  const auto b = bounds(m, 10000, 0.1);
  // (4/45) / (0.01 * 1e4 * 4 * (1/9))
  CHECK(b.chebyshev_bound == doctest::Approx(0.002).epsilon(1e-12));
  CHECK(b.chebyshev_bound_clamped == b.chebyshev_bound);
  CHECK_FALSE(b.mcdiarmid_bound.has_value());
  const auto loose = bounds(m, 10, 0.01);
  CHECK(loose.chebyshev_bound > 1.0);
  CHECK(loose.chebyshev_bound_clamped == 1.0);
}

TEST_CASE("bounded-difference bound") {
  const auto m = moments(DistributionSpec::uniform01(), 2.0);
  const auto b = bounds(m, 10000, 0.1, 1.0);
  REQUIRE(b.mcdiarmid_bound.has_value());
  CHECK(*b.mcdiarmid_bound == doctest::Approx(2.0 * std::exp(-0.01 / 3.0 / 2.0)));
  // independent of d at p = 2
  CHECK(*bounds(m, 100, 0.1, 1.0).mcdiarmid_bound == doctest::Approx(*b.mcdiarmid_bound));
  // vanishes as epsilon grows
  CHECK(*bounds(m, 100, 1e3, 1.0).mcdiarmid_bound < 1e-300);
  CHECK(*bounds(m, 100, 1e6, 1.0).mcdiarmid_bound == 0.0);
  // p < 1 is outside the hypothesis
  CHECK_THROWS_AS(bounds(moments(DistributionSpec::uniform01(), 0.5), 100, 0.1, 1.0),
                  AssumptionViolation);
}

TEST_CASE("consistency limits") {
  const auto m2 = moments(DistributionSpec::uniform01(), 2.0);
  CHECK(consistency_limit(m2, 2.0).value == doctest::Approx(1.0 / 3.0));
  const auto m1 = moments(DistributionSpec::uniform01(), 1.0);
  CHECK(consistency_limit(m1, 3.0).value == doctest::Approx(0.125));
  for (double p : {0.5, 1.5, 4.0}) {
    const auto m = moments(DistributionSpec::standard_normal(), p);
    CHECK(consistency_limit(m, p).value == doctest::Approx(m.mu_p));
  }
  const auto inf = consistency_limit(m2, 2.0, false);
  CHECK(inf.diverges);
  CHECK(std::isinf(inf.value));
}

TEST_CASE("heavy tails: E||X||_2^2 / d keeps growing") {
  // Pareto(alpha = 1.5) has E X^2 = inf, so the scaled second moment diverges.
  RngStream rng(99, 0);
  // Medians over replicates, since the replicate values are heavy-tailed too.
  auto scaled = [&](std::size_t d) {
    std::vector<double> values;
    std::vector<double> x(d);
    for (int r = 0; r < 101; ++r) {
      for (auto& v : x) v = std::pow(rng.uniform_open(), -1.0 / 1.5);
      const double n = pnorm(x, 2.0);
      values.push_back(n * n / static_cast<double>(d));
    }
    std::nth_element(values.begin(), values.begin() + 50, values.end());
    return values[50];
  };
  const double small = scaled(100);
  const double large = scaled(100000);
  CHECK(large > 3.0 * small);
}

}
