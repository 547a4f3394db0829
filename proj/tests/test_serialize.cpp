#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "concentration/errors.hpp"
#include "concentration/serialize.hpp"

using namespace conc;

TEST_SUITE("serialize") {

TEST_CASE("doubles round trip") {
  for (double v : {0.1, 1.0 / 3.0, 2.0 / 3.0, 1e-300, 6.02214076e23, -0.0,
                   std::numeric_limits<double>::max(), 0.44721359549995787}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("distribution specs from JSON") {
  CHECK(distribution_from_json(json{{"family", "uniform01"}}).family() == Family::Uniform01);
  CHECK(distribution_from_json(json{{"family", "normal"}}).family() == Family::StandardNormal);
  const auto m = distribution_from_json(json{{"family", "mixture"}, {"offset", 2.5}});
  CHECK(m.family() == Family::GaussianMixtureSym);
  CHECK(m.offset() == 2.5);
  const auto e = distribution_from_json(json{{"family", "empirical"}, {"values", {1, 2, 3}}});
  CHECK(e.values().size() == 3);
  const auto f = distribution_from_json(json{{"family", "empirical"}, {"path", "values.csv"}},
                                        TEST_DATA_DIR);
  CHECK(f.values().size() == 5);
  CHECK_THROWS_AS(distribution_from_json(json{{"family", "cauchy"}}), InvalidSpec);
  CHECK_THROWS_AS(distribution_from_json(json{{"family", "empirical"}, {"values", {1, 1}}}),
                  InvalidSpec);
}

TEST_CASE("prediction report keys are the field names") {
  const auto r = predict(DistributionSpec::uniform01(), 2.0, 10000);
  const json j = to_json(r);
  for (const char* key : {"p", "d", "mu_p", "sigma_p", "mean_leading", "mean_second_order",
                          "var_leading", "rsd_scaled_limit", "leading_order", "assumption_checks"})
    CHECK(j.contains(key));
  CHECK(j["rsd_scaled_limit"].get<double>() == r.rsd_scaled_limit);

  const auto b = bounds(moments(DistributionSpec::uniform01(), 2.0), 10000, 0.1, 1.0);
  const json jb = to_json(b);
  for (const char* key : {"epsilon", "chebyshev_bound", "chebyshev_bound_clamped",
                          "mcdiarmid_bound", "support_bound_C", "leading_order"})
    CHECK(jb.contains(key));
  CHECK(to_json(bounds(moments(DistributionSpec::uniform01(), 2.0), 10, 0.1))["mcdiarmid_bound"]
            .is_null());
}

TEST_CASE("simulation config round trip") {
  SimulationConfig c;
  c.spec = DistributionSpec::gaussian_mixture(1.25);
  c.p = 0.75;
  c.d_values = {100, 1000, 10000, 100000};
  c.n = SampleSizeRule::power(0.15, 2.0);
  c.replicates = 777;
  c.master_seed = 123456789012345ULL;
  c.statistic = Statistic::NormalizedRangeYu;
  c.sample_cap = 55;
  const json j = to_json(c);
  const auto back = simulation_config_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(back.n(1000000) == c.n(1000000));

  CHECK_THROWS_AS(simulation_config_from_json(json::array()), InvalidInput);
  CHECK_THROWS_AS(simulation_config_from_json(json{{"statistic", "median"}}), InvalidInput);
  CHECK_THROWS_AS(simulation_config_from_json(json{{"n", "ten"}}), InvalidInput);
}

TEST_CASE("CSV writers") {
  std::ostringstream s;
  const std::vector<double> xs{0.1, 2.5};
  write_samples_csv(s, xs, "contrast");
  CHECK(s.str() == "contrast\n0.1\n2.5\n");

  LimitLawTable t;
  t.grid = {0.0, 1.0};
  t.cdf_values = {0.25, 0.75};
  std::ostringstream u;
  write_table_csv(u, t);
  CHECK(u.str() == "x,cdf\n0,0.25\n1,0.75\n");
}

}
