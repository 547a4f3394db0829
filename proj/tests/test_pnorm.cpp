#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "concentration/dataset.hpp"
#include "concentration/errors.hpp"
#include "concentration/pnorm.hpp"

using namespace conc;

TEST_SUITE("pnorm") {

TEST_CASE("pythagorean triple") {
  const std::vector<double> x{3.0, 4.0};
  CHECK(pnorm(x, 2.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(pnorm(x, 1.0) == 7.0);
}

TEST_CASE("single nonzero coordinate gives |c| for any p") {
  std::vector<double> x(50, 0.0);
  x[17] = -2.5;
  for (double p : {0.1, 0.5, 1.0, 2.0, 3.7, 50.0}) CHECK(pnorm(x, p) == doctest::Approx(2.5));
}

TEST_CASE("unit vector of length 1e6 at p = 0.5 does not overflow") {
  const std::vector<double> x(1000000, 1.0);
  CHECK(pnorm(x, 0.5) == doctest::Approx(1e12).epsilon(1e-10));
}

TEST_CASE("huge and tiny entries stay finite") {
  const std::vector<double> big{1e300, 1e300};
  CHECK(pnorm(big, 2.0) == doctest::Approx(std::sqrt(2.0) * 1e300));
  const std::vector<double> tiny{1e-300, 1e-300};
  CHECK(pnorm(tiny, 2.0) == doctest::Approx(std::sqrt(2.0) * 1e-300));
}

TEST_CASE("prenorm flag and invalid exponents") {
  CHECK(PNormParams(0.5).is_prenorm());
  CHECK_FALSE(PNormParams(1.0).is_prenorm());
  CHECK_THROWS_AS(PNormParams(0.0), InvalidInput);
  CHECK_THROWS_AS(PNormParams(-2.0), InvalidInput);
  const std::vector<double> x{1.0};
  CHECK_THROWS_AS(pnorm(x, 0.0), InvalidInput);
  CHECK_THROWS_AS(pnorm(std::vector<double>{}, 2.0), InvalidInput);
  CHECK_THROWS_AS(pnorm(std::vector<double>{1.0, NAN}, 2.0), InvalidInput);
}

TEST_CASE("prenorm violates the triangle inequality") {
  const std::vector<double> a{1.0, 0.0}, b{0.0, 1.0}, s{1.0, 1.0};
  CHECK(pnorm(s, 0.5) > pnorm(a, 0.5) + pnorm(b, 0.5));
  CHECK(pnorm(s, 2.0) <= pnorm(a, 2.0) + pnorm(b, 2.0));
}

TEST_CASE("general exponent matches the direct formula") {
  const std::vector<double> x{0.3, -1.2, 2.0, 0.0, 5.5};
  for (double p : {0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 7.25}) {
    double s = 0.0;
    for (double v : x) s += std::pow(std::abs(v), p);
    CHECK(pnorm(x, p) == doctest::Approx(std::pow(s, 1.0 / p)).epsilon(1e-14));
  }
}

TEST_CASE("contrast of identical norms") {
  const auto c = contrast_stats(std::vector<double>{5.0, 5.0, 5.0});
  CHECK(c.contrast == 0.0);
  REQUIRE(c.relative_contrast.has_value());
  CHECK(*c.relative_contrast == 0.0);
}

TEST_CASE("contrast arithmetic") {
  const auto c = contrast_stats(std::vector<double>{2.0, 6.0});
  CHECK(c.max_norm == 6.0);
  CHECK(c.min_norm == 2.0);
  CHECK(c.contrast == 4.0);
  CHECK(*c.relative_contrast == 2.0);
}

TEST_CASE("relative contrast undefined when the minimum is zero") {
  const auto c = contrast_stats(std::vector<double>{0.0, 1.0});
  CHECK(c.contrast == 1.0);
  CHECK_FALSE(c.relative_contrast.has_value());
}

TEST_CASE("contrast needs two norms") {
  CHECK_THROWS_AS(contrast_stats(std::vector<double>{1.0}), InvalidInput);
  CHECK_THROWS_AS(contrast_stats(std::vector<double>{1.0, -1.0}), InvalidInput);
}

TEST_CASE("dataset norms") {
  CHECK(dataset_norms({{1.0, 0.0}, {0.0, 1.0}}, 1.0) == std::vector<double>{1.0, 1.0});
  CHECK(dataset_norms({{3.0, 4.0}}, 2.0)[0] == doctest::Approx(5.0));
  const std::vector<std::vector<double>> zeros(3, std::vector<double>(8, 0.0));
  CHECK(dataset_norms(zeros, 2.0) == std::vector<double>{0.0, 0.0, 0.0});
  CHECK_THROWS_AS(dataset_norms({{1.0, 2.0}, {1.0}}, 2.0), InvalidInput);
}

TEST_CASE("CSV reading with and without header") {
  std::istringstream with("a,b\n3,4\n6,8\n");
  const auto ds = read_dataset_csv(with);
  CHECK(ds.header == std::vector<std::string>{"a", "b"});
  CHECK(ds.n() == 2);
  CHECK(ds.d() == 2);
  std::istringstream without("3,4\n6,8\n");
  const auto ds2 = read_dataset_csv(without);
  CHECK(ds2.header.empty());
  CHECK(ds2.rows == ds.rows);
}

TEST_CASE("CSV errors name line and column") {
  std::istringstream ragged("1,2,3\n4,5\n");
  try {
    read_dataset_csv(ragged);
    FAIL("expected InvalidInput");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  std::istringstream bad("1,2\n3,abc\n");
  try {
    read_dataset_csv(bad);
    FAIL("expected InvalidInput");
  } catch (const InvalidInput& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("column 2") != std::string::npos);
  }
}

}
