#include <doctest.h>

#include <cmath>

#include "relibench/performance_table.hpp"
#include "relibench/rng.hpp"
#include "relibench/stats.hpp"

using namespace relibench;

namespace {

PerformanceTable make_table(std::map<std::string, Eigen::ArrayXd> entries) {
  return PerformanceTable("test", std::move(entries));
}

}  // namespace

TEST_CASE("true mean of stored vectors") {
  const auto table = make_table({{"a", Eigen::ArrayXd::Constant(3, 1.0)},
                                 {"b", Eigen::ArrayXd{{0.0, 10.0}}}});
  CHECK(true_mean(table, "a") == 1.0);
  CHECK(true_mean(table, "b") == 5.0);
  CHECK_THROWS_AS(true_mean(table, "missing"), LookupError);
}

TEST_CASE("true mean of surrogate-generated store sits near the surrogate mean") {
  RngStream rng(100, 0);
  Eigen::ArrayXd values(200);
  for (int i = 0; i < 200; ++i) values(i) = rng.normal(100.0, 10.0);
  const auto table = make_table({{"c", values}});
  CHECK(std::fabs(true_mean(table, "c") - 100.0) < 3.0 * 10.0 / std::sqrt(200.0));
}

TEST_CASE("resample: single support point, determinism, concentration") {
  const auto single = make_table({{"a", Eigen::ArrayXd::Constant(1, 7.0)}});
  RngStream rng(1, 1);
  const Eigen::ArrayXd draws = resample(single, "a", 5, rng);
  for (int i = 0; i < 5; ++i) CHECK(draws(i) == 7.0);

  const auto coin = make_table({{"a", Eigen::ArrayXd{{0.0, 1.0}}}});
  RngStream r1(3, 9), r2(3, 9);
  const Eigen::ArrayXd d1 = resample(coin, "a", 1000, r1);
  const Eigen::ArrayXd d2 = resample(coin, "a", 1000, r2);
  CHECK((d1 == d2).all());

  RngStream r3(5, 0);
  const Eigen::ArrayXd big = resample(coin, "a", 100000, r3);
  CHECK(std::fabs(big.mean() - 0.5) < 0.01);
}

TEST_CASE("resample only emits stored values") {
  RngStream gen(8, 0);
  Eigen::ArrayXd values(10);
  for (int i = 0; i < 10; ++i) values(i) = gen.normal(50.0, 20.0);
  const auto table = make_table({{"a", values.abs()}});
  RngStream rng(9, 0);
  const Eigen::ArrayXd draws = resample(table, "a", 500, rng);
  for (Eigen::Index i = 0; i < draws.size(); ++i) {
    bool found = false;
    for (Eigen::Index j = 0; j < values.size(); ++j)
      if (draws(i) == table.samples("a")(j)) found = true;
    CHECK(found);
  }
  CHECK_THROWS_AS(resample(table, "a", 0, rng), ParameterError);
  CHECK_THROWS_AS(resample(table, "zz", 5, rng), LookupError);
}

TEST_CASE("normal surrogate: constants and the n-1 divisor") {
  const auto constants = make_table({{"a", Eigen::ArrayXd::Constant(3, 5.0)}});
  const NormalSurrogate flat = normal_surrogate(constants, "a");
  CHECK(flat.mean == 5.0);
  CHECK(flat.stddev == 0.0);
  RngStream rng(2, 0);
  const Eigen::ArrayXd draws = sample_surrogate(flat, 10, rng);
  for (int i = 0; i < 10; ++i) CHECK(draws(i) == 5.0);

  const auto pair = make_table({{"a", Eigen::ArrayXd{{0.0, 2.0}}}});
  const NormalSurrogate s = normal_surrogate(pair, "a");
  CHECK(s.mean == 1.0);
  CHECK(s.stddev == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("surrogate of a single stored value has zero stddev") {
  const auto table = make_table({{"a", Eigen::ArrayXd::Constant(1, 3.5)}});
  const NormalSurrogate s = normal_surrogate(table, "a");
  CHECK(s.mean == 3.5);
  CHECK(s.stddev == 0.0);
}

TEST_CASE("surrogate draws reproduce the distribution moments") {
  NormalSurrogate s;
  s.mean = 1.0;
  s.stddev = std::sqrt(2.0);
  RngStream rng(77, 1);
  const Eigen::ArrayXd draws = sample_surrogate(s, 100000, rng);
  CHECK(std::fabs(sample_variance(draws) - 2.0) < 0.1);  // within 5%
  CHECK(std::fabs(draws.mean() - 1.0) < 0.02);
}

TEST_CASE("best by true mean with lexicographic tie break") {
  const auto simple = make_table({{"a", Eigen::ArrayXd::Constant(1, 1.0)},
                                  {"b", Eigen::ArrayXd::Constant(1, 2.0)}});
  CHECK(best_by_true_mean(simple) == "a");

  const auto tied = make_table({{"b", Eigen::ArrayXd{{1.0, 1.0}}},
                                {"a", Eigen::ArrayXd{{2.0, 0.0}}}});
  CHECK(best_by_true_mean(tied) == "a");  // both means 1, 'a' < 'b'

  // the best-by-true-mean config is never worse than any other
  for (const auto& [id, values] : tied.entries())
    CHECK(true_mean(tied, best_by_true_mean(tied)) <= values.mean());
}

TEST_CASE("table construction validates its entries") {
  CHECK_THROWS_AS(make_table({}), DataError);
  CHECK_THROWS_AS(make_table({{"a", Eigen::ArrayXd()}}), DataError);
  CHECK_THROWS_AS(make_table({{"a", Eigen::ArrayXd{{-1.0}}}}), DataError);
  CHECK_THROWS_AS(
      make_table({{"a", Eigen::ArrayXd{{std::numeric_limits<double>::infinity()}}}}),
      DataError);
}

TEST_CASE("nominal sample count tracks the largest vector") {
  const auto table = make_table({{"a", Eigen::ArrayXd::Constant(200, 1.0)},
                                 {"b", Eigen::ArrayXd::Constant(10, 1.0)}});
  CHECK(table.nominal_sample_count() == 200);
  CHECK(table.num_configs() == 2);
  CHECK(table.config_ids() == std::vector<std::string>{"a", "b"});
}
