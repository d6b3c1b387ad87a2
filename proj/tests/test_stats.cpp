#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "relibench/rng.hpp"
#include "relibench/stats.hpp"

using namespace relibench;

namespace {

Eigen::ArrayXd arr(std::initializer_list<double> values) {
  Eigen::ArrayXd out(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const double v : values) out(i++) = v;
  return out;
}

Eigen::ArrayXd normal_sample(RngStream& rng, int n, double mean = 0.0, double sd = 1.0) {
  Eigen::ArrayXd out(n);
  for (int i = 0; i < n; ++i) out(i) = rng.normal(mean, sd);
  return out;
}

}  // namespace

TEST_CASE("normal cdf reference points") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.0) == doctest::Approx(0.841344746068543).epsilon(1e-12));
  CHECK(normal_cdf(-1.959963984540054) == doctest::Approx(0.025).epsilon(1e-10));
  CHECK(normal_cdf(6.0) > 1.0 - 1e-8);
  CHECK(normal_cdf(-6.0) < 1e-8);
}

TEST_CASE("student t cdf: Cauchy closed form at dof 1") {
  // F(x) = 1/2 + atan(x)/pi
  for (const double x : {-10.0, -2.5, -1.0, 0.0, 0.3, 1.0, 4.0, 25.0}) {
    const double expected = 0.5 + std::atan(x) / 3.14159265358979323846;
    CHECK(std::fabs(student_t_cdf(x, 1.0) - expected) <= 1e-10);
  }
  CHECK(student_t_cdf(1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("student t cdf agrees with quadrature at fractional dof") {
  for (const double dof : {1.0, 2.0, 3.7, 4.0, 14.5, 29.0}) {
    for (const double x : {-3.0, -1.224744871391589, -0.2, 0.0, 0.7, 2.4}) {
      CHECK(std::fabs(student_t_cdf(x, dof) - oracles::t_cdf_by_quadrature(x, dof)) < 1e-10);
    }
  }
}

TEST_CASE("student t cdf approaches the normal cdf for large dof") {
  // the Cornish-Fisher gap scales like 1/dof: ~2.5e-4 at dof 1000 over |x|<=3
  for (const double x : {-3.0, -2.0, -0.5, 0.5, 2.0, 3.0}) {
    CHECK(std::fabs(student_t_cdf(x, 1000.0) - normal_cdf(x)) < 2.5e-4);
    CHECK(std::fabs(student_t_cdf(x, 100000.0) - normal_cdf(x)) < 1e-4);
  }
  for (const double x : {-0.7, -0.5, 0.2, 0.7})
    CHECK(std::fabs(student_t_cdf(x, 1000.0) - normal_cdf(x)) < 1e-4);
}

TEST_CASE("student t quantile inverts the cdf") {
  for (const double dof : {1.0, 4.0, 38.0}) {
    for (const double p : {0.025, 0.2, 0.5, 0.9, 0.975}) {
      const double q = student_t_quantile(p, dof);
      CHECK(student_t_cdf(q, dof) == doctest::Approx(p).epsilon(1e-9));
    }
  }
  // classic two-sided 95% value
  CHECK(student_t_quantile(0.975, 1.0) == doctest::Approx(12.706204736).epsilon(1e-8));
}

TEST_CASE("chi squared cdf: closed form at dof 2 and quadrature elsewhere") {
  for (const double x : {0.1, 0.5, 2.0, 5.0, 12.0})
    CHECK(std::fabs(chi_squared_cdf(x, 2.0) - (1.0 - std::exp(-0.5 * x))) <= 1e-12);
  CHECK(chi_squared_cdf(2.0, 2.0) == doctest::Approx(0.6321205588285577).epsilon(1e-12));
  for (const double dof : {1.0, 3.0, 7.0})
    for (const double x : {0.5, 2.0, 9.0})
      CHECK(std::fabs(chi_squared_cdf(x, dof) - oracles::chi_squared_cdf_by_quadrature(x, dof)) <
            1e-9);
  CHECK_THROWS_AS(chi_squared_cdf(-1.0, 2.0), ParameterError);
  CHECK_THROWS_AS(chi_squared_cdf(1.0, 0.0), ParameterError);
}

TEST_CASE("cdfs are monotone with limits 0 and 1") {
  double prev_t = 0.0, prev_n = 0.0, prev_c = 0.0;
  for (double x = -40.0; x <= 40.0; x += 0.5) {
    const double tv = student_t_cdf(x, 3.0);
    const double nv = normal_cdf(x);
    CHECK(tv >= prev_t);
    CHECK(nv >= prev_n);
    prev_t = tv;
    prev_n = nv;
    if (x >= 0.0) {
      const double cv = chi_squared_cdf(x, 4.0);
      CHECK(cv >= prev_c);
      prev_c = cv;
    }
  }
  CHECK(student_t_cdf(-1e12, 2.0) < 1e-9);
  CHECK(student_t_cdf(1e12, 2.0) > 1.0 - 1e-9);
}

TEST_CASE("Welch t test: identical samples are inconclusive at p = 0.5") {
  const auto a = arr({1.0, 2.0, 3.0});
  const TestVerdict v = t_test_one_sided(a, a, 0.05);
  CHECK(v.p_a_less == 0.5);
  CHECK(v.p_b_less == 0.5);
  CHECK(v.decision == Decision::INCONCLUSIVE);
}

TEST_CASE("Welch t test: hand-computed example {1,2,3} vs {2,3,4}") {
  // means 2 and 3, both variances 1: t = -1/sqrt(2/3), Welch dof = 4.
  const TestVerdict v = t_test_one_sided(arr({1.0, 2.0, 3.0}), arr({2.0, 3.0, 4.0}), 0.05);
  const double t = -1.0 / std::sqrt(2.0 / 3.0);
  const double expected = oracles::t_cdf_by_quadrature(t, 4.0);
  CHECK(v.p_a_less == doctest::Approx(expected).epsilon(1e-10));
  CHECK(v.p_a_less == doctest::Approx(0.1438).epsilon(2e-3));
  CHECK(v.decision == Decision::INCONCLUSIVE);
  CHECK(v.p_a_less + v.p_b_less == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Welch t test: degenerate constant samples decide directly") {
  const TestVerdict v = t_test_one_sided(arr({0.0, 0.0, 0.0}), arr({1.0, 1.0, 1.0}), 0.05);
  CHECK(v.decision == Decision::A_BETTER);
  CHECK(v.p_a_less == 0.0);
  const TestVerdict w = t_test_one_sided(arr({1.0, 1.0}), arr({0.0, 0.0}), 0.05);
  CHECK(w.decision == Decision::B_BETTER);
  CHECK(w.p_b_less == 0.0);
}

TEST_CASE("Welch t test rejects undersized samples") {
  CHECK_THROWS_AS(t_test_one_sided(arr({1.0}), arr({1.0, 2.0}), 0.05), ParameterError);
  CHECK_THROWS_AS(t_test_one_sided(arr({1.0, 2.0}), arr({}), 0.05), ParameterError);
}

TEST_CASE("t test antisymmetry under sample swap") {
  RngStream rng(11, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = normal_sample(rng, 5 + static_cast<int>(rng.uniform_index(10)), 0.0, 2.0);
    const auto b = normal_sample(rng, 5 + static_cast<int>(rng.uniform_index(10)), 0.4, 1.0);
    const TestVerdict ab = t_test_one_sided(a, b, 0.05);
    const TestVerdict ba = t_test_one_sided(b, a, 0.05);
    CHECK(ab.p_a_less == doctest::Approx(ba.p_b_less).epsilon(1e-12));
    CHECK(ab.p_b_less == doctest::Approx(ba.p_a_less).epsilon(1e-12));
    if (ab.decision == Decision::A_BETTER) CHECK(ba.decision == Decision::B_BETTER);
    if (ab.decision == Decision::B_BETTER) CHECK(ba.decision == Decision::A_BETTER);
    if (ab.decision == Decision::INCONCLUSIVE) CHECK(ba.decision == Decision::INCONCLUSIVE);
  }
}

TEST_CASE("Wilcoxon exact p for disjoint 3 vs 3") {
  const TestVerdict v = wilcoxon_rank_sum(arr({1.0, 2.0, 3.0}), arr({4.0, 5.0, 6.0}), 0.05);
  CHECK(v.p_a_less == 0.05);  // 1 of C(6,3)=20 subsets has rank sum <= 6
  CHECK(v.decision == Decision::INCONCLUSIVE);  // not strictly below alpha

  const TestVerdict w = wilcoxon_rank_sum(arr({1.0, 2.0, 3.0}), arr({4.0, 5.0, 6.0}), 0.051);
  CHECK(w.decision == Decision::A_BETTER);
}

TEST_CASE("Wilcoxon on constant identical samples is inconclusive") {
  const auto a = arr({2.0, 2.0, 2.0, 2.0});
  const TestVerdict v = wilcoxon_rank_sum(a, a, 0.05);
  CHECK(v.decision == Decision::INCONCLUSIVE);
  CHECK(v.p_a_less == 0.5);
}

TEST_CASE("Wilcoxon antisymmetry and monotone-transform invariance") {
  RngStream rng(13, 2);
  for (int trial = 0; trial < 40; ++trial) {
    const int na = 3 + static_cast<int>(rng.uniform_index(15));
    const int nb = 3 + static_cast<int>(rng.uniform_index(15));
    const auto a = normal_sample(rng, na, 0.0, 1.0);
    const auto b = normal_sample(rng, nb, 0.5, 1.0);
    const TestVerdict ab = wilcoxon_rank_sum(a, b, 0.05);
    const TestVerdict ba = wilcoxon_rank_sum(b, a, 0.05);
    CHECK(ab.p_a_less == doctest::Approx(ba.p_b_less).epsilon(1e-12));
    CHECK(ab.p_b_less == doctest::Approx(ba.p_a_less).epsilon(1e-12));

    // strictly increasing transform x -> exp(x) + x leaves ranks unchanged
    const Eigen::ArrayXd ta = a.exp() + a;
    const Eigen::ArrayXd tb = b.exp() + b;
    const TestVerdict tv = wilcoxon_rank_sum(ta, tb, 0.05);
    CHECK(tv.p_a_less == doctest::Approx(ab.p_a_less).epsilon(1e-12));
    CHECK(tv.p_b_less == doctest::Approx(ab.p_b_less).epsilon(1e-12));
  }
}

TEST_CASE("Wilcoxon exact distribution on further closed-form cases") {
  // fully separated 4 vs 4: only 1 of C(8,4)=70 subsets has rank sum <= 10
  const TestVerdict v = wilcoxon_rank_sum(arr({1.0, 2.0, 3.0, 4.0}),
                                          arr({5.0, 6.0, 7.0, 8.0}), 0.05);
  CHECK(v.p_a_less == doctest::Approx(1.0 / 70.0).epsilon(1e-14));
  CHECK(v.decision == Decision::A_BETTER);

  // one inversion: {1,2,3,5} vs {4,6,7,8} has rank sum 11; 2 of 70 subsets
  // have rank sum <= 11
  const TestVerdict w = wilcoxon_rank_sum(arr({1.0, 2.0, 3.0, 5.0}),
                                          arr({4.0, 6.0, 7.0, 8.0}), 0.05);
  CHECK(w.p_a_less == doctest::Approx(2.0 / 70.0).epsilon(1e-14));
}

TEST_CASE("exact Wilcoxon p stays close to the asymptotic normal formula") {
  // 6 vs 6 tie-free: the exact DP path runs; the classic continuity-corrected
  // normal value Phi((W + 0.5 - n(N+1)/2) / sqrt(nm(N+1)/12)) should be near
  RngStream rng(99, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = normal_sample(rng, 6);
    const auto b = normal_sample(rng, 6);
    const TestVerdict exact = wilcoxon_rank_sum(a, b, 0.05);
    const double w = midranks((Eigen::ArrayXd(12) << a, b).finished()).head(6).sum();
    const double mu = 6.0 * 13.0 / 2.0;
    const double sigma = std::sqrt(36.0 * 13.0 / 12.0);
    const double asymptotic = normal_cdf((w + 0.5 - mu) / sigma);
    CHECK(std::fabs(exact.p_a_less - asymptotic) < 0.03);
  }
}

TEST_CASE("null calibration: one-sided rejection rates stay near alpha") {
  RngStream rng(4242, 0);
  int t_rejections = 0, w_rejections = 0;
  const int reps = 4000;
  for (int rep = 0; rep < reps; ++rep) {
    const auto a = normal_sample(rng, 15);
    const auto b = normal_sample(rng, 15);
    if (t_test_one_sided(a, b, 0.05).decision == Decision::A_BETTER) ++t_rejections;
    if (wilcoxon_rank_sum(a, b, 0.05).decision == Decision::A_BETTER) ++w_rejections;
  }
  CHECK(t_rejections / static_cast<double>(reps) <= 0.06);
  CHECK(w_rejections / static_cast<double>(reps) <= 0.06);
  // and the tests do reject sometimes under the null
  CHECK(t_rejections > 0);
  CHECK(w_rejections > 0);
}

TEST_CASE("Friedman: identical constant rows give statistic 0, p 1") {
  Eigen::MatrixXd blocks = Eigen::MatrixXd::Constant(5, 3, 2.5);
  const FriedmanResult r = friedman_test(blocks);
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == 1.0);
  CHECK(r.dof == 2);
  const auto survivors = friedman_eliminate(r, blocks, 0.05);
  CHECK(survivors.size() == 3);
}

TEST_CASE("Friedman: perfect ordering k=3 m=5") {
  Eigen::MatrixXd blocks(5, 3);
  for (int i = 0; i < 5; ++i) {
    blocks(i, 0) = 1.0 + i;
    blocks(i, 1) = 10.0 + i;
    blocks(i, 2) = 20.0 + i;
  }
  const FriedmanResult r = friedman_test(blocks);
  CHECK(r.statistic == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(r.dof == 2);
  CHECK(r.p_value == doctest::Approx(std::exp(-5.0)).epsilon(1e-9));  // ~0.0067
  CHECK(r.rank_sums(0) == 5.0);
  CHECK(r.rank_sums(1) == 10.0);
  CHECK(r.rank_sums(2) == 15.0);
}

TEST_CASE("Friedman rank sums total m*k(k+1)/2 with ties") {
  RngStream rng(7, 7);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + static_cast<int>(rng.uniform_index(10));
    const int k = 2 + static_cast<int>(rng.uniform_index(6));
    Eigen::MatrixXd blocks(m, k);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < k; ++j)
        blocks(i, j) = static_cast<double>(rng.uniform_index(4));  // many ties
    const FriedmanResult r = friedman_test(blocks);
    CHECK(r.rank_sums.sum() == doctest::Approx(m * k * (k + 1) / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("Friedman k=2 reduces to a sign-test-like statistic") {
  RngStream rng(17, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 3 + static_cast<int>(rng.uniform_index(20));
    Eigen::MatrixXd blocks(m, 2);
    int wins = 0;
    for (int i = 0; i < m; ++i) {
      blocks(i, 0) = rng.normal();
      blocks(i, 1) = blocks(i, 0) + (rng.uniform01() < 0.5 ? 0.5 : -0.5);
      if (blocks(i, 0) < blocks(i, 1)) ++wins;
    }
    const int losses = m - wins;
    const FriedmanResult r = friedman_test(blocks);
    const double expected =
        static_cast<double>((wins - losses) * (wins - losses)) / static_cast<double>(m);
    CHECK(r.statistic == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("Friedman statistic is invariant under per-row monotone transforms") {
  RngStream rng(23, 0);
  Eigen::MatrixXd blocks(8, 4);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 4; ++j) blocks(i, j) = rng.normal();
  const FriedmanResult base = friedman_test(blocks);
  Eigen::MatrixXd transformed = blocks;
  for (int i = 0; i < 8; ++i) {
    const double scale = 1.0 + rng.uniform01() * 3.0;  // per-row increasing map
    for (int j = 0; j < 4; ++j)
      transformed(i, j) = scale * std::exp(blocks(i, j)) + static_cast<double>(i);
  }
  const FriedmanResult t = friedman_test(transformed);
  CHECK(t.statistic == doctest::Approx(base.statistic).epsilon(1e-12));
}

TEST_CASE("Friedman elimination drops a dominated configuration") {
  RngStream rng(5, 5);
  const int m = 20, k = 3;
  Eigen::MatrixXd blocks(m, k);
  for (int i = 0; i < m; ++i) {
    blocks(i, 0) = rng.normal(0.0, 1.0);
    blocks(i, 1) = rng.normal(0.5, 1.0);
    blocks(i, 2) = rng.normal(40.0, 1.0);  // always ranked last by a wide margin
  }
  const FriedmanResult r = friedman_test(blocks);
  REQUIRE(r.p_value < 0.05);
  const auto survivors = friedman_eliminate(r, blocks, 0.05);
  bool dominated_survives = false;
  for (const auto idx : survivors)
    if (idx == 2) dominated_survives = true;
  CHECK(!dominated_survives);
  // the best (lowest rank sum) column always survives
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < k; ++j)
    if (r.rank_sums(j) < r.rank_sums(best)) best = j;
  CHECK(std::find(survivors.begin(), survivors.end(), best) != survivors.end());
}

TEST_CASE("Friedman input validation") {
  CHECK_THROWS_AS(friedman_test(Eigen::MatrixXd::Zero(1, 3)), ParameterError);
  CHECK_THROWS_AS(friedman_test(Eigen::MatrixXd::Zero(3, 1)), ParameterError);
}

TEST_CASE("midranks share averaged ranks on ties") {
  const Eigen::ArrayXd r = midranks(arr({3.0, 1.0, 3.0, 2.0}));
  CHECK(r(0) == 3.5);
  CHECK(r(1) == 1.0);
  CHECK(r(2) == 3.5);
  CHECK(r(3) == 2.0);
}
