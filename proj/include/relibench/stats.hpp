#pragma once

#include <Eigen/Core>

#include <vector>

#include "relibench/errors.hpp"

namespace relibench {

// --- special functions -------------------------------------------------

double normal_cdf(double x);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

// Regularized lower incomplete gamma P(a, x).
double regularized_lower_gamma(double a, double x);

// CDF of Student's t with dof >= 1 (dof may be fractional, as produced by
// the Welch-Satterthwaite approximation).
double student_t_cdf(double x, double dof);

// Inverse of student_t_cdf in x for fixed dof; p in (0, 1).
double student_t_quantile(double p, double dof);

// CDF of the chi-squared distribution, x >= 0, dof >= 1.
double chi_squared_cdf(double x, double dof);

// --- sample helpers -----------------------------------------------------

double sample_mean(Eigen::Ref<const Eigen::ArrayXd> values);

// Unbiased (n-1 divisor) sample variance; 0 for a single value.
double sample_variance(Eigen::Ref<const Eigen::ArrayXd> values);

// --- pairwise comparisons -----------------------------------------------

enum class Decision { A_BETTER, B_BETTER, INCONCLUSIVE };

// Outcome of a pair of one-sided comparisons at level alpha. p_a_less is the
// p-value against the null "mean/location of A is >= that of B" (small means
// A is credibly lower, i.e. better when minimizing).
struct TestVerdict {
  double p_a_less = 0.5;
  double p_b_less = 0.5;
  Decision decision = Decision::INCONCLUSIVE;
  double alpha = 0.05;
};

// Unpaired Welch two-sample t test, both one-sided p-values. Samples of
// size >= 2. Zero-variance degenerate inputs fall back to direct value
// comparison: identical constants give INCONCLUSIVE at p = 0.5, distinct
// constants decide at p = 0.
TestVerdict t_test_one_sided(Eigen::Ref<const Eigen::ArrayXd> a,
                             Eigen::Ref<const Eigen::ArrayXd> b, double alpha);

// Wilcoxon rank-sum with midrank ties. Exact null distribution when
// |a| + |b| <= 12 and the pooled sample is tie-free, otherwise normal
// approximation with tie and continuity corrections.
TestVerdict wilcoxon_rank_sum(Eigen::Ref<const Eigen::ArrayXd> a,
                              Eigen::Ref<const Eigen::ArrayXd> b, double alpha);

// --- Friedman test and race elimination ----------------------------------

struct FriedmanResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  Eigen::ArrayXd rank_sums;  // one per column of the block matrix
};

// Friedman rank test over an m x k block matrix (rows are blocks, columns
// are configurations, m >= 2, k >= 2). Ties within a row share midranks.
FriedmanResult friedman_test(const Eigen::MatrixXd& blocks);

// Racing-style post-hoc elimination: if the Friedman test does not reject at
// alpha, every column survives; otherwise a column is dropped when its rank
// sum exceeds that of the best column by more than the critical difference
// (t statistic on rank sums with (m-1)(k-1) degrees of freedom). The best
// column always survives. Returns surviving column indices in order.
std::vector<Eigen::Index> friedman_eliminate(const FriedmanResult& result,
                                             const Eigen::MatrixXd& blocks, double alpha);

// Midranks of one row of values (average rank for ties, ranks start at 1).
Eigen::ArrayXd midranks(Eigen::Ref<const Eigen::ArrayXd> values);

}  // namespace relibench
