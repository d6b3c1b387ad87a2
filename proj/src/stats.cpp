#include "relibench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace relibench {

namespace {

constexpr double kFpMin = 1e-300;

// Continued fraction for the regularized incomplete beta (Lentz's method).
double beta_cf(double a, double b, double x) {
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return h;
}

double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 1000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kFpMin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = b + an / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

TestVerdict make_verdict(double p_a_less, double p_b_less, double alpha) {
  TestVerdict v;
  v.p_a_less = std::clamp(p_a_less, 0.0, 1.0);
  v.p_b_less = std::clamp(p_b_less, 0.0, 1.0);
  v.alpha = alpha;
  if (v.p_a_less < alpha)
    v.decision = Decision::A_BETTER;
  else if (v.p_b_less < alpha)
    v.decision = Decision::B_BETTER;
  else
    v.decision = Decision::INCONCLUSIVE;
  return v;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw ParameterError("alpha must lie in (0, 1)");
}

// counts[s] = number of n-element subsets of {1..N} with rank sum s.
std::vector<double> rank_sum_counts(int N, int n) {
  const int max_sum = n * (2 * N - n + 1) / 2;
  std::vector<std::vector<double>> dp(
      static_cast<std::size_t>(n) + 1, std::vector<double>(static_cast<std::size_t>(max_sum) + 1, 0.0));
  dp[0][0] = 1.0;
  for (int r = 1; r <= N; ++r)
    for (int j = std::min(r, n); j >= 1; --j)
      for (int s = max_sum; s >= r; --s)
        dp[j][s] += dp[j - 1][s - r];
  return dp[static_cast<std::size_t>(n)];
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / 1.4142135623730950488016887242097); }

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0))
    throw ParameterError("regularized_incomplete_beta: a, b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double regularized_lower_gamma(double a, double x) {
  if (!(a > 0.0)) throw ParameterError("regularized_lower_gamma: a must be positive");
  if (x < 0.0) throw ParameterError("regularized_lower_gamma: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double student_t_cdf(double x, double dof) {
  if (!(dof >= 1.0)) throw ParameterError("student_t_cdf: dof must be >= 1");
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  const double ib = regularized_incomplete_beta(0.5 * dof, 0.5, dof / (dof + x * x));
  return x >= 0.0 ? 1.0 - 0.5 * ib : 0.5 * ib;
}

double student_t_quantile(double p, double dof) {
  if (!(p > 0.0) || !(p < 1.0))
    throw ParameterError("student_t_quantile: p must lie in (0, 1)");
  if (!(dof >= 1.0)) throw ParameterError("student_t_quantile: dof must be >= 1");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -student_t_quantile(1.0 - p, dof);
  double lo = 0.0, hi = 1.0;
  while (student_t_cdf(hi, dof) < p && hi < 1e300) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (student_t_cdf(mid, dof) < p)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-13 * (1.0 + std::fabs(lo))) break;
  }
  return 0.5 * (lo + hi);
}

double chi_squared_cdf(double x, double dof) {
  if (!(dof >= 1.0)) throw ParameterError("chi_squared_cdf: dof must be >= 1");
  if (x < 0.0) throw ParameterError("chi_squared_cdf: x must be >= 0");
  return regularized_lower_gamma(0.5 * dof, 0.5 * x);
}

double sample_mean(Eigen::Ref<const Eigen::ArrayXd> values) {
  if (values.size() == 0) throw ParameterError("sample_mean: empty sample");
  return values.mean();
}

double sample_variance(Eigen::Ref<const Eigen::ArrayXd> values) {
  const Eigen::Index n = values.size();
  if (n == 0) throw ParameterError("sample_variance: empty sample");
  if (n == 1) return 0.0;
  const double m = values.mean();
  return (values - m).square().sum() / static_cast<double>(n - 1);
}

TestVerdict t_test_one_sided(Eigen::Ref<const Eigen::ArrayXd> a,
                             Eigen::Ref<const Eigen::ArrayXd> b, double alpha) {
  check_alpha(alpha);
  if (a.size() < 2 || b.size() < 2)
    throw ParameterError("t_test_one_sided: both samples need >= 2 values");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = a.mean();
  const double mb = b.mean();
  const double va = sample_variance(a);
  const double vb = sample_variance(b);
  const double se2 = va / na + vb / nb;
  if (se2 == 0.0) {
    // Two constant samples: the t statistic is undefined, compare directly.
    if (ma == mb) return make_verdict(0.5, 0.5, alpha);
    return ma < mb ? make_verdict(0.0, 1.0, alpha) : make_verdict(1.0, 0.0, alpha);
  }
  const double t = (ma - mb) / std::sqrt(se2);
  const double dof = se2 * se2 /
                     ((va / na) * (va / na) / (na - 1.0) + (vb / nb) * (vb / nb) / (nb - 1.0));
  const double p_a_less = student_t_cdf(t, std::max(1.0, dof));
  return make_verdict(p_a_less, 1.0 - p_a_less, alpha);
}

Eigen::ArrayXd midranks(Eigen::Ref<const Eigen::ArrayXd> values) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index i, Eigen::Index j) { return values(i) < values(j); });
  Eigen::ArrayXd ranks(n);
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index j = i;
    while (j + 1 < n && values(order[static_cast<std::size_t>(j + 1)]) ==
                            values(order[static_cast<std::size_t>(i)]))
      ++j;
    const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
    for (Eigen::Index k = i; k <= j; ++k) ranks(order[static_cast<std::size_t>(k)]) = shared;
    i = j + 1;
  }
  return ranks;
}

TestVerdict wilcoxon_rank_sum(Eigen::Ref<const Eigen::ArrayXd> a,
                              Eigen::Ref<const Eigen::ArrayXd> b, double alpha) {
  check_alpha(alpha);
  const Eigen::Index n = a.size();
  const Eigen::Index m = b.size();
  if (n < 1 || m < 1) throw ParameterError("wilcoxon_rank_sum: empty sample");
  const Eigen::Index total = n + m;
  Eigen::ArrayXd pooled(total);
  pooled.head(n) = a;
  pooled.tail(m) = b;
  const Eigen::ArrayXd ranks = midranks(pooled);
  const double w = ranks.head(n).sum();

  // Tie census over the pooled sample.
  std::vector<double> sorted(pooled.data(), pooled.data() + total);
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0.0;
  bool has_ties = false;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i + 1);
    if (t > 1.0) {
      has_ties = true;
      tie_term += t * t * t - t;
    }
    i = j + 1;
  }

  if (total <= 12 && !has_ties) {
    const std::vector<double> counts = rank_sum_counts(static_cast<int>(total),
                                                       static_cast<int>(n));
    const double denom = std::accumulate(counts.begin(), counts.end(), 0.0);
    const int w_int = static_cast<int>(std::llround(w));
    double below = 0.0, above = 0.0;
    for (int s = 0; s < static_cast<int>(counts.size()); ++s) {
      if (s <= w_int) below += counts[static_cast<std::size_t>(s)];
      if (s >= w_int) above += counts[static_cast<std::size_t>(s)];
    }
    return make_verdict(below / denom, above / denom, alpha);
  }

  const double nn = static_cast<double>(n), mm = static_cast<double>(m);
  const double nt = static_cast<double>(total);
  const double mu = nn * (nt + 1.0) / 2.0;
  const double var =
      nn * mm / 12.0 * ((nt + 1.0) - tie_term / (nt * (nt - 1.0)));
  if (var <= 0.0) return make_verdict(0.5, 0.5, alpha);  // every value tied
  const double sigma = std::sqrt(var);
  const double p_a_less = normal_cdf((w - mu + 0.5) / sigma);
  const double p_b_less = normal_cdf((mu - w + 0.5) / sigma);
  return make_verdict(p_a_less, p_b_less, alpha);
}

FriedmanResult friedman_test(const Eigen::MatrixXd& blocks) {
  const Eigen::Index m = blocks.rows();
  const Eigen::Index k = blocks.cols();
  if (m < 2 || k < 2)
    throw ParameterError("friedman_test: need at least 2 blocks and 2 configurations");
  Eigen::ArrayXd rank_sums = Eigen::ArrayXd::Zero(k);
  for (Eigen::Index i = 0; i < m; ++i)
    rank_sums += midranks(blocks.row(i).transpose().array());
  const double md = static_cast<double>(m), kd = static_cast<double>(k);
  const Eigen::ArrayXd mean_ranks = rank_sums / md;
  const double centre = (kd + 1.0) / 2.0;
  const double statistic =
      12.0 * md / (kd * (kd + 1.0)) * (mean_ranks - centre).square().sum();
  FriedmanResult result;
  result.statistic = statistic;
  result.dof = static_cast<int>(k - 1);
  result.p_value = 1.0 - chi_squared_cdf(statistic, static_cast<double>(k - 1));
  result.rank_sums = std::move(rank_sums);
  return result;
}

std::vector<Eigen::Index> friedman_eliminate(const FriedmanResult& result,
                                             const Eigen::MatrixXd& blocks, double alpha) {
  check_alpha(alpha);
  const Eigen::Index m = blocks.rows();
  const Eigen::Index k = blocks.cols();
  if (result.rank_sums.size() != k)
    throw ParameterError("friedman_eliminate: result does not match block matrix");
  std::vector<Eigen::Index> survivors;
  if (result.p_value >= alpha) {
    survivors.resize(static_cast<std::size_t>(k));
    std::iota(survivors.begin(), survivors.end(), Eigen::Index{0});
    return survivors;
  }
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < k; ++j)
    if (result.rank_sums(j) < result.rank_sums(best)) best = j;

  const double md = static_cast<double>(m), kd = static_cast<double>(k);
  double squared_ranks = 0.0;
  for (Eigen::Index i = 0; i < m; ++i)
    squared_ranks += midranks(blocks.row(i).transpose().array()).square().sum();
  const double dispersion = squared_ranks - md * kd * (kd + 1.0) * (kd + 1.0) / 4.0;
  const double dof = (md - 1.0) * (kd - 1.0);
  const double spread =
      std::max(0.0, 2.0 * md * (1.0 - result.statistic / (md * (kd - 1.0))) * dispersion / dof);
  const double critical_difference =
      student_t_quantile(1.0 - alpha / 2.0, dof) * std::sqrt(spread);

  for (Eigen::Index j = 0; j < k; ++j)
    if (result.rank_sums(j) - result.rank_sums(best) <= critical_difference)
      survivors.push_back(j);
  return survivors;
}

}  // namespace relibench
