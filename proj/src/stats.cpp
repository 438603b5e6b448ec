#include "dqest/stats.hpp"
#include "dqest/core.hpp"

#include <algorithm>
#include <cmath>
#include <vector>
#include <limits>

namespace dqest {
namespace {

// Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 20000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) return h;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw ValidationError("incomplete_beta: a and b must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("incomplete_beta: x must lie in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double logFront = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(logFront);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double t_cdf(double x, double df) {
  if (!(df > 0.0)) throw ValidationError("t_cdf: degrees of freedom must be positive");
  if (std::isnan(x)) throw ValidationError("t_cdf: x is NaN");
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  if (x == 0.0) return 0.5;
  const double x2 = x * x;
  double tail;  // P(T > |x|)
  if (x2 < df) {
    // Central region: P(|T| < |x|) = I_{x^2/(df+x^2)}(1/2, df/2).
    tail = 0.5 * (1.0 - incomplete_beta(0.5, 0.5 * df, x2 / (df + x2)));
  } else {
    tail = 0.5 * incomplete_beta(0.5 * df, 0.5, df / (df + x2));
  }
  return x > 0 ? 1.0 - tail : tail;
}

double t_quantile(double p, double df) {
  if (!(df > 0.0)) throw ValidationError("t_quantile: degrees of freedom must be positive");
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("t_quantile: p must lie strictly inside (0, 1)");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -t_quantile(1.0 - p, df);
  double lo = 0.0, hi = 1.0;
  while (t_cdf(hi, df) < p) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) return std::numeric_limits<double>::infinity();
  }
  for (int i = 0; i < 400 && hi - lo > 1e-14 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (t_cdf(mid, df) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double sample_mean(std::span<const double> values) {
  if (values.empty()) throw ValidationError("sample_mean: empty sample");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) throw ValidationError("sample_variance: need at least 2 values");
  const double mean = sample_mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(values.size() - 1);
}

TestResult shifted_one_tailed_test(std::span<const double> a, std::span<const double> b, double d) {
  if (a.size() < 2 || b.size() < 2) throw ValidationError("shifted_one_tailed_test: each sample needs >= 2 values");
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double ea = sample_variance(a) / na, eb = sample_variance(b) / nb;
  const double gap = sample_mean(a) - sample_mean(b) - d;
  const double se2 = ea + eb;
  TestResult r;
  if (se2 <= 0.0) {
    r.statistic = gap > 0 ? std::numeric_limits<double>::infinity() : gap < 0 ? -std::numeric_limits<double>::infinity() : 0.0;
    r.degreesOfFreedom = na + nb - 2.0;
    r.pValue = gap > 0 ? 0.0 : gap < 0 ? 1.0 : 0.5;
    return r;
  }
  r.statistic = gap / std::sqrt(se2);
  r.degreesOfFreedom = se2 * se2 / (ea * ea / (na - 1.0) + eb * eb / (nb - 1.0));
  r.pValue = std::clamp(t_cdf(-r.statistic, r.degreesOfFreedom), 0.0, 1.0);
  return r;
}

TestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("paired_t_test: samples differ in length");
  if (a.size() < 2) throw ValidationError("paired_t_test: need at least 2 pairs");
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  const double n = static_cast<double>(diff.size());
  const double mean = sample_mean(diff);
  const double var = sample_variance(diff);
  TestResult r;
  r.degreesOfFreedom = n - 1.0;
  if (var <= 0.0) {
    r.statistic = mean == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), mean);
    r.pValue = mean == 0.0 ? 1.0 : 0.0;
    return r;
  }
  r.statistic = mean / std::sqrt(var / n);
  r.pValue = std::clamp(2.0 * t_cdf(-std::fabs(r.statistic), r.degreesOfFreedom), 0.0, 1.0);
  return r;
}

Interval mean_ci(std::span<const double> values, double alpha) {
  if (values.size() < 2) throw ValidationError("mean_ci: need at least 2 values");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("mean_ci: alpha must lie in (0, 1)");
  const double n = static_cast<double>(values.size());
  const double mean = sample_mean(values);
  const double half = t_quantile(1.0 - alpha / 2.0, n - 1.0) * std::sqrt(sample_variance(values)) / std::sqrt(n);
  return {mean - half, mean + half};
}

}  // namespace dqest
