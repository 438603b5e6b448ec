#pragma once

#include <span>
#include <utility>

namespace dqest {

struct TestResult {
  double statistic = 0.0;
  double degreesOfFreedom = 0.0;
  double pValue = 1.0;
};

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

/// Student-t cumulative distribution function.
double t_cdf(double x, double df);

/// Inverse of t_cdf for 0 < p < 1 (bracketing bisection).
double t_quantile(double p, double df);

double sample_mean(std::span<const double> values);
/// Sample variance with the n - 1 divisor.
double sample_variance(std::span<const double> values);

/// Welch test of H0: mean(a) - mean(b) <= d against H1: mean(a) - mean(b) > d.
/// With zero variance in both samples the p-value is 0, 0.5 or 1 depending on
/// whether the observed gap exceeds, equals or falls short of d.
TestResult shifted_one_tailed_test(std::span<const double> a, std::span<const double> b, double d);

/// Two-sided paired t-test of mean(a - b) = 0.
TestResult paired_t_test(std::span<const double> a, std::span<const double> b);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

/// mean +/- t_quantile(1 - alpha / 2, n - 1) * s / sqrt(n).
Interval mean_ci(std::span<const double> values, double alpha);

}  // namespace dqest
