#pragma once

#include <span>

namespace adrnet::metrics {

// Area under the ROC curve as the Mann-Whitney statistic: the fraction of
// (positive, negative) pairs ranked correctly, ties counting one half.
// O(n log n) via midranks. Labels are 0/1. Throws MetricUndefinedError when
// either class is absent.
double auc(std::span<const double> scores, std::span<const double> labels);

// Step-wise average precision: sum over retrieved positives of
// (R_k - R_{k-1}) * P_k, scanning scores in descending order. Equal scores
// are broken by original index, ascending. Throws MetricUndefinedError
// without positives.
double aupr(std::span<const double> scores, std::span<const double> labels);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;  // two-sided
  double df = 0.0;
};

// Paired two-sided t-test on d = a - b with df = n - 1. If every difference is
// equal: t = 0, p = 1 when that difference is zero, DegenerateVarianceError
// otherwise.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

// Regularized incomplete beta I_x(a, b), by continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

// P(|T| > |t|) for Student's t with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

double mean(std::span<const double> v);
// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_sd(std::span<const double> v);

}  // namespace adrnet::metrics
