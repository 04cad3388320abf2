#pragma once

#include <span>
#include <string>
#include <vector>

#include "latentlens/metrics.hpp"
#include "latentlens/raster.hpp"
#include "latentlens/record.hpp"

namespace latentlens::metrics {

/// Holm step-down adjustment; output in input order. Inputs must lie in [0, 1].
std::vector<double> holm_adjust(std::span<const double> pvalues);

struct PairedTTest {
  double mean_difference = 0.0;
  double t = 0.0;
  double p = 1.0;  // two-sided
  std::size_t n = 0;
};

/// Two-sided paired t-test on b - a. When every difference is identical the
/// statistic is undefined; p is then 0 for a nonzero mean difference and 1
/// for a zero one.
PairedTTest paired_t_test(std::span<const double> a, std::span<const double> b);

/// One reconstruction to score.
struct EvalPair {
  std::string id;
  Expression expression = Expression::Neutral;
  std::string method;
  Raster img;
  Raster ref;
};

struct ExpressionRow {
  Expression expression = Expression::Neutral;
  std::string method;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1)
  std::size_t n = 0;
  double p_raw = 1.0;
  double p_holm = 1.0;
};

struct ExpressionReport {
  std::string baseline_method;
  std::string test_method;
  std::vector<ExpressionRow> rows;  // per expression: baseline row, then test row
};

/// Region-masked MSE per expression and method, with a paired t-test of
/// test vs baseline per expression (pairs matched by id) and Holm
/// adjustment across expressions. Needs >= 2 pairs per expression and
/// method, and the same ids under both methods.
ExpressionReport per_expression_report(std::span<const EvalPair> pairs, const std::string& baseline_method,
                                       const std::string& test_method, const MaskSet& masks);

/// CSV: a convention comment line, then
/// expression,method,mean,std,n,p_raw,p_holm.
std::string report_csv(const ExpressionReport& report);

/// "Blink 0.01798 ± 0.00603 (baseline) vs 0.00597 ± 0.00154 (ours)".
std::string format_expression_line(const ExpressionReport& report, Expression e);

}  // namespace latentlens::metrics
