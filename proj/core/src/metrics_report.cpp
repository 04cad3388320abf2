#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "latentlens/error.hpp"
#include "latentlens/report.hpp"

namespace latentlens::metrics {

std::vector<double> holm_adjust(std::span<const double> pvalues) {
  const std::size_t m = pvalues.size();
  for (const double p : pvalues) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InvalidArgument("p-values must lie in [0, 1]");
    }
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });
  std::vector<double> adjusted(m);
  double running = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double scaled = std::min(1.0, static_cast<double>(m - j) * pvalues[order[j]]);
    running = std::max(running, scaled);
    adjusted[order[j]] = running;
  }
  return adjusted;
}

PairedTTest paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("paired t-test needs equal-length samples");
  }
  if (a.size() < 2) {
    throw InvalidArgument("paired t-test needs at least 2 pairs");
  }
  const std::size_t n = a.size();
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) {
    diff[i] = b[i] - a[i];
  }
  PairedTTest out;
  out.n = n;
  const bool constant = std::all_of(diff.begin(), diff.end(), [&](double d) { return d == diff.front(); });
  out.mean_difference = constant ? diff.front() : std::accumulate(diff.begin(), diff.end(), 0.0) / static_cast<double>(n);
  if (constant) {
    out.t = out.mean_difference == 0.0 ? 0.0 : std::copysign(INFINITY, out.mean_difference);
    out.p = out.mean_difference == 0.0 ? 1.0 : 0.0;
    return out;
  }
  double ss = 0.0;
  for (const double d : diff) {
    ss += (d - out.mean_difference) * (d - out.mean_difference);
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  out.t = out.mean_difference / (sd / std::sqrt(static_cast<double>(n)));
  const boost::math::students_t dist(static_cast<double>(n - 1));
  out.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(out.t))));
  return out;
}

namespace {

struct Summary {
  double mean = 0.0;
  double std = 0.0;
};

Summary summarize(const std::vector<double>& values) {
  Summary s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  double ss = 0.0;
  for (const double v : values) {
    ss += (v - s.mean) * (v - s.mean);
  }
  s.std = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
  return s;
}

}  // namespace

ExpressionReport per_expression_report(std::span<const EvalPair> pairs, const std::string& baseline_method,
                                       const std::string& test_method, const MaskSet& masks) {
  // expression -> method -> id -> error
  std::map<Expression, std::map<std::string, std::map<std::string, double>>> errors;
  for (const auto& pair : pairs) {
    if (pair.method != baseline_method && pair.method != test_method) {
      continue;
    }
    const double e = masked_mse(pair.img, pair.ref, masks.for_expression(pair.expression));
    if (!errors[pair.expression][pair.method].emplace(pair.id, e).second) {
      throw InvalidArgument("duplicate pair id '" + pair.id + "' for method '" + pair.method + "'");
    }
  }
  if (errors.empty()) {
    throw InvalidArgument("no pairs for the baseline or test method");
  }

  ExpressionReport report;
  report.baseline_method = baseline_method;
  report.test_method = test_method;
  std::vector<double> p_raw;
  for (auto& [expression, by_method] : errors) {
    const auto& base = by_method[baseline_method];
    const auto& test = by_method[test_method];
    const std::string name(to_string(expression));
    if (base.size() < 2 || test.size() < 2) {
      throw InvalidArgument("expression '" + name + "' needs at least 2 pairs per method");
    }
    std::vector<double> a;
    std::vector<double> b;
    for (const auto& [id, err] : base) {
      const auto it = test.find(id);
      if (it == test.end()) {
        throw InvalidArgument("expression '" + name + "': id '" + id + "' has no " + test_method + " result");
      }
      a.push_back(err);
      b.push_back(it->second);
    }
    if (test.size() != base.size()) {
      throw InvalidArgument("expression '" + name + "': unpaired " + test_method + " results");
    }
    const auto t = paired_t_test(a, b);
    p_raw.push_back(t.p);
    const auto sa = summarize(a);
    const auto sb = summarize(b);
    report.rows.push_back({expression, baseline_method, sa.mean, sa.std, a.size(), t.p, t.p});
    if (test_method != baseline_method) {
      report.rows.push_back({expression, test_method, sb.mean, sb.std, b.size(), t.p, t.p});
    }
  }

  const auto adjusted = holm_adjust(p_raw);
  std::size_t family = 0;
  for (std::size_t r = 0; r < report.rows.size(); ++r) {
    if (r > 0 && report.rows[r].expression != report.rows[r - 1].expression) {
      ++family;
    }
    report.rows[r].p_holm = adjusted[family];
  }
  return report;
}

std::string report_csv(const ExpressionReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "# mse: mean over region pixels and channels; t-test: paired two-sided " << report.test_method << " vs "
      << report.baseline_method << "; p_holm: Holm across expressions\n";
  out << "expression,method,mean,std,n,p_raw,p_holm\n";
  for (const auto& row : report.rows) {
    out << to_string(row.expression) << ',' << row.method << ',' << row.mean << ',' << row.std << ',' << row.n << ','
        << row.p_raw << ',' << row.p_holm << '\n';
  }
  return out.str();
}

std::string format_expression_line(const ExpressionReport& report, Expression e) {
  const ExpressionRow* base = nullptr;
  const ExpressionRow* test = nullptr;
  for (const auto& row : report.rows) {
    if (row.expression != e) {
      continue;
    }
    if (row.method == report.baseline_method && base == nullptr) {
      base = &row;
    } else if (row.method == report.test_method) {
      test = &row;
    }
  }
  if (base == nullptr || test == nullptr) {
    throw InvalidArgument("report has no rows for expression '" + std::string(to_string(e)) + "'");
  }
  char buffer[256];
  std::snprintf(buffer, sizeof buffer, "%s %.5f \xC2\xB1 %.5f (%s) vs %.5f \xC2\xB1 %.5f (%s)",
                std::string(to_string(e)).c_str(), base->mean, base->std, base->method.c_str(), test->mean, test->std,
                test->method.c_str());
  return buffer;
}

}  // namespace latentlens::metrics
