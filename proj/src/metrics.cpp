#include "ce/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace ce {

double p_at_k(const RankedList& list, const Document& truth, std::size_t k) {
  if (k < 1 || k > list.order.size()) throw std::invalid_argument("invalid K");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < k; ++i) hits += truth.contains(list.order[i]);
  return double(hits) / double(k);
}

double average_precision(const RankedList& list, const Document& truth) {
  const std::size_t m = truth.cardinality();
  if (m < 1) throw std::invalid_argument("empty ground truth");
  double total = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 1; k <= m; ++k) {
    hits += truth.contains(list.order[k - 1]);
    total += double(hits) / double(k);
  }
  return total / double(m);
}

PrCurve pr_curve_auc(const RankedList& list, const Document& truth) {
  const std::size_t m = truth.cardinality();
  if (m < 1) throw std::invalid_argument("empty ground truth");

  // Precision/recall after every prefix of the ranked list.
  const std::size_t n = list.order.size();
  std::vector<double> precision(n), recall(n);
  std::size_t hits = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    hits += truth.contains(list.order[k - 1]);
    precision[k - 1] = double(hits) / double(k);
    recall[k - 1] = double(hits) / double(m);
  }

  PrCurve curve{};
  double total = 0.0;
  for (std::size_t level = 0; level < kRecallLevels; ++level) {
    const double target = double(level) / 10.0;
    double best = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (recall[k] >= target - 1e-12) best = std::max(best, precision[k]);
    }
    curve.precision[level] = best;
    total += best;
  }
  curve.auc = total / double(kRecallLevels);
  return curve;
}

QueryMetrics evaluate_query(const RankedList& list, const Document& truth,
                            const std::vector<std::size_t>& k_values) {
  QueryMetrics qm;
  qm.ap = average_precision(list, truth);
  for (std::size_t k : k_values) {
    if (k >= 1 && k <= list.order.size()) qm.p_at[k] = p_at_k(list, truth, k);
  }
  qm.curve = pr_curve_auc(list, truth);
  return qm;
}

MetricsReport aggregate_metrics(const std::vector<QueryMetrics>& queries) {
  MetricsReport report;
  report.query_count = queries.size();
  if (queries.empty()) return report;

  for (const QueryMetrics& qm : queries) {
    report.map += qm.ap;
    for (const auto& [k, v] : qm.p_at) report.p_at[k] += v;
    for (std::size_t level = 0; level < kRecallLevels; ++level) {
      report.precision[level] += qm.curve.precision[level];
    }
  }
  const double n = double(queries.size());
  report.map /= n;
  for (auto& [k, v] : report.p_at) v /= n;
  double total = 0.0;
  for (double& v : report.precision) {
    v /= n;
    total += v;
  }
  report.auc = total / double(kRecallLevels);
  return report;
}

}  // namespace ce
