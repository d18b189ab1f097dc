#ifndef CE_METRICS_HPP_
#define CE_METRICS_HPP_

#include <array>
#include <map>
#include <vector>

#include "ce/corpus.hpp"
#include "ce/priming.hpp"

namespace ce {

inline constexpr std::size_t kRecallLevels = 11;  // 0.0, 0.1, ..., 1.0

/// Fraction of the top K ranked terms that belong to the ground truth.
double p_at_k(const RankedList& list, const Document& truth, std::size_t k);

/// Mean of P@K over K = 1..|truth|.
double average_precision(const RankedList& list, const Document& truth);

struct PrCurve {
  std::array<double, kRecallLevels> precision;  // interpolated, per recall level
  double auc;                                   // mean of the 11 precisions
};

/// Interpolated precision at the 11 standard recall levels: at level l, the
/// maximum P@K over all K whose recall reaches l.
PrCurve pr_curve_auc(const RankedList& list, const Document& truth);

struct QueryMetrics {
  double ap;
  std::map<std::size_t, double> p_at;  // requested K values
  PrCurve curve;
};

QueryMetrics evaluate_query(const RankedList& list, const Document& truth,
                            const std::vector<std::size_t>& k_values);

/// Per-level means over a query set plus MAP and mean P@K.
struct MetricsReport {
  std::size_t query_count = 0;
  double map = 0.0;
  std::map<std::size_t, double> p_at;
  std::array<double, kRecallLevels> precision{};  // dataset-level curve
  double auc = 0.0;
};

MetricsReport aggregate_metrics(const std::vector<QueryMetrics>& queries);

}  // namespace ce

#endif  // CE_METRICS_HPP_
