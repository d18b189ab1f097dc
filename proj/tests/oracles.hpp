#ifndef CE_TESTS_ORACLES_HPP_
#define CE_TESTS_ORACLES_HPP_

#include <algorithm>
#include <set>
#include <vector>

#include "ce/corpus.hpp"
#include "ce/priming.hpp"

namespace ce::testing {

/// Brute-force retrieval metrics over a ranked order and a truth set. These
/// stay deliberately naive (full K sweeps, explicit set intersections) and
/// independent of the metrics module.
struct OracleMetrics {
  double p_at(const std::vector<TermId>& order, const std::set<TermId>& truth,
              std::size_t k) const {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < k; ++i) hits += truth.count(order[i]) > 0;
    return double(hits) / double(k);
  }

  double ap(const std::vector<TermId>& order, const std::set<TermId>& truth) const {
    double total = 0.0;
    for (std::size_t k = 1; k <= truth.size(); ++k) total += p_at(order, truth, k);
    return total / double(truth.size());
  }

  std::vector<double> eleven_point(const std::vector<TermId>& order,
                                   const std::set<TermId>& truth) const {
    std::vector<double> out(11, 0.0);
    for (int level = 0; level <= 10; ++level) {
      const double target = level / 10.0;
      double best = 0.0;
      for (std::size_t k = 1; k <= order.size(); ++k) {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < k; ++i) hits += truth.count(order[i]) > 0;
        const double recall = double(hits) / double(truth.size());
        if (recall + 1e-12 >= target) best = std::max(best, double(hits) / double(k));
      }
      out[level] = best;
    }
    return out;
  }

  double auc(const std::vector<TermId>& order, const std::set<TermId>& truth) const {
    const std::vector<double> curve = eleven_point(order, truth);
    double total = 0.0;
    for (double v : curve) total += v;
    return total / 11.0;
  }
};

/// O(|vocab| * |doc|) double loop for extended priming scores: the minimum
/// distance from each vocabulary term to any document member other than
/// itself.
inline std::vector<double> extended_prime_scores_oracle(const DistanceModel& model,
                                                        const Document& context) {
  const std::size_t vocab = model.vocab_size();
  std::vector<double> scores(vocab);
  for (std::size_t t = 0; t < vocab; ++t) {
    double best = std::numeric_limits<double>::infinity();
    for (TermId member : context.term_ids) {
      if (member == TermId(t)) continue;
      const TermId queries[1] = {member};
      best = std::min(best, model.context_distances(context, queries)(0, t));
    }
    scores[t] = best;
  }
  return scores;
}

}  // namespace ce::testing

#endif  // CE_TESTS_ORACLES_HPP_
