#include <doctest.h>

#include <algorithm>
#include <set>

#include "ce/metrics.hpp"
#include "ce/priming.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace ce;

namespace {

/// Context-free stub with hand-placed embedding points and Euclidean
/// distances.
class FixedModel : public DistanceModel {
 public:
  explicit FixedModel(Matrix points) : points_(std::move(points)) {}
  std::size_t vocab_size() const override { return points_.rows(); }
  Matrix context_distances(const Document&, std::span<const TermId> queries) const override {
    Matrix out(queries.size(), points_.rows());
    for (std::size_t q = 0; q < queries.size(); ++q) {
      for (std::size_t t = 0; t < points_.rows(); ++t) {
        out(q, t) = euclidean_distance(points_.row(queries[q]), points_.row(t));
      }
    }
    return out;
  }

 private:
  Matrix points_;
};

Matrix random_points(std::size_t n, std::size_t dim, Rng& rng) {
  Matrix points(n, dim);
  for (double& v : points.flat()) v = rng.uniform(-2.0, 2.0);
  return points;
}

RankedList list_of(std::vector<TermId> order) {
  RankedList list;
  list.distances.assign(order.size(), 0.0);
  list.order = std::move(order);
  return list;
}

}  // namespace

TEST_SUITE("priming") {

TEST_CASE("priming ranks by distance with the query first") {
  Rng rng(3);
  const Matrix points = random_points(5, 3, rng);
  const FixedModel model(points);
  const Document context{{0, 1}};

  for (TermId query = 0; query < 5; ++query) {
    const RankedList list = prime(model, query, context);
    CHECK(list.order.size() == 5);
    CHECK(list.order.front() == query);  // self-distance zero
    CHECK(list.distances.front() == 0.0);
    for (std::size_t i = 1; i < list.distances.size(); ++i) {
      CHECK(list.distances[i] >= list.distances[i - 1]);
    }
    std::set<TermId> seen(list.order.begin(), list.order.end());
    CHECK(seen.size() == 5);

    // Brute-force sort oracle.
    std::vector<std::pair<double, TermId>> expected;
    for (TermId t = 0; t < 5; ++t) {
      expected.push_back({euclidean_distance(points.row(query), points.row(t)), t});
    }
    std::stable_sort(expected.begin(), expected.end());
    for (std::size_t i = 0; i < 5; ++i) CHECK(list.order[i] == expected[i].second);
  }
}

TEST_CASE("extended priming equals the double-loop oracle") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t vocab = 4 + rng.next_below(8);
    const Matrix points = random_points(vocab, 3, rng);
    const FixedModel model(points);

    std::vector<TermId> members;
    for (TermId t = 0; t < vocab; ++t) {
      if (rng.next_below(2)) members.push_back(t);
    }
    while (members.size() < 2) members.push_back(TermId(members.size()));
    const Document context = make_document(members);

    const RankedList list = extended_prime(model, context);
    const auto oracle = ce::testing::extended_prime_scores_oracle(model, context);
    const RankedList expected = rank_from_distances(oracle, false);
    CHECK(list.order == expected.order);
    for (std::size_t i = 0; i < list.distances.size(); ++i) {
      CHECK(list.distances[i] == expected.distances[i]);
    }
  }

  const FixedModel model(random_points(4, 2, rng));
  CHECK_THROWS_WITH_AS(extended_prime(model, Document{{2}}),
                       "extended priming needs >= 2 context terms", std::invalid_argument);
}

TEST_CASE("members are never scored against themselves") {
  // Two far groups; term 0 and 1 coincide, term 2 sits alone far away.
  Matrix points(3, 1);
  points(0, 0) = 0.0;
  points(1, 0) = 0.0;
  points(2, 0) = 100.0;
  const FixedModel model(points);
  const RankedList list = extended_prime(model, Document{{0, 2}});
  // Term 0's own distance (zero) is excluded; it is scored against term 2.
  const std::size_t pos0 = std::find(list.order.begin(), list.order.end(), 0) - list.order.begin();
  CHECK(list.distances[pos0] == doctest::Approx(100.0));
  // Term 1 coincides with member 0, so its score is zero and it ranks first.
  CHECK(list.order.front() == 1);
}

TEST_CASE("precision at K matches the worked examples") {
  const RankedList list = list_of({0, 1, 2});
  const Document truth{{0, 2}};
  CHECK(p_at_k(list, truth, 1) == doctest::Approx(1.0));
  CHECK(p_at_k(list, truth, 2) == doctest::Approx(0.5));
  CHECK(p_at_k(list, truth, 3) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_WITH_AS(p_at_k(list, truth, 0), "invalid K", std::invalid_argument);
  CHECK_THROWS_WITH_AS(p_at_k(list, truth, 4), "invalid K", std::invalid_argument);

  const RankedList miss = list_of({1, 0, 2});
  CHECK(p_at_k(miss, Document{{2}}, 1) == 0.0);
}

TEST_CASE("average precision adapts to the truth size") {
  const RankedList perfect = list_of({3, 1, 0, 2});
  CHECK(average_precision(perfect, Document{{1, 3}}) == doctest::Approx(1.0));

  // First hit at rank one, second truth term never in the top two.
  const RankedList partial = list_of({0, 2, 1, 3});
  CHECK(average_precision(partial, Document{{0, 1}}) == doctest::Approx(0.75));

  const RankedList worst = list_of({2, 3, 0, 1});
  CHECK(average_precision(worst, Document{{0, 1}}) == doctest::Approx(0.0));
}

TEST_CASE("eleven-point curve and area") {
  const RankedList perfect = list_of({0, 1, 2, 3, 4});
  const PrCurve ideal = pr_curve_auc(perfect, Document{{0, 1}});
  for (double v : ideal.precision) CHECK(v == doctest::Approx(1.0));
  CHECK(ideal.auc == doctest::Approx(1.0));

  // Ten terms, both truths dead last (ranks 9 and 10).
  const RankedList tail = list_of({2, 3, 4, 5, 6, 7, 8, 9, 0, 1});
  const PrCurve curve = pr_curve_auc(tail, Document{{0, 1}});
  CHECK(curve.precision[10] == doctest::Approx(0.2));
  for (std::size_t level = 1; level < kRecallLevels; ++level) {
    CHECK(curve.precision[level] <= curve.precision[level - 1] + 1e-15);
  }
}

TEST_CASE("metrics agree exactly with the brute-force oracle") {
  Rng rng(71);
  const ce::testing::OracleMetrics oracle;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t vocab = 3 + rng.next_below(10);  // up to 12
    std::vector<TermId> order(vocab);
    for (std::size_t i = 0; i < vocab; ++i) order[i] = TermId(i);
    rng.shuffle(order);

    std::set<TermId> truth_set;
    const std::size_t truth_size = 1 + rng.next_below(vocab);
    while (truth_set.size() < truth_size) truth_set.insert(TermId(rng.next_below(vocab)));
    const Document truth = make_document({truth_set.begin(), truth_set.end()});

    const RankedList list = list_of(order);
    for (std::size_t k = 1; k <= vocab; ++k) {
      CHECK(p_at_k(list, truth, k) == doctest::Approx(oracle.p_at(order, truth_set, k)).epsilon(1e-12));
    }
    CHECK(average_precision(list, truth) ==
          doctest::Approx(oracle.ap(order, truth_set)).epsilon(1e-12));
    const PrCurve curve = pr_curve_auc(list, truth);
    const auto expected = oracle.eleven_point(order, truth_set);
    for (std::size_t level = 0; level < kRecallLevels; ++level) {
      CHECK(curve.precision[level] == doctest::Approx(expected[level]).epsilon(1e-12));
    }
    CHECK(curve.auc == doctest::Approx(oracle.auc(order, truth_set)).epsilon(1e-12));
  }
}

TEST_CASE("aggregation averages per level and per query") {
  const RankedList perfect = list_of({0, 1, 2, 3});
  const RankedList worst = list_of({2, 3, 0, 1});
  const Document truth{{0, 1}};
  const std::vector<std::size_t> ks = {1, 2};
  const std::vector<QueryMetrics> queries = {evaluate_query(perfect, truth, ks),
                                             evaluate_query(worst, truth, ks)};
  const MetricsReport report = aggregate_metrics(queries);
  CHECK(report.query_count == 2);
  CHECK(report.map == doctest::Approx(0.5));
  CHECK(report.p_at.at(1) == doctest::Approx(0.5));
  CHECK(report.auc >= 0.0);
  CHECK(report.auc <= 1.0);
}

}  // TEST_SUITE
