#ifndef CE_BASELINES_HPP_
#define CE_BASELINES_HPP_

#include <vector>

#include "ce/features.hpp"
#include "ce/lda.hpp"
#include "ce/priming.hpp"

namespace ce {

/// Context-free per-term vectors ranked by cosine distance.
struct EmbeddingTable {
  Matrix vectors;  // one row per vocabulary term

  bool operator==(const EmbeddingTable&) const = default;
};

/// Truncated SVD of the tfidf document-term matrix. Keeps the smallest number
/// of components whose squared singular values cover `pov_threshold` of the
/// variance; term vectors are the term-side singular vectors, scaled by the
/// retained singular values unless `scale_by_singular_values` is cleared.
EmbeddingTable lsa_train(const UsageMatrix& um, double pov_threshold,
                         bool scale_by_singular_values = true);

/// tfidf aggregation followed by a principal-component reduction of the
/// term-to-term relatedness rows.
EmbeddingTable pca_baseline_train(const UsageMatrix& um, std::size_t dimensions);

/// Cosine distance (1 - cosine similarity); zero-norm vectors sit at the
/// maximal distance 1 from everything.
double cosine_distance(std::span<const double> a, std::span<const double> b);

RankedList cosine_rank(const EmbeddingTable& table, TermId query);

/// Uniformly random permutation of the vocabulary.
RankedList random_rank(std::size_t vocab_size, Rng& rng);

/// Adapts an embedding table to the priming protocols; the context document
/// is ignored (a context-free model).
class TableModel : public DistanceModel {
 public:
  explicit TableModel(const EmbeddingTable& table) : table_(&table) {}
  std::size_t vocab_size() const override { return table_->vectors.rows(); }
  Matrix context_distances(const Document& context,
                           std::span<const TermId> queries) const override;

 private:
  const EmbeddingTable* table_;
};

/// Topic-model baseline: term-to-term relatedness under the document's topic
/// distribution.
class LdaKlModel : public DistanceModel {
 public:
  explicit LdaKlModel(const LdaModel& lda) : lda_(&lda) {}
  std::size_t vocab_size() const override { return lda_->vocab_size(); }
  Matrix context_distances(const Document& context,
                           std::span<const TermId> queries) const override;

 private:
  const LdaModel* lda_;
};

}  // namespace ce

#endif  // CE_BASELINES_HPP_
