#ifndef CE_PRIMING_HPP_
#define CE_PRIMING_HPP_

#include <memory>
#include <span>
#include <vector>

#include "ce/corpus.hpp"
#include "ce/features.hpp"
#include "ce/lda.hpp"
#include "ce/linalg.hpp"
#include "ce/network.hpp"

namespace ce {

/// Every vocabulary term exactly once, ordered by distance to the query
/// (ascending, or descending for farthest-first models).
struct RankedList {
  std::vector<TermId> order;
  std::vector<double> distances;  // aligned with order
};

/// Anything that can measure query-to-term distances under a shared context
/// document. Rows of the returned matrix follow the query span; columns index
/// the vocabulary.
class DistanceModel {
 public:
  virtual ~DistanceModel() = default;
  virtual std::size_t vocab_size() const = 0;
  virtual Matrix context_distances(const Document& context,
                                   std::span<const TermId> queries) const = 0;
  /// When set, larger distances mean more related and rankings reverse.
  virtual bool farthest_first() const { return false; }
};

/// Ranks the whole vocabulary against one query concept. Ties break on
/// ascending term index.
RankedList prime(const DistanceModel& model, TermId query, const Document& context);

/// Document-level priming: each term is scored by its minimum distance to any
/// member of the query document other than itself.
RankedList extended_prime(const DistanceModel& model, const Document& context);

RankedList rank_from_distances(std::span<const double> distances, bool farthest_first);

/// Contextualized embeddings from a trained subnetwork: distance between two
/// terms is the Euclidean distance of their embeddings under the shared
/// context.
class CeModel : public DistanceModel {
 public:
  CeModel(const Network& net, const LdaModel& lda, const FeaturePipeline& pipeline,
          const TermFeatures& features);

  std::size_t vocab_size() const override { return features_->relatedness.rows(); }
  Matrix context_distances(const Document& context,
                           std::span<const TermId> queries) const override;

  std::vector<double> input_for(TermId term, const LocalContext& context_topics) const;
  std::vector<double> embed(TermId term, const Document& context) const;
  /// Embeddings of every vocabulary term under one shared context, row per
  /// term.
  Matrix embed_all(const Document& context) const;
  Matrix embed_all(const LocalContext& context_topics) const;

  /// Ranking against an externally produced embedding (the out-of-vocabulary
  /// path); farthest-first reverses the order.
  RankedList prime_embedding(std::span<const double> embedding, const Document& context,
                             bool farthest) const;

  const LdaModel& lda() const { return *lda_; }
  const Network& network() const { return *net_; }
  const FeaturePipeline& pipeline() const { return *pipeline_; }

 private:
  const Network* net_;
  const LdaModel* lda_;
  const FeaturePipeline* pipeline_;
  const TermFeatures* features_;
};

}  // namespace ce

#endif  // CE_PRIMING_HPP_
