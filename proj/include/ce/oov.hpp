#ifndef CE_OOV_HPP_
#define CE_OOV_HPP_

#include <vector>

#include "ce/corpus.hpp"
#include "ce/priming.hpp"

namespace ce {

/// A test document seen at application time: its in-vocabulary members plus a
/// flag for whether the out-of-vocabulary term occurs in it.
struct OovDocument {
  std::vector<TermId> iv_terms;
  bool contains_oov = false;
};

/// Term features for an unseen term. tfidf is recomputed over the training
/// documents plus every supplied document containing the term; aggregation
/// runs against in-vocabulary usage vectors only, so the result always has
/// one feature per vocabulary term.
std::vector<double> oov_term_features(const Corpus& corpus,
                                      const std::vector<std::size_t>& training_docs,
                                      const std::vector<OovDocument>& test_docs);

struct OovEmbedding {
  std::vector<double> embedding;
  bool farthest_first;  // rank by descending distance when set
};

/// Feature-based method: the unseen term's extended features are pushed
/// through the trained subnetwork under the in-vocabulary context. The most
/// related term is the one furthest away, so rankings must invert.
OovEmbedding oov_feature_embed(const CeModel& model, const Corpus& corpus,
                               const std::vector<std::size_t>& training_docs,
                               const std::vector<OovDocument>& test_docs,
                               const Document& iv_context);

/// Concept-based method: centroid of the contextualized embeddings of the
/// in-vocabulary context members. The unseen term's own features never enter.
std::vector<double> oov_concept_embed(const CeModel& model, const Document& iv_context);

}  // namespace ce

#endif  // CE_OOV_HPP_
