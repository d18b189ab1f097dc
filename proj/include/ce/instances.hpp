#ifndef CE_INSTANCES_HPP_
#define CE_INSTANCES_HPP_

#include <cstddef>
#include <vector>

#include "ce/corpus.hpp"
#include "ce/features.hpp"
#include "ce/lda.hpp"

namespace ce {

/// One training example: a focused term with the local context of a document.
/// Positive instances target the document's bag of words, synthesized
/// negatives target its complement.
struct Instance {
  TermId term = 0;
  std::size_t doc = 0;
  bool positive = true;
  std::vector<double> input;          // pipeline(term features) ++ local context
  std::vector<double> local_context;  // the topic posterior alone
  std::vector<double> target;         // entries in {-1, +1}
};

/// Expands documents into positive instances and the supplied negatives into
/// negative instances. Local contexts are inferred once per document.
std::vector<Instance> build_instances(const Corpus& corpus,
                                      const std::vector<std::size_t>& doc_ids,
                                      const std::vector<NegativePair>& negatives,
                                      const TermFeatures& features,
                                      const FeaturePipeline& pipeline, const LdaModel& lda);

enum class PairKind {
  kPositivePositive,
  kNegativeNegative,
  kMixed,
};

/// Indices of two instances plus the cached context divergence and the
/// derived target similarity exp(-lambda/2 * divergence).
struct InstancePair {
  PairKind kind;
  std::size_t first;
  std::size_t second;
  double context_divergence;  // symmetric KL of the two local contexts
  double target_similarity;   // in (0, 1]
};

/// Draws `per_single_kind` positive-positive and negative-negative pairs and
/// twice that many mixed pairs, uniformly within polarity classes.
std::vector<InstancePair> make_pairs(const std::vector<Instance>& instances,
                                     std::size_t per_single_kind, double sensitivity, Rng& rng);

}  // namespace ce

#endif  // CE_INSTANCES_HPP_
