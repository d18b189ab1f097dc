#include "ce/instances.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace ce {

std::vector<Instance> build_instances(const Corpus& corpus,
                                      const std::vector<std::size_t>& doc_ids,
                                      const std::vector<NegativePair>& negatives,
                                      const TermFeatures& features,
                                      const FeaturePipeline& pipeline, const LdaModel& lda) {
  const std::size_t vocab = corpus.vocabulary.size();

  std::map<std::size_t, LocalContext> contexts;
  for (std::size_t doc_id : doc_ids) {
    contexts.emplace(doc_id, lda.infer(corpus.documents[doc_id]));
  }
  for (const NegativePair& neg : negatives) {
    if (!contexts.count(neg.doc)) contexts.emplace(neg.doc, lda.infer(corpus.documents[neg.doc]));
  }

  const auto make = [&](TermId term, std::size_t doc_id, bool positive) {
    Instance inst;
    inst.term = term;
    inst.doc = doc_id;
    inst.positive = positive;
    inst.local_context = contexts.at(doc_id);
    inst.input = pipeline.apply(features.vector_for(term));
    inst.input.insert(inst.input.end(), inst.local_context.begin(), inst.local_context.end());
    std::vector<double> b = bow(corpus.documents[doc_id], vocab);
    inst.target = to_targets(positive ? std::move(b) : bow_complement(std::move(b)));
    return inst;
  };

  std::vector<Instance> out;
  for (std::size_t doc_id : doc_ids) {
    for (TermId term : corpus.documents[doc_id].term_ids) {
      out.push_back(make(term, doc_id, true));
    }
  }
  for (const NegativePair& neg : negatives) {
    out.push_back(make(neg.term, neg.doc, false));
  }
  return out;
}

std::vector<InstancePair> make_pairs(const std::vector<Instance>& instances,
                                     std::size_t per_single_kind, double sensitivity, Rng& rng) {
  std::vector<std::size_t> positives, negatives;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    (instances[i].positive ? positives : negatives).push_back(i);
  }
  if (positives.empty() || negatives.empty()) {
    throw std::invalid_argument("cannot form pair kind");
  }

  const auto draw_distinct = [&](const std::vector<std::size_t>& pool,
                                 std::size_t& a, std::size_t& b) {
    a = pool[rng.next_below(pool.size())];
    b = pool[rng.next_below(pool.size())];
    if (pool.size() > 1) {
      while (b == a) b = pool[rng.next_below(pool.size())];
    }
  };

  const auto finish = [&](PairKind kind, std::size_t a, std::size_t b) {
    const double d = context_kl(instances[a].local_context, instances[b].local_context);
    return InstancePair{kind, a, b, d, std::exp(-0.5 * sensitivity * d)};
  };

  std::vector<InstancePair> pairs;
  pairs.reserve(4 * per_single_kind);
  for (std::size_t n = 0; n < per_single_kind; ++n) {
    std::size_t a, b;
    draw_distinct(positives, a, b);
    pairs.push_back(finish(PairKind::kPositivePositive, a, b));
  }
  for (std::size_t n = 0; n < per_single_kind; ++n) {
    std::size_t a, b;
    draw_distinct(negatives, a, b);
    pairs.push_back(finish(PairKind::kNegativeNegative, a, b));
  }
  for (std::size_t n = 0; n < 2 * per_single_kind; ++n) {
    const std::size_t a = positives[rng.next_below(positives.size())];
    const std::size_t b = negatives[rng.next_below(negatives.size())];
    pairs.push_back(finish(PairKind::kMixed, a, b));
  }
  return pairs;
}

}  // namespace ce
