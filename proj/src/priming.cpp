#include "ce/priming.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ce {

RankedList rank_from_distances(std::span<const double> distances, bool farthest_first) {
  RankedList out;
  out.order.resize(distances.size());
  std::iota(out.order.begin(), out.order.end(), TermId{0});
  std::stable_sort(out.order.begin(), out.order.end(), [&](TermId a, TermId b) {
    return farthest_first ? distances[a] > distances[b] : distances[a] < distances[b];
  });
  out.distances.resize(distances.size());
  for (std::size_t i = 0; i < out.order.size(); ++i) out.distances[i] = distances[out.order[i]];
  return out;
}

RankedList prime(const DistanceModel& model, TermId query, const Document& context) {
  if (query >= model.vocab_size()) throw std::invalid_argument("term outside vocabulary");
  const TermId queries[1] = {query};
  const Matrix distances = model.context_distances(context, queries);
  return rank_from_distances(distances.row(0), model.farthest_first());
}

RankedList extended_prime(const DistanceModel& model, const Document& context) {
  if (context.cardinality() < 2) {
    throw std::invalid_argument("extended priming needs >= 2 context terms");
  }
  const Matrix distances = model.context_distances(context, context.term_ids);
  const std::size_t vocab = model.vocab_size();
  const bool farthest = model.farthest_first();

  std::vector<double> best(vocab, farthest ? -std::numeric_limits<double>::infinity()
                                           : std::numeric_limits<double>::infinity());
  for (std::size_t q = 0; q < context.term_ids.size(); ++q) {
    const TermId member = context.term_ids[q];
    for (std::size_t t = 0; t < vocab; ++t) {
      if (TermId(t) == member) continue;  // self-distances never count
      best[t] = farthest ? std::max(best[t], distances(q, t))
                         : std::min(best[t], distances(q, t));
    }
  }
  return rank_from_distances(best, farthest);
}

CeModel::CeModel(const Network& net, const LdaModel& lda, const FeaturePipeline& pipeline,
                 const TermFeatures& features)
    : net_(&net), lda_(&lda), pipeline_(&pipeline), features_(&features) {
  if (net.input_dim() != pipeline.dimension() + lda.topic_count()) {
    throw std::invalid_argument("input dimension mismatch");
  }
}

std::vector<double> CeModel::input_for(TermId term, const LocalContext& context_topics) const {
  std::vector<double> input = pipeline_->apply(features_->vector_for(term));
  input.insert(input.end(), context_topics.begin(), context_topics.end());
  return input;
}

std::vector<double> CeModel::embed(TermId term, const Document& context) const {
  return concept_embedding(*net_, input_for(term, lda_->infer(context)));
}

Matrix CeModel::embed_all(const LocalContext& context_topics) const {
  Matrix out(vocab_size(), net_->embedding_dim());
  for (std::size_t t = 0; t < vocab_size(); ++t) {
    const std::vector<double> ce = concept_embedding(*net_, input_for(TermId(t), context_topics));
    std::copy(ce.begin(), ce.end(), out.row(t).begin());
  }
  return out;
}

Matrix CeModel::embed_all(const Document& context) const {
  return embed_all(lda_->infer(context));
}

Matrix CeModel::context_distances(const Document& context,
                                  std::span<const TermId> queries) const {
  const Matrix embeddings = embed_all(context);
  Matrix out(queries.size(), vocab_size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const auto query_ce = embeddings.row(queries[q]);
    for (std::size_t t = 0; t < vocab_size(); ++t) {
      out(q, t) = euclidean_distance(query_ce, embeddings.row(t));
    }
  }
  return out;
}

RankedList CeModel::prime_embedding(std::span<const double> embedding, const Document& context,
                                    bool farthest) const {
  const Matrix embeddings = embed_all(context);
  std::vector<double> distances(vocab_size());
  for (std::size_t t = 0; t < vocab_size(); ++t) {
    distances[t] = euclidean_distance(embedding, embeddings.row(t));
  }
  return rank_from_distances(distances, farthest);
}

}  // namespace ce
