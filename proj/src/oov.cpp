#include "ce/oov.hpp"

#include <cmath>
#include <stdexcept>

namespace ce {

std::vector<double> oov_term_features(const Corpus& corpus,
                                      const std::vector<std::size_t>& training_docs,
                                      const std::vector<OovDocument>& test_docs) {
  const std::size_t vocab = corpus.vocabulary.size();

  std::vector<const OovDocument*> oov_docs;
  for (const OovDocument& doc : test_docs) {
    if (doc.contains_oov) oov_docs.push_back(&doc);
  }
  if (oov_docs.empty()) throw std::invalid_argument("OOV term unseen everywhere");

  // Document frequencies over the extended collection: training documents
  // first, then the documents containing the unseen term.
  const std::size_t n_docs = training_docs.size() + oov_docs.size();
  std::vector<std::size_t> df(vocab, 0);
  for (std::size_t doc_id : training_docs) {
    for (TermId t : corpus.documents[doc_id].term_ids) ++df[t];
  }
  for (const OovDocument* doc : oov_docs) {
    for (TermId t : doc->iv_terms) ++df[t];
  }

  std::vector<double> idf(vocab);
  for (std::size_t t = 0; t < vocab; ++t) {
    idf[t] = std::log(double(n_docs) / (1.0 + double(df[t])));
  }
  const double oov_idf = std::log(double(n_docs) / (1.0 + double(oov_docs.size())));

  // The unseen term occurs exactly in the oov documents, so its dot product
  // with an in-vocabulary usage vector only touches those rows.
  std::vector<double> features(vocab, 0.0);
  for (const OovDocument* doc : oov_docs) {
    for (TermId t : doc->iv_terms) features[t] += oov_idf * idf[t];
  }
  return features;
}

OovEmbedding oov_feature_embed(const CeModel& model, const Corpus& corpus,
                               const std::vector<std::size_t>& training_docs,
                               const std::vector<OovDocument>& test_docs,
                               const Document& iv_context) {
  if (iv_context.term_ids.empty()) throw std::invalid_argument("no in-vocabulary context");
  const std::vector<double> raw = oov_term_features(corpus, training_docs, test_docs);

  std::vector<double> input = model.pipeline().apply(raw);
  const LocalContext topics = model.lda().infer(iv_context);
  input.insert(input.end(), topics.begin(), topics.end());

  return {concept_embedding(model.network(), input), /*farthest_first=*/true};
}

std::vector<double> oov_concept_embed(const CeModel& model, const Document& iv_context) {
  if (iv_context.term_ids.empty()) throw std::invalid_argument("no in-vocabulary context");
  const LocalContext topics = model.lda().infer(iv_context);

  std::vector<double> centroid(model.network().embedding_dim(), 0.0);
  for (TermId term : iv_context.term_ids) {
    const std::vector<double> ce =
        concept_embedding(model.network(), model.input_for(term, topics));
    axpy(1.0, ce, centroid);
  }
  scale_in_place(centroid, 1.0 / double(iv_context.term_ids.size()));
  return centroid;
}

}  // namespace ce
