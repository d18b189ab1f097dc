#ifndef CE_LDA_HPP_
#define CE_LDA_HPP_

#include <functional>
#include <span>
#include <vector>

#include "ce/corpus.hpp"
#include "ce/linalg.hpp"

namespace ce {

/// Normalized topic posterior of a whole document; every term in the document
/// shares this local-context vector.
using LocalContext = std::vector<double>;

struct LdaConfig {
  std::size_t topics = 20;
  int iterations = 300;
  double alpha = -1.0;  // document-topic prior; < 0 means 50/topics
  double beta = 0.01;   // topic-term prior
  int fold_in_iterations = 64;

  double resolved_alpha() const { return alpha >= 0.0 ? alpha : 50.0 / double(topics); }
};

enum class TopicInference {
  kFoldIn,      // iterated responsibility updates against the trained topics
  kSinglePass,  // p(phi|doc) ~ p(phi) * prod_t p(t|phi), normalized once
};

class LdaModel {
 public:
  LdaModel() = default;
  LdaModel(Matrix topic_term, std::vector<double> topic_prior, double alpha, double beta);

  std::size_t topic_count() const { return topic_term_.rows(); }
  std::size_t vocab_size() const { return topic_term_.cols(); }

  /// p(term | topic c) as row c.
  const Matrix& topic_term() const { return topic_term_; }
  /// Marginal p(topic c).
  const std::vector<double>& topic_prior() const { return topic_prior_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  LocalContext infer(const Document& doc, TopicInference mode = TopicInference::kFoldIn) const;

  /// p(topic | term), proportional to p(term|topic) p(topic).
  std::vector<double> term_posterior(TermId term) const;

  bool operator==(const LdaModel&) const = default;

 private:
  Matrix topic_term_;
  std::vector<double> topic_prior_;
  double alpha_ = 0.0;
  double beta_ = 0.0;
};

/// Called after every Gibbs sweep with the token total recomputed from the
/// count tables; the total must never drift.
using GibbsSweepObserver = std::function<void(int sweep, long long token_total)>;

LdaModel train_lda(const Corpus& corpus, const std::vector<std::size_t>& doc_ids,
                   const LdaConfig& cfg, Rng& rng, const GibbsSweepObserver& observer = {});
LdaModel train_lda(const Corpus& corpus, const LdaConfig& cfg, Rng& rng,
                   const GibbsSweepObserver& observer = {});

/// Symmetric KL divergence between two context distributions. Inputs are
/// floored at 1e-6 and renormalized first, so zeros cannot reach the logs.
double context_kl(std::span<const double> a, std::span<const double> b);

/// Topic-conditioned term relatedness under a document's topic distribution,
/// assuming equal term priors. Nonnegative; zero for identical terms.
double topic_kl_relatedness(const LdaModel& model, TermId t1, TermId t2,
                            std::span<const double> doc_topics);

}  // namespace ce

#endif  // CE_LDA_HPP_
