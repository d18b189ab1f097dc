#include "ce/lda.hpp"

#include <cmath>
#include <stdexcept>

namespace ce {

namespace {

constexpr double kSimplexFloor = 1e-6;

std::vector<double> smooth_simplex(std::span<const double> p) {
  std::vector<double> out(p.begin(), p.end());
  double total = 0.0;
  for (double& v : out) {
    if (v < kSimplexFloor) v = kSimplexFloor;
    total += v;
  }
  for (double& v : out) v /= total;
  return out;
}

}  // namespace

LdaModel::LdaModel(Matrix topic_term, std::vector<double> topic_prior, double alpha, double beta)
    : topic_term_(std::move(topic_term)),
      topic_prior_(std::move(topic_prior)),
      alpha_(alpha),
      beta_(beta) {
  if (topic_prior_.size() != topic_term_.rows()) {
    throw std::invalid_argument("topic dimension mismatch");
  }
}

LocalContext LdaModel::infer(const Document& doc, TopicInference mode) const {
  if (doc.term_ids.empty()) throw std::invalid_argument("no in-vocabulary context");
  const std::size_t k = topic_count();

  if (mode == TopicInference::kSinglePass) {
    // log-space product of per-term likelihoods under each topic.
    std::vector<double> logp(k);
    for (std::size_t c = 0; c < k; ++c) {
      double lp = std::log(topic_prior_[c]);
      for (TermId t : doc.term_ids) lp += std::log(topic_term_(c, t));
      logp[c] = lp;
    }
    double peak = logp[0];
    for (double v : logp) peak = std::max(peak, v);
    LocalContext out(k);
    double total = 0.0;
    for (std::size_t c = 0; c < k; ++c) total += out[c] = std::exp(logp[c] - peak);
    for (double& v : out) v /= total;
    return out;
  }

  // Fold-in: soft assignment of each term to topics, iterated to a fixed
  // point. Deterministic and independent of term order by construction.
  const double alpha = alpha_;
  const std::size_t m = doc.term_ids.size();
  LocalContext theta(k, 1.0 / double(k));
  std::vector<double> resp(k);
  for (int it = 0; it < 200; ++it) {
    std::vector<double> mass(k, 0.0);
    for (TermId t : doc.term_ids) {
      double total = 0.0;
      for (std::size_t c = 0; c < k; ++c) total += resp[c] = topic_term_(c, t) * theta[c];
      for (std::size_t c = 0; c < k; ++c) mass[c] += resp[c] / total;
    }
    LocalContext next(k);
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      next[c] = (mass[c] + alpha) / (double(m) + alpha * double(k));
      shift = std::max(shift, std::abs(next[c] - theta[c]));
    }
    theta = std::move(next);
    if (shift < 1e-12) break;
  }
  return theta;
}

std::vector<double> LdaModel::term_posterior(TermId term) const {
  if (term >= vocab_size()) throw std::invalid_argument("term outside vocabulary");
  std::vector<double> post(topic_count());
  double total = 0.0;
  for (std::size_t c = 0; c < topic_count(); ++c) {
    total += post[c] = topic_term_(c, term) * topic_prior_[c];
  }
  for (double& v : post) v /= total;
  return post;
}

LdaModel train_lda(const Corpus& corpus, const LdaConfig& cfg, Rng& rng,
                   const GibbsSweepObserver& observer) {
  std::vector<std::size_t> all(corpus.documents.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return train_lda(corpus, all, cfg, rng, observer);
}

LdaModel train_lda(const Corpus& corpus, const std::vector<std::size_t>& doc_ids,
                   const LdaConfig& cfg, Rng& rng, const GibbsSweepObserver& observer) {
  const std::size_t n_terms = corpus.vocabulary.size();
  const std::size_t k = cfg.topics;
  if (k < 2) throw std::invalid_argument("need at least two topics");
  if (k > n_terms) throw std::invalid_argument("more topics than terms");
  if (cfg.iterations < 1) throw std::invalid_argument("need at least one iteration");
  if (doc_ids.empty()) throw std::invalid_argument("empty corpus");

  const double alpha = cfg.resolved_alpha();
  const double beta = cfg.beta;

  struct Token {
    std::size_t doc;
    TermId term;
  };
  std::vector<Token> tokens;
  for (std::size_t d = 0; d < doc_ids.size(); ++d) {
    for (TermId t : corpus.documents[doc_ids[d]].term_ids) tokens.push_back({d, t});
  }

  // Collapsed Gibbs count tables.
  Matrix doc_topic(doc_ids.size(), k);
  Matrix topic_term(k, n_terms);
  std::vector<double> topic_total(k, 0.0);
  std::vector<std::size_t> assignment(tokens.size());

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::size_t z = rng.next_below(k);
    assignment[i] = z;
    doc_topic(tokens[i].doc, z) += 1.0;
    topic_term(z, tokens[i].term) += 1.0;
    topic_total[z] += 1.0;
  }

  std::vector<double> weight(k);
  for (int sweep = 0; sweep < cfg.iterations; ++sweep) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const auto [d, t] = tokens[i];
      const std::size_t old_z = assignment[i];
      doc_topic(d, old_z) -= 1.0;
      topic_term(old_z, t) -= 1.0;
      topic_total[old_z] -= 1.0;

      double total = 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        total += weight[c] = (doc_topic(d, c) + alpha) * (topic_term(c, t) + beta) /
                             (topic_total[c] + beta * double(n_terms));
      }
      double u = rng.uniform() * total;
      std::size_t z = k - 1;
      for (std::size_t c = 0; c < k; ++c) {
        u -= weight[c];
        if (u < 0.0) {
          z = c;
          break;
        }
      }

      assignment[i] = z;
      doc_topic(d, z) += 1.0;
      topic_term(z, t) += 1.0;
      topic_total[z] += 1.0;
    }
    if (observer) {
      long long total = 0;
      for (double v : topic_total) total += (long long)(v + 0.5);
      observer(sweep, total);
    }
  }

  Matrix phi(k, n_terms);
  for (std::size_t c = 0; c < k; ++c) {
    const double denom = topic_total[c] + beta * double(n_terms);
    for (std::size_t t = 0; t < n_terms; ++t) phi(c, t) = (topic_term(c, t) + beta) / denom;
  }
  std::vector<double> prior(k);
  const double denom = double(tokens.size()) + alpha * double(k);
  for (std::size_t c = 0; c < k; ++c) prior[c] = (topic_total[c] + alpha) / denom;

  return LdaModel(std::move(phi), std::move(prior), alpha, beta);
}

double context_kl(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("topic dimension mismatch");
  const std::vector<double> p = smooth_simplex(a);
  const std::vector<double> q = smooth_simplex(b);
  double total = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) {
    total += (p[c] - q[c]) * std::log(p[c] / q[c]);
  }
  return total;
}

double topic_kl_relatedness(const LdaModel& model, TermId t1, TermId t2,
                            std::span<const double> doc_topics) {
  if (doc_topics.size() != model.topic_count()) {
    throw std::invalid_argument("topic dimension mismatch");
  }
  if (t1 >= model.vocab_size() || t2 >= model.vocab_size()) {
    throw std::invalid_argument("term outside vocabulary");
  }
  // Equal term priors: p(term) = 1 / |vocabulary|.
  const double term_prior = 1.0 / double(model.vocab_size());
  const std::vector<double> theta = smooth_simplex(doc_topics);
  double total = 0.0;
  for (std::size_t c = 0; c < model.topic_count(); ++c) {
    const double p1 = model.topic_term()(c, t1);
    const double p2 = model.topic_term()(c, t2);
    total += theta[c] / term_prior * (p1 - p2) * std::log(p1 / p2);
  }
  return total;
}

}  // namespace ce
