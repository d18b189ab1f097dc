#include <doctest.h>

#include <cmath>
#include <set>

#include "ce/lda.hpp"
#include "helpers.hpp"

using namespace ce;

namespace {

SyntheticCorpus planted_two_topic(std::uint64_t seed, std::size_t docs = 200) {
  Rng rng(seed);
  return generate_synthetic_corpus(
      {.topics = 2, .vocab_size = 24, .documents = docs, .min_cardinality = 3,
       .max_cardinality = 6},
      rng);
}

double planted_purity(const LdaModel& model, const SyntheticCorpus& synthetic) {
  // Cluster documents by their argmax topic, then count the best matching
  // planted label per cluster.
  const std::size_t k = model.topic_count();
  std::vector<std::vector<std::size_t>> per_cluster(k);
  for (std::size_t d = 0; d < synthetic.corpus.documents.size(); ++d) {
    const LocalContext theta = model.infer(synthetic.corpus.documents[d]);
    std::size_t best = 0;
    for (std::size_t c = 1; c < k; ++c) {
      if (theta[c] > theta[best]) best = c;
    }
    per_cluster[best].push_back(synthetic.doc_topics[d]);
  }
  std::size_t agreement = 0;
  for (const auto& cluster : per_cluster) {
    std::size_t zeros = 0;
    for (std::size_t label : cluster) zeros += label == 0;
    agreement += std::max(zeros, cluster.size() - zeros);
  }
  return double(agreement) / double(synthetic.corpus.documents.size());
}

}  // namespace

TEST_SUITE("topics") {

TEST_CASE("gibbs training recovers planted topics") {
  const SyntheticCorpus synthetic = planted_two_topic(17);
  Rng rng(4);
  const LdaModel model =
      train_lda(synthetic.corpus, {.topics = 2, .iterations = 150, .alpha = 0.5}, rng);
  CHECK(planted_purity(model, synthetic) > 0.9);
}

TEST_CASE("distributions normalize and training is reproducible") {
  const SyntheticCorpus synthetic = planted_two_topic(23, 60);
  const LdaConfig cfg{.topics = 3, .iterations = 60};
  Rng rng_a(9), rng_b(9);
  const LdaModel a = train_lda(synthetic.corpus, cfg, rng_a);
  const LdaModel b = train_lda(synthetic.corpus, cfg, rng_b);
  CHECK(a == b);

  for (std::size_t c = 0; c < a.topic_count(); ++c) {
    double total = 0.0;
    for (std::size_t t = 0; t < a.vocab_size(); ++t) total += a.topic_term()(c, t);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
  double prior_total = 0.0;
  for (double v : a.topic_prior()) prior_total += v;
  CHECK(prior_total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gibbs sweeps conserve the token count") {
  const SyntheticCorpus synthetic = planted_two_topic(31, 50);
  long long expected = 0;
  for (const Document& doc : synthetic.corpus.documents) expected += (long long)doc.cardinality();

  Rng rng(2);
  int sweeps = 0;
  train_lda(synthetic.corpus, {.topics = 2, .iterations = 25}, rng,
            [&](int, long long total) {
              CHECK(total == expected);
              ++sweeps;
            });
  CHECK(sweeps == 25);
}

TEST_CASE("inference concentrates on the planted topic") {
  const SyntheticCorpus synthetic = planted_two_topic(29);
  Rng rng(12);
  const LdaModel model =
      train_lda(synthetic.corpus, {.topics = 2, .iterations = 150, .alpha = 0.5}, rng);

  // A document drawn purely from one support should land on one topic.
  const std::size_t doc_id = 0;
  const LocalContext theta = model.infer(synthetic.corpus.documents[doc_id]);
  double total = 0.0, peak = 0.0;
  for (double v : theta) {
    total += v;
    peak = std::max(peak, v);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(peak > 0.9);

  // Term order cannot matter: documents are sets.
  Document reversed = synthetic.corpus.documents[doc_id];
  std::reverse(reversed.term_ids.begin(), reversed.term_ids.end());
  const Document reordered = make_document(reversed.term_ids);
  CHECK(model.infer(reordered) == theta);

  const LocalContext single_pass =
      model.infer(synthetic.corpus.documents[doc_id], TopicInference::kSinglePass);
  double sp_total = 0.0;
  for (double v : single_pass) sp_total += v;
  CHECK(sp_total == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_WITH_AS(model.infer(Document{}), "no in-vocabulary context",
                       std::invalid_argument);
}

TEST_CASE("training validates its inputs") {
  const Corpus corpus = ce::testing::corpus_from_text("a\tb\nb\tc\n");
  Rng rng(1);
  CHECK_THROWS_WITH_AS(train_lda(corpus, {.topics = 4}, rng), "more topics than terms",
                       std::invalid_argument);
}

TEST_CASE("context divergence matches a hand summation") {
  const std::vector<double> l1 = {0.8, 0.2};
  const std::vector<double> l2 = {0.2, 0.8};
  CHECK(context_kl(l1, l1) == 0.0);
  // 0.6*ln4 + 0.6*ln4
  CHECK(context_kl(l1, l2) == doctest::Approx(1.2 * std::log(4.0)).epsilon(1e-4));
  CHECK(context_kl(l1, l2) == doctest::Approx(1.6636).epsilon(1e-3));
  CHECK(context_kl(l1, l2) == context_kl(l2, l1));

  const std::vector<double> l3 = {0.5, 0.5, 0.0};
  CHECK_THROWS_WITH_AS(context_kl(l1, l3), "topic dimension mismatch", std::invalid_argument);
}

TEST_CASE("context divergence is nonnegative and zero only at equality") {
  Rng rng(44);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 2 + rng.next_below(5);
    std::vector<double> a(k), b(k);
    double ta = 0.0, tb = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      ta += a[i] = rng.uniform() + 1e-9;
      tb += b[i] = rng.uniform() + 1e-9;
    }
    for (std::size_t i = 0; i < k; ++i) {
      a[i] /= ta;
      b[i] /= tb;
    }
    const double d = context_kl(a, b);
    CHECK(d >= 0.0);
    CHECK(context_kl(a, a) == 0.0);
    CHECK(context_kl(a, b) == doctest::Approx(context_kl(b, a)));
  }
}

TEST_CASE("topic-conditioned term relatedness") {
  // Hand-sized model: 2 topics, 3 terms.
  Matrix phi(2, 3);
  phi(0, 0) = 0.7; phi(0, 1) = 0.2; phi(0, 2) = 0.1;
  phi(1, 0) = 0.1; phi(1, 1) = 0.3; phi(1, 2) = 0.6;
  const LdaModel model(phi, {0.4, 0.6}, 0.5, 0.01);
  const std::vector<double> theta = {0.25, 0.75};

  CHECK(topic_kl_relatedness(model, 0, 0, theta) == doctest::Approx(0.0));
  CHECK(topic_kl_relatedness(model, 1, 1, theta) == doctest::Approx(0.0));

  // Direct summation with the same equal-prior convention.
  double expected = 0.0;
  for (std::size_t c = 0; c < 2; ++c) {
    const double p1 = phi(c, 0), p2 = phi(c, 2);
    expected += theta[c] / (1.0 / 3.0) * (p1 - p2) * std::log(p1 / p2);
  }
  CHECK(topic_kl_relatedness(model, 0, 2, theta) == doctest::Approx(expected).epsilon(1e-12));

  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const TermId t1 = TermId(rng.next_below(3));
    const TermId t2 = TermId(rng.next_below(3));
    double u = rng.uniform();
    const std::vector<double> random_theta = {u, 1.0 - u};
    CHECK(topic_kl_relatedness(model, t1, t2, random_theta) >= 0.0);
  }

  const std::vector<double> posterior = model.term_posterior(0);
  CHECK(posterior.size() == 2);
  CHECK(posterior[0] + posterior[1] == doctest::Approx(1.0));
  CHECK(posterior[0] == doctest::Approx(0.7 * 0.4 / (0.7 * 0.4 + 0.1 * 0.6)));
}

TEST_CASE("single-topic inference degenerates to certainty") {
  Matrix phi(1, 2);
  phi(0, 0) = 0.5; phi(0, 1) = 0.5;
  const LdaModel model(phi, {1.0}, 0.5, 0.01);
  const LocalContext theta = model.infer(Document{{0}});
  CHECK(theta.size() == 1);
  CHECK(theta[0] == doctest::Approx(1.0));
}

}  // TEST_SUITE
