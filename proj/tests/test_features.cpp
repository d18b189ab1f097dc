#include <doctest.h>

#include <cmath>

#include "ce/features.hpp"
#include "helpers.hpp"

using namespace ce;
using ce::testing::four_doc_corpus;

TEST_SUITE("features") {

TEST_CASE("idf and tfidf on the four-document corpus") {
  const Corpus corpus = four_doc_corpus();
  const UsageMatrix um = build_usage_matrix(corpus);
  const TermId a = *corpus.vocabulary.find("a");
  const TermId b = *corpus.vocabulary.find("b");
  const TermId d = *corpus.vocabulary.find("d");

  CHECK(um.idf[d] == doctest::Approx(std::log(2.0)));          // one document
  CHECK(um.idf[a] == doctest::Approx(0.0));                    // three documents
  CHECK(um.idf[b] == doctest::Approx(std::log(4.0 / 3.0)));    // two documents

  for (double v : um.usage_vector(a)) CHECK(v == 0.0);
  for (std::size_t doc = 0; doc < 4; ++doc) {
    const double expected = um.tf(doc, b) > 0.0 ? std::log(4.0 / 3.0) : 0.0;
    CHECK(um.tfidf(doc, b) == doctest::Approx(expected));
  }
}

TEST_CASE("tfidf entries equal idf exactly where the term occurs") {
  Rng rng(21);
  const Corpus corpus = ce::testing::random_corpus(10, 12, rng);
  const UsageMatrix um = build_usage_matrix(corpus);
  for (std::size_t d = 0; d < um.doc_count(); ++d) {
    for (std::size_t t = 0; t < um.term_count(); ++t) {
      if (corpus.documents[d].contains(TermId(t))) {
        CHECK(um.tfidf(d, t) == um.idf[t]);
      } else {
        CHECK(um.tfidf(d, t) == 0.0);
      }
    }
  }
}

TEST_CASE("term relatedness matches hand dot products") {
  const Corpus corpus = four_doc_corpus();
  const UsageMatrix um = build_usage_matrix(corpus);
  const TermFeatures tf = term_features(um);
  const TermId a = *corpus.vocabulary.find("a");
  const TermId c = *corpus.vocabulary.find("c");
  const TermId d = *corpus.vocabulary.find("d");

  // u(a) is all zero, so its whole feature vector vanishes.
  for (double v : tf.vector_for(a)) CHECK(v == 0.0);
  // c and d never share a document.
  CHECK(tf.relatedness(c, d) == 0.0);
  // diagonal is the squared idf for a single-document term
  CHECK(tf.relatedness(d, d) == doctest::Approx(std::log(2.0) * std::log(2.0)));
  CHECK(tf.relatedness(d, d) == doctest::Approx(0.4805).epsilon(1e-3));
}

TEST_CASE("relatedness matrix is symmetric positive semidefinite") {
  Rng rng(33);
  for (int trial = 0; trial < 5; ++trial) {
    const Corpus corpus = ce::testing::random_corpus(10, 8 + trial, rng);
    const TermFeatures tf = term_features(build_usage_matrix(corpus));
    for (std::size_t i = 0; i < 10; ++i) {
      for (std::size_t j = 0; j < 10; ++j) {
        CHECK(tf.relatedness(i, j) == doctest::Approx(tf.relatedness(j, i)));
      }
    }
    const SymmetricEigen eig = eigen_symmetric(tf.relatedness);
    for (double v : eig.values) CHECK(v >= -1e-10);
  }
}

TEST_CASE("pipeline scales training rows into (-1, +1)") {
  Rng rng(5);
  Matrix rows(12, 4);
  for (double& v : rows.flat()) v = rng.uniform(-3.0, 7.0);
  // one constant feature
  for (std::size_t r = 0; r < rows.rows(); ++r) rows(r, 3) = 2.5;

  const FeaturePipeline fp = FeaturePipeline::fit(rows);
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    for (double v : fp.apply(rows.row(r))) {
      CHECK(v >= -1.0);
      CHECK(v <= 1.0);
      CHECK(std::abs(v) < 1.0 + 1e-15);
    }
  }
}

TEST_CASE("constant feature maps to zero") {
  Matrix rows(3, 2);
  rows(0, 0) = 1.0; rows(1, 0) = 2.0; rows(2, 0) = 3.0;
  for (std::size_t r = 0; r < 3; ++r) rows(r, 1) = 4.0;
  const FeaturePipeline fp = FeaturePipeline::fit(rows);
  // The second principal direction has zero variance, so its scaled output is
  // pinned at the midpoint.
  for (std::size_t r = 0; r < 3; ++r) {
    const auto out = fp.apply(rows.row(r));
    CHECK(out[1] == 0.0);
  }
}

TEST_CASE("extreme training row lands just inside +1") {
  // Identity-like data so rotation cannot mix features: one dominant column.
  Matrix rows(5, 1);
  for (std::size_t r = 0; r < 5; ++r) rows(r, 0) = double(r);
  const FeaturePipeline fp = FeaturePipeline::fit(rows);
  const auto top = fp.apply(rows.row(4));
  CHECK(std::abs(top[0]) < 1.0);
  CHECK(std::abs(top[0]) > 1.0 - 1e-9);
}

TEST_CASE("apply is deterministic and validates its input") {
  Rng rng(6);
  Matrix rows(6, 3);
  for (double& v : rows.flat()) v = rng.uniform(-1.0, 1.0);
  const FeaturePipeline fp = FeaturePipeline::fit(rows);

  const std::vector<double> probe = {0.3, -0.2, 0.9};
  CHECK(fp.apply(probe) == fp.apply(probe));

  FeaturePipeline unfitted;
  CHECK_THROWS_WITH_AS(unfitted.apply(probe), "pipeline not fitted", std::logic_error);
  const std::vector<double> wrong = {1.0, 2.0};
  CHECK_THROWS_WITH_AS(fp.apply(wrong), "feature dimension mismatch", std::invalid_argument);
}

TEST_CASE("out-of-range test vectors are clipped") {
  Matrix rows(4, 1);
  for (std::size_t r = 0; r < 4; ++r) rows(r, 0) = double(r);
  const FeaturePipeline fp = FeaturePipeline::fit(rows);
  const std::vector<double> beyond = {100.0};
  const auto out = fp.apply(beyond);
  CHECK(std::abs(out[0]) <= 1.0);
}

}  // TEST_SUITE
