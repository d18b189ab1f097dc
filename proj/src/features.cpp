#include "ce/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ce {

UsageMatrix build_usage_matrix(const Corpus& corpus) {
  std::vector<std::size_t> all(corpus.documents.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return build_usage_matrix(corpus, all);
}

UsageMatrix build_usage_matrix(const Corpus& corpus, const std::vector<std::size_t>& doc_ids) {
  if (doc_ids.empty()) throw std::invalid_argument("empty corpus");
  const std::size_t n_docs = doc_ids.size();
  const std::size_t n_terms = corpus.vocabulary.size();

  UsageMatrix um;
  um.tf = Matrix(n_docs, n_terms);
  std::vector<std::size_t> df(n_terms, 0);
  for (std::size_t r = 0; r < n_docs; ++r) {
    for (TermId t : corpus.documents[doc_ids[r]].term_ids) {
      um.tf(r, t) = 1.0;
      ++df[t];
    }
  }

  um.idf.resize(n_terms);
  for (std::size_t t = 0; t < n_terms; ++t) {
    um.idf[t] = std::log(double(n_docs) / (1.0 + double(df[t])));
  }

  um.tfidf = Matrix(n_docs, n_terms);
  for (std::size_t r = 0; r < n_docs; ++r) {
    for (std::size_t t = 0; t < n_terms; ++t) {
      um.tfidf(r, t) = um.tf(r, t) * um.idf[t];
    }
  }
  return um;
}

TermFeatures term_features(const UsageMatrix& um) {
  const std::size_t n_terms = um.term_count();
  TermFeatures tf;
  tf.relatedness = Matrix(n_terms, n_terms);
  // Gram matrix of usage vectors, accumulated document-wise so sparse rows
  // stay cheap.
  for (std::size_t d = 0; d < um.doc_count(); ++d) {
    const auto row = um.tfidf.row(d);
    for (std::size_t a = 0; a < n_terms; ++a) {
      if (row[a] == 0.0) continue;
      for (std::size_t b = a; b < n_terms; ++b) {
        if (row[b] == 0.0) continue;
        tf.relatedness(a, b) += row[a] * row[b];
      }
    }
  }
  for (std::size_t a = 0; a < n_terms; ++a) {
    for (std::size_t b = 0; b < a; ++b) tf.relatedness(a, b) = tf.relatedness(b, a);
  }
  return tf;
}

namespace {

// Keeps scaled training endpoints strictly inside (-1, +1).
constexpr double kEndpointShrink = 1.0 - 1e-12;

}  // namespace

FeaturePipeline FeaturePipeline::fit(const Matrix& train_rows) {
  if (train_rows.rows() == 0 || train_rows.cols() == 0) {
    throw std::invalid_argument("no rows to fit pipeline");
  }
  const std::size_t n = train_rows.rows();
  const std::size_t d = train_rows.cols();

  FeaturePipeline fp;
  fp.mean_.assign(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) axpy(1.0, train_rows.row(r), fp.mean_);
  scale_in_place(fp.mean_, 1.0 / double(n));

  Matrix cov(d, d);
  std::vector<double> centered(d);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) centered[c] = train_rows(r, c) - fp.mean_[c];
    add_outer(cov, centered, centered);
  }
  const double denom = n > 1 ? double(n - 1) : 1.0;
  scale_in_place(cov.flat(), 1.0 / denom);

  fp.basis_ = eigen_symmetric(std::move(cov)).vectors;

  fp.low_.assign(d, 0.0);
  fp.high_.assign(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) centered[c] = train_rows(r, c) - fp.mean_[c];
    const std::vector<double> rotated = matvec(fp.basis_, centered);
    for (std::size_t c = 0; c < d; ++c) {
      if (r == 0) {
        fp.low_[c] = fp.high_[c] = rotated[c];
      } else {
        fp.low_[c] = std::min(fp.low_[c], rotated[c]);
        fp.high_[c] = std::max(fp.high_[c], rotated[c]);
      }
    }
  }
  fp.fitted_ = true;
  return fp;
}

std::vector<double> FeaturePipeline::apply(std::span<const double> v) const {
  if (!fitted_) throw std::logic_error("pipeline not fitted");
  if (v.size() != mean_.size()) throw std::invalid_argument("feature dimension mismatch");

  std::vector<double> centered(v.size());
  for (std::size_t c = 0; c < v.size(); ++c) centered[c] = v[c] - mean_[c];
  std::vector<double> out = matvec(basis_, centered);
  for (std::size_t c = 0; c < out.size(); ++c) {
    const double span = high_[c] - low_[c];
    if (!(span > 0.0)) {
      out[c] = 0.0;  // degenerate training range maps to the midpoint
      continue;
    }
    const double unit = (2.0 * (out[c] - low_[c]) / span - 1.0) * kEndpointShrink;
    out[c] = std::clamp(unit, -1.0, 1.0);
  }
  return out;
}

FeaturePipeline FeaturePipeline::from_parts(std::vector<double> mean, Matrix basis,
                                            std::vector<double> low, std::vector<double> high) {
  FeaturePipeline fp;
  fp.mean_ = std::move(mean);
  fp.basis_ = std::move(basis);
  fp.low_ = std::move(low);
  fp.high_ = std::move(high);
  if (fp.basis_.rows() != fp.mean_.size() || fp.basis_.cols() != fp.mean_.size() ||
      fp.low_.size() != fp.mean_.size() || fp.high_.size() != fp.mean_.size()) {
    throw std::invalid_argument("feature dimension mismatch");
  }
  fp.fitted_ = true;
  return fp;
}

}  // namespace ce
