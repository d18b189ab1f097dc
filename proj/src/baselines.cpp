#include "ce/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ce {

EmbeddingTable lsa_train(const UsageMatrix& um, double pov_threshold,
                         bool scale_by_singular_values) {
  if (!(pov_threshold > 0.0 && pov_threshold <= 1.0)) {
    throw std::invalid_argument("invalid POV threshold");
  }
  const std::size_t n_terms = um.term_count();

  // Term-side factor via the Gram matrix: eigenvalues of (Y^T Y) are the
  // squared singular values of Y.
  Matrix gram(n_terms, n_terms);
  for (std::size_t d = 0; d < um.doc_count(); ++d) {
    const auto row = um.tfidf.row(d);
    for (std::size_t a = 0; a < n_terms; ++a) {
      if (row[a] == 0.0) continue;
      for (std::size_t b = a; b < n_terms; ++b) gram(a, b) += row[a] * row[b];
    }
  }
  for (std::size_t a = 0; a < n_terms; ++a)
    for (std::size_t b = 0; b < a; ++b) gram(a, b) = gram(b, a);

  SymmetricEigen eig = eigen_symmetric(std::move(gram));
  for (double& v : eig.values) v = std::max(v, 0.0);
  const double total = std::accumulate(eig.values.begin(), eig.values.end(), 0.0);
  if (total <= 0.0) throw std::invalid_argument("zero matrix");

  std::size_t retained = 0;
  double covered = 0.0;
  while (retained < n_terms && covered / total < pov_threshold - 1e-12) {
    covered += eig.values[retained];
    ++retained;
  }

  EmbeddingTable table;
  table.vectors = Matrix(n_terms, retained);
  for (std::size_t t = 0; t < n_terms; ++t) {
    for (std::size_t c = 0; c < retained; ++c) {
      const double scale = scale_by_singular_values ? std::sqrt(eig.values[c]) : 1.0;
      table.vectors(t, c) = eig.vectors(c, t) * scale;
    }
  }
  return table;
}

EmbeddingTable pca_baseline_train(const UsageMatrix& um, std::size_t dimensions) {
  const std::size_t n_terms = um.term_count();
  if (dimensions > n_terms) throw std::invalid_argument("dimension exceeds vocabulary");
  if (dimensions == 0) throw std::invalid_argument("dimension exceeds vocabulary");

  const TermFeatures features = term_features(um);
  const Matrix& rows = features.relatedness;

  std::vector<double> mean(n_terms, 0.0);
  for (std::size_t r = 0; r < n_terms; ++r) axpy(1.0, rows.row(r), mean);
  scale_in_place(mean, 1.0 / double(n_terms));

  Matrix cov(n_terms, n_terms);
  std::vector<double> centered(n_terms);
  for (std::size_t r = 0; r < n_terms; ++r) {
    for (std::size_t c = 0; c < n_terms; ++c) centered[c] = rows(r, c) - mean[c];
    add_outer(cov, centered, centered);
  }
  scale_in_place(cov.flat(), 1.0 / double(std::max<std::size_t>(1, n_terms - 1)));

  const SymmetricEigen eig = eigen_symmetric(std::move(cov));

  EmbeddingTable table;
  table.vectors = Matrix(n_terms, dimensions);
  for (std::size_t r = 0; r < n_terms; ++r) {
    for (std::size_t c = 0; c < n_terms; ++c) centered[c] = rows(r, c) - mean[c];
    for (std::size_t c = 0; c < dimensions; ++c) {
      table.vectors(r, c) = dot(eig.vectors.row(c), centered);
    }
  }
  return table;
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  const double na = std::sqrt(squared_norm(a));
  const double nb = std::sqrt(squared_norm(b));
  if (na == 0.0 || nb == 0.0) return 1.0;
  return 1.0 - dot(a, b) / (na * nb);
}

RankedList cosine_rank(const EmbeddingTable& table, TermId query) {
  if (query >= table.vectors.rows()) throw std::invalid_argument("term outside vocabulary");
  std::vector<double> distances(table.vectors.rows());
  for (std::size_t t = 0; t < table.vectors.rows(); ++t) {
    distances[t] = cosine_distance(table.vectors.row(query), table.vectors.row(t));
  }
  return rank_from_distances(distances, false);
}

RankedList random_rank(std::size_t vocab_size, Rng& rng) {
  RankedList out;
  out.order.resize(vocab_size);
  std::iota(out.order.begin(), out.order.end(), TermId{0});
  rng.shuffle(out.order);
  out.distances.assign(vocab_size, 0.0);
  return out;
}

Matrix TableModel::context_distances(const Document&, std::span<const TermId> queries) const {
  Matrix out(queries.size(), vocab_size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const auto query_row = table_->vectors.row(queries[q]);
    for (std::size_t t = 0; t < vocab_size(); ++t) {
      out(q, t) = cosine_distance(query_row, table_->vectors.row(t));
    }
  }
  return out;
}

Matrix LdaKlModel::context_distances(const Document& context,
                                     std::span<const TermId> queries) const {
  const LocalContext theta = lda_->infer(context);
  Matrix out(queries.size(), vocab_size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    for (std::size_t t = 0; t < vocab_size(); ++t) {
      out(q, t) = topic_kl_relatedness(*lda_, queries[q], TermId(t), theta);
    }
  }
  return out;
}

}  // namespace ce
