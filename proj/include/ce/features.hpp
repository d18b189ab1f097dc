#ifndef CE_FEATURES_HPP_
#define CE_FEATURES_HPP_

#include <span>
#include <vector>

#include "ce/corpus.hpp"
#include "ce/linalg.hpp"

namespace ce {

/// tfidf-weighted document-term matrix. tf is binary presence; idf(t) =
/// ln(|docs| / (1 + df(t))); a term's usage vector is its tfidf column.
struct UsageMatrix {
  Matrix tf;                // docs x terms, entries in {0,1}
  std::vector<double> idf;  // per term
  Matrix tfidf;             // docs x terms

  std::size_t doc_count() const { return tfidf.rows(); }
  std::size_t term_count() const { return tfidf.cols(); }
  std::vector<double> usage_vector(TermId t) const { return tfidf.column(t); }
};

UsageMatrix build_usage_matrix(const Corpus& corpus);
/// Restricted to a document subset (training split); vocabulary stays full.
UsageMatrix build_usage_matrix(const Corpus& corpus, const std::vector<std::size_t>& doc_ids);

/// Global term-to-term relatedness: relatedness(a,b) = <u(a), u(b)>. Row t is
/// the raw feature vector of term t.
struct TermFeatures {
  Matrix relatedness;  // terms x terms, symmetric PSD

  std::span<const double> vector_for(TermId t) const { return relatedness.row(t); }
};

TermFeatures term_features(const UsageMatrix& um);

/// Frozen transform fitted on training feature rows: decorrelate with a full
/// PCA rotation, then scale each rotated feature linearly so the training
/// range maps into (-1, +1). Out-of-range values at apply time are clipped.
class FeaturePipeline {
 public:
  FeaturePipeline() = default;

  static FeaturePipeline fit(const Matrix& train_rows);

  std::vector<double> apply(std::span<const double> v) const;

  bool fitted() const { return fitted_; }
  std::size_t dimension() const { return mean_.size(); }

  // Serialization accessors; a pipeline rebuilt from these fields is
  // behaviour-identical.
  const std::vector<double>& mean() const { return mean_; }
  const Matrix& basis() const { return basis_; }
  const std::vector<double>& low() const { return low_; }
  const std::vector<double>& high() const { return high_; }
  static FeaturePipeline from_parts(std::vector<double> mean, Matrix basis,
                                    std::vector<double> low, std::vector<double> high);

  bool operator==(const FeaturePipeline&) const = default;

 private:
  bool fitted_ = false;
  std::vector<double> mean_;
  Matrix basis_;  // rows = principal directions
  std::vector<double> low_, high_;
};

}  // namespace ce

#endif  // CE_FEATURES_HPP_
