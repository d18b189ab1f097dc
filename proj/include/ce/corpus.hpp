#ifndef CE_CORPUS_HPP_
#define CE_CORPUS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ce/rng.hpp"

namespace ce {

using TermId = std::uint32_t;

/// Ordered term list with a string->index bijection. Indices are assigned in
/// first-appearance order and never change.
class Vocabulary {
 public:
  TermId intern(std::string term);
  std::optional<TermId> find(std::string_view term) const;
  const std::string& term(TermId id) const { return terms_[id]; }
  const std::vector<std::string>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool operator==(const Vocabulary& other) const { return terms_ == other.terms_; }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, TermId> index_;
};

/// A document is the set of distinct terms annotating one object. Ids are
/// kept sorted so set semantics and iteration order coincide.
struct Document {
  std::vector<TermId> term_ids;

  std::size_t cardinality() const { return term_ids.size(); }
  bool contains(TermId id) const;

  bool operator==(const Document&) const = default;
};

Document make_document(std::vector<TermId> ids);  // sorts + dedups

struct Corpus {
  Vocabulary vocabulary;
  std::vector<Document> documents;
};

/// One document per non-blank line, terms separated by TAB (terms may contain
/// internal spaces). Duplicate terms within a line collapse; surrounding
/// whitespace is trimmed.
Corpus parse_corpus(std::istream& in);
Corpus parse_corpus_file(const std::string& path);
void write_corpus(const Corpus& corpus, std::ostream& out);

std::vector<double> bow(const Document& doc, std::size_t vocab_size);
std::vector<double> bow_complement(std::vector<double> b);
std::vector<double> to_targets(std::vector<double> b);  // {0,1} -> {-1,+1}

/// A synthesized negative: a term coupled with a document it does not occur
/// in. The document supplies the local context; the target is the complement
/// bag of words.
struct NegativePair {
  TermId term;
  std::size_t doc;

  bool operator==(const NegativePair&) const = default;
};

/// For every document of cardinality m, draws m distinct out-of-document
/// terms (one negative per positive example).
std::vector<NegativePair> synthesize_negatives(const Corpus& corpus, Rng& rng);
std::vector<NegativePair> synthesize_negatives(const Corpus& corpus,
                                               const std::vector<std::size_t>& doc_ids, Rng& rng);

struct CorpusSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

/// 2:1 train/holdout split (holdout rounded down), with `validation_count`
/// documents of the holdout reserved for validation and the rest for test.
CorpusSplit split_corpus(const Corpus& corpus, std::size_t validation_count, Rng& rng);

struct CorruptedDocument {
  Document document;
  double achieved_rate;  // 1 - |kept| / |original|
};

/// Removes round(rate*m) random terms, always retaining at least one.
/// rate must lie in [0, 0.5].
CorruptedDocument corrupt_document(const Document& doc, double missing_rate, Rng& rng);

struct SyntheticConfig {
  std::size_t topics = 2;
  std::size_t vocab_size = 30;
  std::size_t documents = 300;
  std::size_t min_cardinality = 4;
  std::size_t max_cardinality = 8;
  std::size_t polysemy_pairs = 0;  // terms shared between two adjacent topic supports
};

struct SyntheticCorpus {
  Corpus corpus;
  std::vector<std::size_t> doc_topics;
  std::vector<std::vector<TermId>> topic_supports;
  std::vector<TermId> polysemous_terms;
};

/// Planted-topic corpus: each document samples its terms from one latent
/// topic's support; polysemous terms belong to two supports.
SyntheticCorpus generate_synthetic_corpus(const SyntheticConfig& cfg, Rng& rng);

}  // namespace ce

#endif  // CE_CORPUS_HPP_
