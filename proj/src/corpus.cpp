#include "ce/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ce {

TermId Vocabulary::intern(std::string term) {
  if (auto it = index_.find(term); it != index_.end()) return it->second;
  const TermId id = TermId(terms_.size());
  index_.emplace(term, id);
  terms_.push_back(std::move(term));
  return id;
}

std::optional<TermId> Vocabulary::find(std::string_view term) const {
  if (auto it = index_.find(std::string(term)); it != index_.end()) return it->second;
  return std::nullopt;
}

bool Document::contains(TermId id) const {
  return std::binary_search(term_ids.begin(), term_ids.end(), id);
}

Document make_document(std::vector<TermId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return Document{std::move(ids)};
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// A blank line is empty (modulo the CR of CRLF endings); whitespace-only
// lines are malformed documents, not blanks.
bool is_blank(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s.empty();
}

}  // namespace

Corpus parse_corpus(std::istream& in) {
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    std::vector<TermId> ids;
    std::string_view rest = line;
    while (!rest.empty()) {
      const std::size_t tab = rest.find('\t');
      const std::string_view field = rest.substr(0, tab);
      rest = tab == std::string_view::npos ? std::string_view{} : rest.substr(tab + 1);
      const std::string_view term = trim(field);
      if (term.empty()) continue;
      ids.push_back(corpus.vocabulary.intern(std::string(term)));
    }
    if (ids.empty()) {
      throw std::invalid_argument("malformed document line " + std::to_string(line_no));
    }
    corpus.documents.push_back(make_document(std::move(ids)));
  }
  if (corpus.documents.empty()) throw std::invalid_argument("empty corpus");
  return corpus;
}

Corpus parse_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  return parse_corpus(in);
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const Document& doc : corpus.documents) {
    for (std::size_t i = 0; i < doc.term_ids.size(); ++i) {
      if (i > 0) out << '\t';
      out << corpus.vocabulary.term(doc.term_ids[i]);
    }
    out << '\n';
  }
}

std::vector<double> bow(const Document& doc, std::size_t vocab_size) {
  std::vector<double> b(vocab_size, 0.0);
  for (TermId id : doc.term_ids) b[id] = 1.0;
  return b;
}

std::vector<double> bow_complement(std::vector<double> b) {
  for (double& v : b) v = 1.0 - v;
  return b;
}

std::vector<double> to_targets(std::vector<double> b) {
  for (double& v : b) v = 2.0 * v - 1.0;
  return b;
}

std::vector<NegativePair> synthesize_negatives(const Corpus& corpus, Rng& rng) {
  std::vector<std::size_t> all(corpus.documents.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return synthesize_negatives(corpus, all, rng);
}

std::vector<NegativePair> synthesize_negatives(const Corpus& corpus,
                                               const std::vector<std::size_t>& doc_ids, Rng& rng) {
  const std::size_t vocab = corpus.vocabulary.size();
  std::vector<NegativePair> out;
  for (std::size_t doc_id : doc_ids) {
    const Document& doc = corpus.documents[doc_id];
    if (doc.cardinality() >= vocab) throw std::invalid_argument("no candidate negative term");
    std::vector<TermId> candidates;
    candidates.reserve(vocab - doc.cardinality());
    for (TermId t = 0; t < vocab; ++t) {
      if (!doc.contains(t)) candidates.push_back(t);
    }
    // One negative per positive example; a term may repeat across draws, the
    // constraint is only membership.
    for (std::size_t k = 0; k < doc.cardinality(); ++k) {
      out.push_back({candidates[rng.next_below(candidates.size())], doc_id});
    }
  }
  return out;
}

CorpusSplit split_corpus(const Corpus& corpus, std::size_t validation_count, Rng& rng) {
  const std::size_t n = corpus.documents.size();
  if (n < 3) throw std::invalid_argument("corpus too small to split");
  const std::size_t holdout = n / 3;
  if (validation_count > holdout) throw std::invalid_argument("validation exceeds holdout");

  std::vector<std::size_t> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = i;
  rng.shuffle(ids);

  CorpusSplit split;
  split.train.assign(ids.begin(), ids.begin() + (n - holdout));
  split.validation.assign(ids.begin() + (n - holdout),
                          ids.begin() + (n - holdout) + validation_count);
  split.test.assign(ids.begin() + (n - holdout) + validation_count, ids.end());
  return split;
}

CorruptedDocument corrupt_document(const Document& doc, double missing_rate, Rng& rng) {
  if (!(missing_rate >= 0.0 && missing_rate <= 0.5)) {
    throw std::invalid_argument("missing rate out of range");
  }
  const std::size_t m = doc.cardinality();
  if (missing_rate == 0.0 || m == 1) return {doc, 0.0};

  auto removals = std::size_t(std::llround(missing_rate * double(m)));
  removals = std::min(removals, m - 1);  // always keep one term

  std::vector<TermId> ids = doc.term_ids;
  rng.shuffle(ids);
  ids.resize(m - removals);
  const double achieved = 1.0 - double(ids.size()) / double(m);
  return {make_document(std::move(ids)), achieved};
}

SyntheticCorpus generate_synthetic_corpus(const SyntheticConfig& cfg, Rng& rng) {
  if (cfg.topics < 1) throw std::invalid_argument("need at least one topic");
  if (cfg.vocab_size < cfg.topics * 3) {
    throw std::invalid_argument("vocabulary too small for topic count");
  }
  if (cfg.min_cardinality < 1 || cfg.min_cardinality > cfg.max_cardinality) {
    throw std::invalid_argument("invalid cardinality range");
  }

  SyntheticCorpus out;
  for (std::size_t i = 0; i < cfg.vocab_size; ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "w%03zu", i);
    out.corpus.vocabulary.intern(name);
  }

  // Even partition of the vocabulary into per-topic supports.
  out.topic_supports.resize(cfg.topics);
  for (std::size_t t = 0; t < cfg.vocab_size; ++t) {
    out.topic_supports[t * cfg.topics / cfg.vocab_size].push_back(TermId(t));
  }
  for (std::size_t p = 0; p < cfg.polysemy_pairs; ++p) {
    const std::size_t home = p % cfg.topics;
    const std::size_t other = (home + 1) % cfg.topics;
    const TermId shared = out.topic_supports[home][p / cfg.topics];
    out.topic_supports[other].push_back(shared);
    out.polysemous_terms.push_back(shared);
  }
  for (auto& support : out.topic_supports) std::sort(support.begin(), support.end());

  for (const auto& support : out.topic_supports) {
    if (cfg.max_cardinality > support.size()) {
      throw std::invalid_argument("cardinality exceeds topic support");
    }
  }

  for (std::size_t d = 0; d < cfg.documents; ++d) {
    const std::size_t topic = rng.next_below(cfg.topics);
    const std::size_t m =
        cfg.min_cardinality + rng.next_below(cfg.max_cardinality - cfg.min_cardinality + 1);
    std::vector<TermId> pool = out.topic_supports[topic];
    rng.shuffle(pool);
    pool.resize(m);
    out.corpus.documents.push_back(make_document(std::move(pool)));
    out.doc_topics.push_back(topic);
  }
  return out;
}

}  // namespace ce
