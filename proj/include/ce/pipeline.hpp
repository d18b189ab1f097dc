#ifndef CE_PIPELINE_HPP_
#define CE_PIPELINE_HPP_

#include <string>
#include <vector>

#include "ce/instances.hpp"
#include "ce/metrics.hpp"
#include "ce/model_io.hpp"
#include "ce/training.hpp"

namespace ce {

/// Everything configurable across the pipeline stages. A flat key=value file
/// maps onto these fields; flags override.
struct PipelineOptions {
  LdaConfig lda;
  std::vector<std::size_t> hidden = {100, 100, 10};
  std::size_t validation_count = 30;
  double pov_threshold = 0.9;
  std::size_t pca_dimensions = 0;  // 0 = min(35, vocabulary)
  bool lsa_scale = true;
  AutoencoderConfig autoencoder;
  TrainingConfig training;
};

PipelineOptions load_options_file(const std::string& path);
void apply_options_file(PipelineOptions& options, const std::string& path);
void apply_option(PipelineOptions& options, const std::string& key, const std::string& value);

/// Splits, synthesizes negatives, fits the feature pipeline, trains the topic
/// model and both baseline tables.
ModelBundle prepare_bundle(Corpus corpus, const PipelineOptions& options, std::uint64_t seed);

/// Structures recomputed from a bundle (they are deterministic functions of
/// the stored corpus + split).
struct DerivedArtifacts {
  UsageMatrix usage;
  TermFeatures features;
  std::vector<Instance> instances;  // training split, positives then negatives
};
DerivedArtifacts derive_artifacts(const ModelBundle& bundle);

void run_pretrain(ModelBundle& bundle, const DerivedArtifacts& artifacts,
                  const std::vector<std::size_t>& hidden, std::uint64_t seed);
void run_train_prediction(ModelBundle& bundle, const DerivedArtifacts& artifacts,
                          std::uint64_t seed, const ProgressSink& progress = {});
void run_train_siamese(ModelBundle& bundle, const DerivedArtifacts& artifacts, std::uint64_t seed,
                       const ProgressSink& progress = {});

/// Mean priming P@2 over the given documents (the early-stopping surrogate).
double validation_p2(const CeModel& model, const Corpus& corpus,
                     const std::vector<std::size_t>& doc_ids);

enum class EvalModel { kSiameseCe, kCe, kPca, kLsa, kLdaKl, kRandom };
enum class Protocol { kPrime, kExtended };

EvalModel parse_eval_model(const std::string& name);
const char* eval_model_name(EvalModel model);

struct EvalOptions {
  EvalModel model = EvalModel::kSiameseCe;
  Protocol protocol = Protocol::kPrime;
  double missing_rate = 0.0;  // corrupts the local context, not the truth
  std::uint64_t seed = 0;
  std::vector<std::size_t> k_values = {1, 2, 3, 5, 10};
};

struct QueryRecord {
  std::string id;
  QueryMetrics metrics;
};

struct EvalResult {
  std::vector<QueryRecord> queries;
  MetricsReport report;
};

/// Runs a priming protocol over the given documents, fanning out across
/// evaluation threads. Ground truth is always the uncorrupted document.
EvalResult evaluate_documents(const ModelBundle& bundle, const DerivedArtifacts& artifacts,
                              const std::vector<Document>& documents, const EvalOptions& options);
EvalResult evaluate_split(const ModelBundle& bundle, const DerivedArtifacts& artifacts,
                          const std::string& split_name, const EvalOptions& options);

/// One explicit query concept per entry (query-file form of the priming
/// protocol); the document is the ground truth and supplies the context.
struct PrimeQuery {
  TermId term;
  Document document;
};
EvalResult evaluate_prime_queries(const ModelBundle& bundle, const DerivedArtifacts& artifacts,
                                  const std::vector<PrimeQuery>& queries,
                                  const EvalOptions& options);

void write_pr_csv(const MetricsReport& report, std::ostream& out);

}  // namespace ce

#endif  // CE_PIPELINE_HPP_
