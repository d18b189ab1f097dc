#include "ce/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ce/parallel.hpp"

namespace ce {

namespace {

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    if (field.empty()) continue;
    out.push_back(std::size_t(std::stoull(field)));
  }
  if (out.empty()) throw std::invalid_argument("empty size list");
  return out;
}

bool parse_bool(const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("invalid boolean: " + value);
}

std::uint64_t mix_seed(std::uint64_t seed, std::size_t index) {
  return seed + 0x9e3779b97f4a7c15ull * (index + 1);
}

}  // namespace

void apply_option(PipelineOptions& options, const std::string& key, const std::string& value) {
  if (key == "topics") options.lda.topics = std::stoull(value);
  else if (key == "lda_iterations") options.lda.iterations = std::stoi(value);
  else if (key == "lda_alpha") options.lda.alpha = std::stod(value);
  else if (key == "lda_beta") options.lda.beta = std::stod(value);
  else if (key == "hidden") options.hidden = parse_size_list(value);
  else if (key == "validation_count") options.validation_count = std::stoull(value);
  else if (key == "pov_threshold") options.pov_threshold = std::stod(value);
  else if (key == "pca_dimensions") options.pca_dimensions = std::stoull(value);
  else if (key == "lsa_scale") options.lsa_scale = parse_bool(value);
  else if (key == "sparsity_weight") options.autoencoder.sparsity_weight = std::stod(value);
  else if (key == "sparsity_epsilon") options.autoencoder.sparsity_epsilon = std::stod(value);
  else if (key == "weight_decay") options.autoencoder.weight_decay = std::stod(value);
  else if (key == "pretrain_iterations") options.autoencoder.max_iterations = std::stoi(value);
  else if (key == "learning_rate") options.training.learning_rate = std::stod(value);
  else if (key == "decay_factor") options.training.decay_factor = std::stod(value);
  else if (key == "decay_period") options.training.decay_period = std::stoi(value);
  else if (key == "batch_size") options.training.batch_size = std::stoull(value);
  else if (key == "siamese_weight") options.training.siamese_weight = std::stod(value);
  else if (key == "scale") options.training.scale = std::stod(value);
  else if (key == "importance") options.training.importance = std::stod(value);
  else if (key == "sensitivity") options.training.sensitivity = std::stod(value);
  else if (key == "eval_period") options.training.eval_period = std::stoi(value);
  else if (key == "stop_threshold") options.training.stop_threshold = std::stod(value);
  else if (key == "max_epochs") options.training.max_epochs = std::stoi(value);
  else if (key == "pairs_per_kind") options.training.pairs_per_kind = std::stoull(value);
  else if (key == "swap_kappa") options.training.swap_kappa = parse_bool(value);
  else throw std::invalid_argument("unknown config key: " + key);
}

PipelineOptions load_options_file(const std::string& path) {
  PipelineOptions options;
  apply_options_file(options, path);
  return options;
}

void apply_options_file(PipelineOptions& options, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto strip = [](std::string s) {
      const auto from = s.find_first_not_of(" \t\r");
      const auto to = s.find_last_not_of(" \t\r");
      return from == std::string::npos ? std::string{} : s.substr(from, to - from + 1);
    };
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (key.empty()) continue;
    apply_option(options, key, value);
  }
}

ModelBundle prepare_bundle(Corpus corpus, const PipelineOptions& options, std::uint64_t seed) {
  Rng rng(seed);
  ModelBundle bundle;
  bundle.corpus = std::move(corpus);
  bundle.split = split_corpus(bundle.corpus, options.validation_count, rng);
  bundle.negatives = synthesize_negatives(bundle.corpus, bundle.split.train, rng);

  const UsageMatrix usage = build_usage_matrix(bundle.corpus, bundle.split.train);
  bundle.pipeline = FeaturePipeline::fit(term_features(usage).relatedness);
  bundle.lda = train_lda(bundle.corpus, bundle.split.train, options.lda, rng);

  bundle.lsa = lsa_train(usage, options.pov_threshold, options.lsa_scale);
  const std::size_t pca_dims = options.pca_dimensions > 0
                                   ? options.pca_dimensions
                                   : std::min<std::size_t>(35, usage.term_count());
  bundle.pca = pca_baseline_train(usage, pca_dims);

  bundle.config = options.training;
  bundle.autoencoder = options.autoencoder;
  bundle.stage = Stage::kPrepared;
  return bundle;
}

DerivedArtifacts derive_artifacts(const ModelBundle& bundle) {
  DerivedArtifacts artifacts;
  artifacts.usage = build_usage_matrix(bundle.corpus, bundle.split.train);
  artifacts.features = term_features(artifacts.usage);
  artifacts.instances = build_instances(bundle.corpus, bundle.split.train, bundle.negatives,
                                        artifacts.features, bundle.pipeline, bundle.lda);
  return artifacts;
}

void run_pretrain(ModelBundle& bundle, const DerivedArtifacts& artifacts,
                  const std::vector<std::size_t>& hidden, std::uint64_t seed) {
  if (!bundle.pipeline.fitted() || bundle.lda.topic_count() == 0) {
    throw std::runtime_error("stage prerequisite missing");
  }
  Matrix inputs(artifacts.instances.size(), artifacts.instances.front().input.size());
  for (std::size_t i = 0; i < artifacts.instances.size(); ++i) {
    const auto& x = artifacts.instances[i].input;
    std::copy(x.begin(), x.end(), inputs.row(i).begin());
  }
  Rng rng(seed);
  bundle.network = pretrain_layerwise(inputs, hidden, bundle.corpus.vocabulary.size(),
                                      bundle.autoencoder, rng);
  bundle.network_siamese.reset();
  bundle.stage = Stage::kPretrained;
}

namespace {

ValidationScorer make_validation_scorer(const ModelBundle& bundle,
                                        const DerivedArtifacts& artifacts) {
  if (bundle.split.validation.empty()) return {};
  return [&bundle, &artifacts](const Network& net) {
    const CeModel model(net, bundle.lda, bundle.pipeline, artifacts.features);
    return validation_p2(model, bundle.corpus, bundle.split.validation);
  };
}

}  // namespace

void run_train_prediction(ModelBundle& bundle, const DerivedArtifacts& artifacts,
                          std::uint64_t seed, const ProgressSink& progress) {
  if (int(bundle.stage) < int(Stage::kPretrained) || !bundle.network) {
    throw std::runtime_error("stage prerequisite missing");
  }
  Rng rng(seed);
  bundle.network = train_prediction(*bundle.network, artifacts.instances, bundle.config, rng,
                                    make_validation_scorer(bundle, artifacts), progress);
  bundle.network_siamese.reset();
  bundle.stage = Stage::kPrediction;
}

void run_train_siamese(ModelBundle& bundle, const DerivedArtifacts& artifacts, std::uint64_t seed,
                       const ProgressSink& progress) {
  if (int(bundle.stage) < int(Stage::kPrediction) || !bundle.network) {
    throw std::runtime_error("stage prerequisite missing");
  }
  Rng rng(seed);

  std::size_t positives = 0;
  for (const Instance& inst : artifacts.instances) positives += inst.positive;
  const std::size_t per_kind = bundle.config.pairs_per_kind > 0
                                   ? bundle.config.pairs_per_kind
                                   : std::max<std::size_t>(1, positives / 2);
  const std::vector<InstancePair> pairs =
      make_pairs(artifacts.instances, per_kind, bundle.config.sensitivity, rng);

  bundle.network_siamese =
      train_siamese(*bundle.network, artifacts.instances, pairs, bundle.config, rng,
                    make_validation_scorer(bundle, artifacts), progress);
  bundle.stage = Stage::kSiamese;
}

double validation_p2(const CeModel& model, const Corpus& corpus,
                     const std::vector<std::size_t>& doc_ids) {
  const std::size_t k = std::min<std::size_t>(2, model.vocab_size());
  std::vector<double> per_doc(doc_ids.size(), 0.0);
  std::vector<std::size_t> weights(doc_ids.size(), 0);
  parallel_for(doc_ids.size(), [&](std::size_t i) {
    const Document& doc = corpus.documents[doc_ids[i]];
    const Matrix distances = model.context_distances(doc, doc.term_ids);
    double total = 0.0;
    for (std::size_t q = 0; q < doc.term_ids.size(); ++q) {
      total += p_at_k(rank_from_distances(distances.row(q), model.farthest_first()), doc, k);
    }
    per_doc[i] = total;
    weights[i] = doc.term_ids.size();
  });
  double total = 0.0;
  std::size_t queries = 0;
  for (std::size_t i = 0; i < per_doc.size(); ++i) {
    total += per_doc[i];
    queries += weights[i];
  }
  return queries == 0 ? 0.0 : total / double(queries);
}

EvalModel parse_eval_model(const std::string& name) {
  if (name == "siamese-ce") return EvalModel::kSiameseCe;
  if (name == "ce") return EvalModel::kCe;
  if (name == "pca") return EvalModel::kPca;
  if (name == "lsa") return EvalModel::kLsa;
  if (name == "lda-kl") return EvalModel::kLdaKl;
  if (name == "random") return EvalModel::kRandom;
  throw std::invalid_argument("unknown model: " + name);
}

const char* eval_model_name(EvalModel model) {
  switch (model) {
    case EvalModel::kSiameseCe: return "siamese-ce";
    case EvalModel::kCe: return "ce";
    case EvalModel::kPca: return "pca";
    case EvalModel::kLsa: return "lsa";
    case EvalModel::kLdaKl: return "lda-kl";
    case EvalModel::kRandom: return "random";
  }
  return "?";
}

namespace {

const Network& network_for(const ModelBundle& bundle, EvalModel model) {
  if (model == EvalModel::kSiameseCe) {
    if (!bundle.network_siamese) throw std::runtime_error("stage prerequisite missing");
    return *bundle.network_siamese;
  }
  if (int(bundle.stage) < int(Stage::kPrediction) || !bundle.network) {
    throw std::runtime_error("stage prerequisite missing");
  }
  return *bundle.network;
}

std::unique_ptr<DistanceModel> build_distance_model(const ModelBundle& bundle,
                                                    const DerivedArtifacts& artifacts,
                                                    EvalModel which) {
  switch (which) {
    case EvalModel::kSiameseCe:
    case EvalModel::kCe:
      return std::make_unique<CeModel>(network_for(bundle, which), bundle.lda, bundle.pipeline,
                                       artifacts.features);
    case EvalModel::kPca:
      if (!bundle.pca) throw std::runtime_error("stage prerequisite missing");
      return std::make_unique<TableModel>(*bundle.pca);
    case EvalModel::kLsa:
      if (!bundle.lsa) throw std::runtime_error("stage prerequisite missing");
      return std::make_unique<TableModel>(*bundle.lsa);
    case EvalModel::kLdaKl:
      if (bundle.lda.topic_count() == 0) throw std::runtime_error("stage prerequisite missing");
      return std::make_unique<LdaKlModel>(bundle.lda);
    case EvalModel::kRandom:
      return nullptr;
  }
  return nullptr;
}

}  // namespace

EvalResult evaluate_documents(const ModelBundle& bundle, const DerivedArtifacts& artifacts,
                              const std::vector<Document>& documents,
                              const EvalOptions& options) {
  const std::size_t vocab = bundle.corpus.vocabulary.size();
  const std::unique_ptr<DistanceModel> model =
      build_distance_model(bundle, artifacts, options.model);

  const bool extended = options.protocol == Protocol::kExtended;
  std::vector<std::vector<QueryRecord>> per_doc(documents.size());
  parallel_for(documents.size(), [&](std::size_t d) {
    const Document& truth = documents[d];
    if (truth.cardinality() == 0) return;
    if (extended && truth.cardinality() < 2) return;

    Rng rng(mix_seed(options.seed, d));
    Document context = truth;
    if (options.missing_rate > 0.0) {
      Document corrupted = corrupt_document(truth, options.missing_rate, rng).document;
      if (!extended || corrupted.cardinality() >= 2) context = std::move(corrupted);
    }

    std::vector<QueryRecord>& records = per_doc[d];
    const std::string doc_tag = "d" + std::to_string(d);
    if (extended) {
      RankedList list = options.model == EvalModel::kRandom
                            ? random_rank(vocab, rng)
                            : extended_prime(*model, context);
      records.push_back({doc_tag, evaluate_query(list, truth, options.k_values)});
      return;
    }

    if (options.model == EvalModel::kRandom) {
      for (TermId term : truth.term_ids) {
        records.push_back({doc_tag + ":" + bundle.corpus.vocabulary.term(term),
                           evaluate_query(random_rank(vocab, rng), truth, options.k_values)});
      }
      return;
    }

    const Matrix distances = model->context_distances(context, truth.term_ids);
    for (std::size_t q = 0; q < truth.term_ids.size(); ++q) {
      RankedList list = rank_from_distances(distances.row(q), model->farthest_first());
      records.push_back({doc_tag + ":" + bundle.corpus.vocabulary.term(truth.term_ids[q]),
                         evaluate_query(list, truth, options.k_values)});
    }
  });

  EvalResult result;
  std::vector<QueryMetrics> metrics;
  for (auto& records : per_doc) {
    for (auto& record : records) {
      metrics.push_back(record.metrics);
      result.queries.push_back(std::move(record));
    }
  }
  result.report = aggregate_metrics(metrics);
  return result;
}

EvalResult evaluate_prime_queries(const ModelBundle& bundle, const DerivedArtifacts& artifacts,
                                  const std::vector<PrimeQuery>& queries,
                                  const EvalOptions& options) {
  const std::size_t vocab = bundle.corpus.vocabulary.size();
  const std::unique_ptr<DistanceModel> model =
      build_distance_model(bundle, artifacts, options.model);

  std::vector<QueryRecord> records(queries.size());
  parallel_for(queries.size(), [&](std::size_t i) {
    const PrimeQuery& query = queries[i];
    Rng rng(mix_seed(options.seed, i));
    Document context = query.document;
    if (options.missing_rate > 0.0) {
      context = corrupt_document(context, options.missing_rate, rng).document;
    }
    RankedList list = options.model == EvalModel::kRandom
                          ? random_rank(vocab, rng)
                          : prime(*model, query.term, context);
    records[i] = {"q" + std::to_string(i) + ":" + bundle.corpus.vocabulary.term(query.term),
                  evaluate_query(list, query.document, options.k_values)};
  });

  EvalResult result;
  std::vector<QueryMetrics> metrics;
  metrics.reserve(records.size());
  for (auto& record : records) metrics.push_back(record.metrics);
  result.queries = std::move(records);
  result.report = aggregate_metrics(metrics);
  return result;
}

EvalResult evaluate_split(const ModelBundle& bundle, const DerivedArtifacts& artifacts,
                          const std::string& split_name, const EvalOptions& options) {
  const std::vector<std::size_t>* ids = nullptr;
  if (split_name == "train") ids = &bundle.split.train;
  else if (split_name == "validation") ids = &bundle.split.validation;
  else if (split_name == "test") ids = &bundle.split.test;
  else throw std::invalid_argument("unknown split: " + split_name);

  std::vector<Document> documents;
  documents.reserve(ids->size());
  for (std::size_t id : *ids) documents.push_back(bundle.corpus.documents[id]);
  return evaluate_documents(bundle, artifacts, documents, options);
}

void write_pr_csv(const MetricsReport& report, std::ostream& out) {
  out << "recall_level,precision\n";
  for (std::size_t level = 0; level < kRecallLevels; ++level) {
    char line[64];
    std::snprintf(line, sizeof line, "%.1f,%.17g\n", double(level) / 10.0,
                  report.precision[level]);
    out << line;
  }
}

}  // namespace ce
