#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ce/oov.hpp"
#include "ce/pipeline.hpp"

namespace {

using nlohmann::json;

struct RecordWriter {
  std::unique_ptr<std::ofstream> file;
  std::ostream* out = &std::cout;

  void open(const std::string& path) {
    if (path.empty()) return;
    file = std::make_unique<std::ofstream>(path);
    if (!*file) throw std::runtime_error("cannot open output file: " + path);
    out = file.get();
  }

  void emit(const json& record) { (*out) << record.dump() << "\n"; }
};

std::vector<std::string> tab_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, '\t')) {
    const auto from = field.find_first_not_of(" \t\r");
    const auto to = field.find_last_not_of(" \t\r");
    if (from == std::string::npos) continue;
    fields.push_back(field.substr(from, to - from + 1));
  }
  return fields;
}

std::vector<std::vector<std::string>> read_query_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open query file: " + path);
  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (std::getline(in, line)) {
    auto fields = tab_fields(line);
    if (!fields.empty()) lines.push_back(std::move(fields));
  }
  return lines;
}

ce::Document resolve_terms(const ce::Vocabulary& vocab, std::span<const std::string> names) {
  std::vector<ce::TermId> ids;
  for (const std::string& name : names) {
    if (auto id = vocab.find(name)) ids.push_back(*id);
  }
  return ce::make_document(std::move(ids));
}

const ce::Network& pick_network(const ce::ModelBundle& bundle, const std::string& net) {
  if (net == "siamese-ce" || (net == "auto" && bundle.network_siamese)) {
    if (!bundle.network_siamese) throw std::runtime_error("stage prerequisite missing");
    return *bundle.network_siamese;
  }
  if (int(bundle.stage) < int(ce::Stage::kPrediction) || !bundle.network) {
    throw std::runtime_error("stage prerequisite missing");
  }
  return *bundle.network;
}

json ranking_json(const ce::ModelBundle& bundle, const ce::RankedList& list, std::size_t top) {
  json terms = json::array();
  json distances = json::array();
  const std::size_t n = std::min(top, list.order.size());
  for (std::size_t i = 0; i < n; ++i) {
    terms.push_back(bundle.corpus.vocabulary.term(list.order[i]));
    distances.push_back(list.distances[i]);
  }
  return json{{"terms", std::move(terms)}, {"distances", std::move(distances)}};
}

void emit_eval_result(const ce::EvalResult& result, const ce::EvalOptions& options,
                      const std::string& protocol, RecordWriter& writer) {
  for (const ce::QueryRecord& record : result.queries) {
    json p_at = json::object();
    for (const auto& [k, v] : record.metrics.p_at) p_at[std::to_string(k)] = v;
    writer.emit(json{{"type", "query"},
                     {"id", record.id},
                     {"ap", record.metrics.ap},
                     {"p_at", std::move(p_at)},
                     {"auc", record.metrics.curve.auc}});
  }
  json p_at = json::object();
  for (const auto& [k, v] : result.report.p_at) p_at[std::to_string(k)] = v;
  writer.emit(json{{"type", "summary"},
                   {"model", ce::eval_model_name(options.model)},
                   {"protocol", protocol},
                   {"queries", result.report.query_count},
                   {"map", result.report.map},
                   {"auc", result.report.auc},
                   {"p_at", std::move(p_at)},
                   {"precision_at_recall", result.report.precision}});
}

ce::ProgressSink progress_sink(RecordWriter& writer) {
  return [&writer](const ce::ProgressRecord& record) {
    json j{{"type", "progress"},
           {"stage", record.stage},
           {"epoch", record.epoch},
           {"loss", record.loss},
           {"learning_rate", record.learning_rate}};
    if (record.evaluated) j["validation_p2"] = record.validation_p2;
    writer.emit(j);
  };
}

struct CommonFlags {
  std::string config_path;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--seed", flags.seed, "Seed for every randomized step");
  cmd->add_option("--config", flags.config_path, "key=value configuration file");
  cmd->add_option("--set", flags.overrides, "Inline config override key=value (repeatable)");
  cmd->add_option("--out", flags.out_path, "Write records here instead of stdout");
}

void apply_flags(ce::PipelineOptions& options, const CommonFlags& flags) {
  if (!flags.config_path.empty()) ce::apply_options_file(options, flags.config_path);
  for (const std::string& entry : flags.overrides) {
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("override needs key=value: " + entry);
    ce::apply_option(options, entry.substr(0, eq), entry.substr(eq + 1));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contextualized concept embeddings of co-occurring descriptive terms"};
  app.require_subcommand(1);

  try {
    // ---------------------------------------------------------------- ingest
    auto* ingest = app.add_subcommand("ingest", "Parse a corpus file and report statistics");
    std::string ingest_corpus;
    CommonFlags ingest_flags;
    ingest->add_option("--corpus", ingest_corpus, "TAB-delimited corpus file")->required();
    add_common(ingest, ingest_flags);
    ingest->callback([&] {
      const ce::Corpus corpus = ce::parse_corpus_file(ingest_corpus);
      std::size_t min_m = corpus.documents.front().cardinality(), max_m = min_m, total = 0;
      for (const ce::Document& doc : corpus.documents) {
        min_m = std::min(min_m, doc.cardinality());
        max_m = std::max(max_m, doc.cardinality());
        total += doc.cardinality();
      }
      RecordWriter writer;
      writer.open(ingest_flags.out_path);
      writer.emit(json{{"type", "ingest"},
                       {"documents", corpus.documents.size()},
                       {"vocabulary", corpus.vocabulary.size()},
                       {"min_cardinality", min_m},
                       {"max_cardinality", max_m},
                       {"mean_cardinality", double(total) / double(corpus.documents.size())}});
    });

    // ----------------------------------------------------------------- synth
    auto* synth = app.add_subcommand("synth", "Generate a planted-topic synthetic corpus");
    ce::SyntheticConfig synth_cfg;
    std::string synth_out;
    std::uint64_t synth_seed = 0;
    synth->add_option("--topics", synth_cfg.topics, "Latent topic count");
    synth->add_option("--vocab", synth_cfg.vocab_size, "Vocabulary size");
    synth->add_option("--docs", synth_cfg.documents, "Document count");
    synth->add_option("--min-cardinality", synth_cfg.min_cardinality, "Smallest document");
    synth->add_option("--max-cardinality", synth_cfg.max_cardinality, "Largest document");
    synth->add_option("--polysemy", synth_cfg.polysemy_pairs, "Terms shared between two topics");
    synth->add_option("--seed", synth_seed, "Generator seed");
    synth->add_option("--out", synth_out, "Corpus file to write")->required();
    synth->callback([&] {
      ce::Rng rng(synth_seed);
      const ce::SyntheticCorpus result = ce::generate_synthetic_corpus(synth_cfg, rng);
      std::ofstream corpus_out(synth_out);
      if (!corpus_out) throw std::runtime_error("cannot open output file: " + synth_out);
      ce::write_corpus(result.corpus, corpus_out);
      std::ofstream truth_out(synth_out + ".topics");
      if (!truth_out) throw std::runtime_error("cannot open output file: " + synth_out + ".topics");
      for (std::size_t d = 0; d < result.doc_topics.size(); ++d) {
        truth_out << d << '\t' << result.doc_topics[d] << '\n';
      }
    });

    // ------------------------------------------------------------------- lda
    auto* lda = app.add_subcommand(
        "lda", "Split the corpus, fit features, train the topic model and baselines");
    std::string lda_corpus, lda_bundle;
    CommonFlags lda_flags;
    lda->add_option("--corpus", lda_corpus, "TAB-delimited corpus file")->required();
    lda->add_option("--bundle", lda_bundle, "Model bundle to write")->required();
    add_common(lda, lda_flags);
    lda->callback([&] {
      ce::PipelineOptions options;
      apply_flags(options, lda_flags);
      ce::ModelBundle bundle =
          ce::prepare_bundle(ce::parse_corpus_file(lda_corpus), options, lda_flags.seed);
      ce::save_model(bundle, lda_bundle);
      RecordWriter writer;
      writer.open(lda_flags.out_path);
      writer.emit(json{{"type", "stage"},
                       {"stage", "lda"},
                       {"vocabulary", bundle.corpus.vocabulary.size()},
                       {"documents", bundle.corpus.documents.size()},
                       {"train", bundle.split.train.size()},
                       {"validation", bundle.split.validation.size()},
                       {"test", bundle.split.test.size()},
                       {"topics", bundle.lda.topic_count()}});
    });

    // -------------------------------------------------------------- pretrain
    auto* pretrain = app.add_subcommand("pretrain", "Layer-wise autoencoder initialization");
    std::string pretrain_bundle, pretrain_hidden;
    CommonFlags pretrain_flags;
    pretrain->add_option("--bundle", pretrain_bundle, "Model bundle (updated in place)")
        ->required();
    pretrain->add_option("--hidden", pretrain_hidden, "Hidden layer widths, e.g. 100,100,10");
    add_common(pretrain, pretrain_flags);
    pretrain->callback([&] {
      ce::ModelBundle bundle = ce::load_model(pretrain_bundle);
      ce::PipelineOptions options;
      options.training = bundle.config;
      options.autoencoder = bundle.autoencoder;
      apply_flags(options, pretrain_flags);
      if (!pretrain_hidden.empty()) {
        ce::apply_option(options, "hidden", pretrain_hidden);
      }
      bundle.config = options.training;
      bundle.autoencoder = options.autoencoder;
      const ce::DerivedArtifacts artifacts = ce::derive_artifacts(bundle);
      ce::run_pretrain(bundle, artifacts, options.hidden, pretrain_flags.seed);
      ce::save_model(bundle, pretrain_bundle);
      RecordWriter writer;
      writer.open(pretrain_flags.out_path);
      writer.emit(
          json{{"type", "stage"}, {"stage", "pretrain"}, {"layers", bundle.network->layer_sizes}});
    });

    // --------------------------------------------------------- train-predict
    auto* train_predict =
        app.add_subcommand("train-predict", "Stage-one prediction training (SGD)");
    std::string tp_bundle;
    CommonFlags tp_flags;
    train_predict->add_option("--bundle", tp_bundle, "Model bundle (updated in place)")
        ->required();
    add_common(train_predict, tp_flags);
    train_predict->callback([&] {
      ce::ModelBundle bundle = ce::load_model(tp_bundle);
      ce::PipelineOptions options;
      options.training = bundle.config;
      options.autoencoder = bundle.autoencoder;
      apply_flags(options, tp_flags);
      bundle.config = options.training;
      const ce::DerivedArtifacts artifacts = ce::derive_artifacts(bundle);
      RecordWriter writer;
      writer.open(tp_flags.out_path);
      ce::run_train_prediction(bundle, artifacts, tp_flags.seed, progress_sink(writer));
      ce::save_model(bundle, tp_bundle);
      writer.emit(json{{"type", "stage"}, {"stage", "train-predict"}});
    });

    // --------------------------------------------------------- train-siamese
    auto* train_siamese =
        app.add_subcommand("train-siamese", "Stage-two distance training (SGD over pairs)");
    std::string ts_bundle;
    CommonFlags ts_flags;
    train_siamese->add_option("--bundle", ts_bundle, "Model bundle (updated in place)")
        ->required();
    add_common(train_siamese, ts_flags);
    train_siamese->callback([&] {
      ce::ModelBundle bundle = ce::load_model(ts_bundle);
      ce::PipelineOptions options;
      options.training = bundle.config;
      options.autoencoder = bundle.autoencoder;
      apply_flags(options, ts_flags);
      bundle.config = options.training;
      const ce::DerivedArtifacts artifacts = ce::derive_artifacts(bundle);
      RecordWriter writer;
      writer.open(ts_flags.out_path);
      ce::run_train_siamese(bundle, artifacts, ts_flags.seed, progress_sink(writer));
      ce::save_model(bundle, ts_bundle);
      writer.emit(json{{"type", "stage"}, {"stage", "train-siamese"}});
    });

    // ----------------------------------------------------------------- embed
    auto* embed = app.add_subcommand("embed", "Concept embeddings for term+context queries");
    std::string embed_bundle, embed_queries, embed_net = "auto";
    CommonFlags embed_flags;
    embed->add_option("--bundle", embed_bundle, "Model bundle")->required();
    embed->add_option("--queries", embed_queries, "Lines of term<TAB>ctx1<TAB>ctx2...")
        ->required();
    embed->add_option("--net", embed_net, "auto | ce | siamese-ce");
    add_common(embed, embed_flags);
    embed->callback([&] {
      const ce::ModelBundle bundle = ce::load_model(embed_bundle);
      const ce::DerivedArtifacts artifacts = ce::derive_artifacts(bundle);
      const ce::CeModel model(pick_network(bundle, embed_net), bundle.lda, bundle.pipeline,
                              artifacts.features);
      RecordWriter writer;
      writer.open(embed_flags.out_path);
      for (const auto& fields : read_query_lines(embed_queries)) {
        const auto term = bundle.corpus.vocabulary.find(fields.front());
        if (!term) throw std::runtime_error("term outside vocabulary: " + fields.front());
        ce::Document doc = resolve_terms(bundle.corpus.vocabulary, fields);
        writer.emit(json{{"type", "embedding"},
                         {"term", fields.front()},
                         {"embedding", model.embed(*term, doc)}});
      }
    });

    // ----------------------------------------------------------------- prime
    auto* prime = app.add_subcommand("prime", "Rank the vocabulary against query concepts");
    std::string prime_bundle, prime_queries, prime_net = "auto";
    std::size_t prime_top = 10;
    CommonFlags prime_flags;
    prime->add_option("--bundle", prime_bundle, "Model bundle")->required();
    prime->add_option("--queries", prime_queries, "Lines of term<TAB>ctx1<TAB>ctx2...")
        ->required();
    prime->add_option("--net", prime_net, "auto | ce | siamese-ce");
    prime->add_option("--top", prime_top, "Entries to print per ranking");
    add_common(prime, prime_flags);
    prime->callback([&] {
      const ce::ModelBundle bundle = ce::load_model(prime_bundle);
      const ce::DerivedArtifacts artifacts = ce::derive_artifacts(bundle);
      const ce::CeModel model(pick_network(bundle, prime_net), bundle.lda, bundle.pipeline,
                              artifacts.features);
      RecordWriter writer;
      writer.open(prime_flags.out_path);
      for (const auto& fields : read_query_lines(prime_queries)) {
        const auto term = bundle.corpus.vocabulary.find(fields.front());
        if (!term) throw std::runtime_error("term outside vocabulary: " + fields.front());
        const ce::Document doc = resolve_terms(bundle.corpus.vocabulary, fields);
        json record = ranking_json(bundle, ce::prime(model, *term, doc), prime_top);
        record["type"] = "ranking";
        record["term"] = fields.front();
        writer.emit(record);
      }
    });

    // ---------------------------------------------------------------- eprime
    auto* eprime = app.add_subcommand("eprime", "Document-level extended priming");
    std::string eprime_bundle, eprime_queries, eprime_net = "auto";
    std::size_t eprime_top = 10;
    CommonFlags eprime_flags;
    eprime->add_option("--bundle", eprime_bundle, "Model bundle")->required();
    eprime->add_option("--queries", eprime_queries, "Lines of ctx1<TAB>ctx2...")->required();
    eprime->add_option("--net", eprime_net, "auto | ce | siamese-ce");
    eprime->add_option("--top", eprime_top, "Entries to print per ranking");
    add_common(eprime, eprime_flags);
    eprime->callback([&] {
      const ce::ModelBundle bundle = ce::load_model(eprime_bundle);
      const ce::DerivedArtifacts artifacts = ce::derive_artifacts(bundle);
      const ce::CeModel model(pick_network(bundle, eprime_net), bundle.lda, bundle.pipeline,
                              artifacts.features);
      RecordWriter writer;
      writer.open(eprime_flags.out_path);
      std::size_t index = 0;
      for (const auto& fields : read_query_lines(eprime_queries)) {
        const ce::Document doc = resolve_terms(bundle.corpus.vocabulary, fields);
        json record = ranking_json(bundle, ce::extended_prime(model, doc), eprime_top);
        record["type"] = "ranking";
        record["query"] = "q" + std::to_string(index++);
        writer.emit(record);
      }
    });

    // ------------------------------------------------------------- oov-embed
    auto* oov = app.add_subcommand("oov-embed", "Embed out-of-vocabulary terms");
    std::string oov_bundle, oov_queries, oov_corpus, oov_method = "concept";
    std::size_t oov_rank = 0;
    CommonFlags oov_flags;
    oov->add_option("--bundle", oov_bundle, "Model bundle")->required();
    oov->add_option("--queries", oov_queries, "Lines of oov_term<TAB>ctx1<TAB>ctx2...")
        ->required();
    oov->add_option("--method", oov_method, "feature | concept");
    oov->add_option("--oov-corpus", oov_corpus,
                    "Corpus of test documents containing the OOV terms (feature method)");
    oov->add_option("--rank", oov_rank, "Also print this many primed terms");
    add_common(oov, oov_flags);
    oov->callback([&] {
      if (oov_method != "feature" && oov_method != "concept") {
        throw std::invalid_argument("unknown method: " + oov_method);
      }
      const ce::ModelBundle bundle = ce::load_model(oov_bundle);
      const ce::DerivedArtifacts artifacts = ce::derive_artifacts(bundle);
      const ce::CeModel model(pick_network(bundle, "auto"), bundle.lda, bundle.pipeline,
                              artifacts.features);

      std::vector<std::vector<std::string>> extra_docs;
      if (!oov_corpus.empty()) {
        std::ifstream in(oov_corpus);
        if (!in) throw std::runtime_error("cannot open corpus file: " + oov_corpus);
        std::string line;
        while (std::getline(in, line)) {
          auto fields = tab_fields(line);
          if (!fields.empty()) extra_docs.push_back(std::move(fields));
        }
      }

      RecordWriter writer;
      writer.open(oov_flags.out_path);
      for (const auto& fields : read_query_lines(oov_queries)) {
        const std::string& oov_term = fields.front();
        if (bundle.corpus.vocabulary.find(oov_term)) {
          throw std::runtime_error("OOV term in training vocabulary: " + oov_term);
        }
        const ce::Document context =
            resolve_terms(bundle.corpus.vocabulary,
                          std::span<const std::string>(fields).subspan(1));
        if (context.term_ids.empty()) throw std::runtime_error("no in-vocabulary context");

        json record{{"type", "oov"}, {"term", oov_term}, {"method", oov_method}};
        std::vector<double> embedding;
        bool farthest = false;
        if (oov_method == "concept") {
          embedding = ce::oov_concept_embed(model, context);
        } else {
          std::vector<ce::OovDocument> docs;
          for (const auto& doc_fields : extra_docs) {
            ce::OovDocument doc;
            for (const std::string& name : doc_fields) {
              if (name == oov_term) doc.contains_oov = true;
              else if (auto id = bundle.corpus.vocabulary.find(name)) doc.iv_terms.push_back(*id);
            }
            std::sort(doc.iv_terms.begin(), doc.iv_terms.end());
            doc.iv_terms.erase(std::unique(doc.iv_terms.begin(), doc.iv_terms.end()),
                               doc.iv_terms.end());
            docs.push_back(std::move(doc));
          }
          const ce::OovEmbedding result =
              ce::oov_feature_embed(model, bundle.corpus, bundle.split.train, docs, context);
          embedding = result.embedding;
          farthest = result.farthest_first;
        }
        record["embedding"] = embedding;
        record["farthest_first"] = farthest;
        if (oov_rank > 0) {
          const ce::RankedList list = model.prime_embedding(embedding, context, farthest);
          record["ranking"] = ranking_json(bundle, list, oov_rank);
        }
        writer.emit(record);
      }
    });

    // ------------------------------------------------------------------ eval
    auto* eval = app.add_subcommand("eval", "Priming metrics for a model over documents");
    std::string eval_bundle, eval_model = "siamese-ce", eval_protocol = "prime";
    std::string eval_split = "train", eval_queries, eval_k = "1,2,3,5,10", eval_pr_csv;
    double eval_missing = 0.0;
    CommonFlags eval_flags;
    eval->add_option("--bundle", eval_bundle, "Model bundle")->required();
    eval->add_option("--model", eval_model, "siamese-ce | ce | pca | lsa | lda-kl | random");
    eval->add_option("--protocol", eval_protocol, "prime | eprime");
    eval->add_option("--split", eval_split, "train | validation | test");
    eval->add_option("--queries", eval_queries, "Query file instead of a split");
    eval->add_option("--missing-rate", eval_missing, "Context corruption rate in [0, 0.5]");
    eval->add_option("--k", eval_k, "P@K values, comma separated");
    eval->add_option("--pr-csv", eval_pr_csv, "Write the 11-point curve as CSV");
    add_common(eval, eval_flags);
    eval->callback([&] {
      const ce::ModelBundle bundle = ce::load_model(eval_bundle);
      const ce::DerivedArtifacts artifacts = ce::derive_artifacts(bundle);

      ce::EvalOptions options;
      options.model = ce::parse_eval_model(eval_model);
      options.missing_rate = eval_missing;
      options.seed = eval_flags.seed;
      options.k_values.clear();
      {
        std::stringstream ss(eval_k);
        std::string field;
        while (std::getline(ss, field, ',')) {
          if (!field.empty()) options.k_values.push_back(std::stoull(field));
        }
      }
      if (eval_protocol == "prime") options.protocol = ce::Protocol::kPrime;
      else if (eval_protocol == "eprime") options.protocol = ce::Protocol::kExtended;
      else throw std::invalid_argument("unknown protocol: " + eval_protocol);

      ce::EvalResult result;
      if (!eval_queries.empty()) {
        if (options.protocol == ce::Protocol::kPrime) {
          std::vector<ce::PrimeQuery> queries;
          for (const auto& fields : read_query_lines(eval_queries)) {
            const auto term = bundle.corpus.vocabulary.find(fields.front());
            if (!term) throw std::runtime_error("term outside vocabulary: " + fields.front());
            queries.push_back({*term, resolve_terms(bundle.corpus.vocabulary, fields)});
          }
          result = ce::evaluate_prime_queries(bundle, artifacts, queries, options);
        } else {
          std::vector<ce::Document> documents;
          for (const auto& fields : read_query_lines(eval_queries)) {
            documents.push_back(resolve_terms(bundle.corpus.vocabulary, fields));
          }
          result = ce::evaluate_documents(bundle, artifacts, documents, options);
        }
      } else {
        result = ce::evaluate_split(bundle, artifacts, eval_split, options);
      }

      RecordWriter writer;
      writer.open(eval_flags.out_path);
      emit_eval_result(result, options, eval_protocol, writer);
      if (!eval_pr_csv.empty()) {
        std::ofstream csv(eval_pr_csv);
        if (!csv) throw std::runtime_error("cannot open output file: " + eval_pr_csv);
        ce::write_pr_csv(result.report, csv);
      }
    });

    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
