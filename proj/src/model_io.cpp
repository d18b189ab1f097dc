#include "ce/model_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ce {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

Matrix matrix_from_json(const json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const json& rows = j.at("data");
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = rows.at(r).get<std::vector<double>>();
    if (row.size() != m.cols()) throw std::runtime_error("corrupt model file");
    std::copy(row.begin(), row.end(), m.row(r).begin());
  }
  return m;
}

json network_to_json(const Network& net) {
  json layers = json::array();
  for (const Layer& layer : net.layers) {
    layers.push_back(json{{"weights", matrix_to_json(layer.weights)}, {"bias", layer.bias}});
  }
  return json{{"layer_sizes", net.layer_sizes}, {"layers", std::move(layers)}};
}

Network network_from_json(const json& j) {
  Network net;
  net.layer_sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
  for (const json& layer : j.at("layers")) {
    net.layers.push_back(
        {matrix_from_json(layer.at("weights")), layer.at("bias").get<std::vector<double>>()});
  }
  return net;
}

json config_to_json(const TrainingConfig& c) {
  return json{{"learning_rate", c.learning_rate},
              {"decay_factor", c.decay_factor},
              {"decay_period", c.decay_period},
              {"batch_size", c.batch_size},
              {"siamese_weight", c.siamese_weight},
              {"scale", c.scale},
              {"importance", c.importance},
              {"sensitivity", c.sensitivity},
              {"eval_period", c.eval_period},
              {"stop_threshold", c.stop_threshold},
              {"max_epochs", c.max_epochs},
              {"pairs_per_kind", c.pairs_per_kind},
              {"swap_kappa", c.swap_kappa}};
}

TrainingConfig config_from_json(const json& j) {
  TrainingConfig c;
  c.learning_rate = j.at("learning_rate").get<double>();
  c.decay_factor = j.at("decay_factor").get<double>();
  c.decay_period = j.at("decay_period").get<int>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.siamese_weight = j.at("siamese_weight").get<double>();
  c.scale = j.at("scale").get<double>();
  c.importance = j.at("importance").get<double>();
  c.sensitivity = j.at("sensitivity").get<double>();
  c.eval_period = j.at("eval_period").get<int>();
  c.stop_threshold = j.at("stop_threshold").get<double>();
  c.max_epochs = j.at("max_epochs").get<int>();
  c.pairs_per_kind = j.at("pairs_per_kind").get<std::size_t>();
  c.swap_kappa = j.at("swap_kappa").get<bool>();
  return c;
}

}  // namespace

void validate_bundle(const ModelBundle& bundle) {
  const std::size_t vocab = bundle.corpus.vocabulary.size();
  if (vocab == 0 || bundle.corpus.documents.empty()) {
    throw std::invalid_argument("inconsistent model bundle: empty corpus");
  }
  for (const Document& doc : bundle.corpus.documents) {
    for (TermId t : doc.term_ids) {
      if (t >= vocab) throw std::invalid_argument("inconsistent model bundle: document term");
    }
  }
  if (bundle.pipeline.fitted() && bundle.pipeline.dimension() != vocab) {
    throw std::invalid_argument("inconsistent model bundle: pipeline dimension");
  }
  if (bundle.lda.topic_count() > 0 && bundle.lda.vocab_size() != vocab) {
    throw std::invalid_argument("inconsistent model bundle: topic model vocabulary");
  }
  const auto check_net = [&](const Network& net) {
    if (net.input_dim() != bundle.pipeline.dimension() + bundle.lda.topic_count()) {
      throw std::invalid_argument("inconsistent model bundle: network input dimension");
    }
    if (net.output_dim() != vocab) {
      throw std::invalid_argument("inconsistent model bundle: network output dimension");
    }
  };
  if (bundle.network) check_net(*bundle.network);
  if (bundle.network_siamese) check_net(*bundle.network_siamese);
  for (const NegativePair& neg : bundle.negatives) {
    if (neg.term >= vocab || neg.doc >= bundle.corpus.documents.size()) {
      throw std::invalid_argument("inconsistent model bundle: negative pair");
    }
  }
}

std::string serialize_model(const ModelBundle& bundle) {
  validate_bundle(bundle);

  json j;
  j["format"] = kModelFormatTag;
  j["stage"] = int(bundle.stage);
  j["vocabulary"] = bundle.corpus.vocabulary.terms();

  json docs = json::array();
  for (const Document& doc : bundle.corpus.documents) docs.push_back(doc.term_ids);
  j["documents"] = std::move(docs);

  j["split"] = json{{"train", bundle.split.train},
                    {"validation", bundle.split.validation},
                    {"test", bundle.split.test}};

  json negs = json::array();
  for (const NegativePair& n : bundle.negatives) negs.push_back(json::array({n.term, n.doc}));
  j["negatives"] = std::move(negs);

  if (bundle.pipeline.fitted()) {
    j["pipeline"] = json{{"mean", bundle.pipeline.mean()},
                         {"basis", matrix_to_json(bundle.pipeline.basis())},
                         {"low", bundle.pipeline.low()},
                         {"high", bundle.pipeline.high()}};
  }
  if (bundle.lda.topic_count() > 0) {
    j["lda"] = json{{"alpha", bundle.lda.alpha()},
                    {"beta", bundle.lda.beta()},
                    {"topic_term", matrix_to_json(bundle.lda.topic_term())},
                    {"topic_prior", bundle.lda.topic_prior()}};
  }
  if (bundle.network) j["network"] = network_to_json(*bundle.network);
  if (bundle.network_siamese) j["network_siamese"] = network_to_json(*bundle.network_siamese);
  if (bundle.lsa) j["lsa"] = matrix_to_json(bundle.lsa->vectors);
  if (bundle.pca) j["pca"] = matrix_to_json(bundle.pca->vectors);

  j["config"] = config_to_json(bundle.config);
  j["autoencoder"] = json{{"sparsity_weight", bundle.autoencoder.sparsity_weight},
                          {"sparsity_epsilon", bundle.autoencoder.sparsity_epsilon},
                          {"weight_decay", bundle.autoencoder.weight_decay},
                          {"max_iterations", bundle.autoencoder.max_iterations}};
  return j.dump();
}

ModelBundle deserialize_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception&) {
    throw std::runtime_error("corrupt model file");
  }

  try {
    if (!j.contains("format") || j.at("format").get<std::string>() != kModelFormatTag) {
      throw std::runtime_error("unsupported model version");
    }

    ModelBundle bundle;
    bundle.stage = Stage(j.at("stage").get<int>());
    for (const auto& term : j.at("vocabulary")) {
      bundle.corpus.vocabulary.intern(term.get<std::string>());
    }
    for (const auto& doc : j.at("documents")) {
      bundle.corpus.documents.push_back(Document{doc.get<std::vector<TermId>>()});
    }
    bundle.split.train = j.at("split").at("train").get<std::vector<std::size_t>>();
    bundle.split.validation = j.at("split").at("validation").get<std::vector<std::size_t>>();
    bundle.split.test = j.at("split").at("test").get<std::vector<std::size_t>>();
    for (const auto& n : j.at("negatives")) {
      bundle.negatives.push_back({n.at(0).get<TermId>(), n.at(1).get<std::size_t>()});
    }
    if (j.contains("pipeline")) {
      const json& p = j.at("pipeline");
      bundle.pipeline = FeaturePipeline::from_parts(
          p.at("mean").get<std::vector<double>>(), matrix_from_json(p.at("basis")),
          p.at("low").get<std::vector<double>>(), p.at("high").get<std::vector<double>>());
    }
    if (j.contains("lda")) {
      const json& l = j.at("lda");
      bundle.lda = LdaModel(matrix_from_json(l.at("topic_term")),
                            l.at("topic_prior").get<std::vector<double>>(),
                            l.at("alpha").get<double>(), l.at("beta").get<double>());
    }
    if (j.contains("network")) bundle.network = network_from_json(j.at("network"));
    if (j.contains("network_siamese")) {
      bundle.network_siamese = network_from_json(j.at("network_siamese"));
    }
    if (j.contains("lsa")) bundle.lsa = EmbeddingTable{matrix_from_json(j.at("lsa"))};
    if (j.contains("pca")) bundle.pca = EmbeddingTable{matrix_from_json(j.at("pca"))};
    bundle.config = config_from_json(j.at("config"));
    const json& ae = j.at("autoencoder");
    bundle.autoencoder.sparsity_weight = ae.at("sparsity_weight").get<double>();
    bundle.autoencoder.sparsity_epsilon = ae.at("sparsity_epsilon").get<double>();
    bundle.autoencoder.weight_decay = ae.at("weight_decay").get<double>();
    bundle.autoencoder.max_iterations = ae.at("max_iterations").get<int>();

    validate_bundle(bundle);
    return bundle;
  } catch (const json::exception&) {
    throw std::runtime_error("corrupt model file");
  }
}

void save_model(const ModelBundle& bundle, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << serialize_model(bundle) << '\n';
}

ModelBundle load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return deserialize_model(buffer.str());
}

}  // namespace ce
