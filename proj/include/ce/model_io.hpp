#ifndef CE_MODEL_IO_HPP_
#define CE_MODEL_IO_HPP_

#include <optional>
#include <string>

#include "ce/autoencoder.hpp"
#include "ce/baselines.hpp"
#include "ce/corpus.hpp"
#include "ce/features.hpp"
#include "ce/lda.hpp"
#include "ce/losses.hpp"
#include "ce/network.hpp"

namespace ce {

inline constexpr const char* kModelFormatTag = "ce-siamese/1";

/// How far the pipeline has progressed; later stages require earlier ones.
enum class Stage {
  kPrepared = 1,    // split, pipeline, topic model, baselines
  kPretrained = 2,  // layer-wise initialized network
  kPrediction = 3,  // stage-one trained network
  kSiamese = 4,     // stage-two trained network (stage-one copy retained)
};

struct ModelBundle {
  Stage stage = Stage::kPrepared;
  Corpus corpus;
  CorpusSplit split;
  std::vector<NegativePair> negatives;
  FeaturePipeline pipeline;
  LdaModel lda;
  std::optional<Network> network;          // pretrained, then prediction-trained
  std::optional<Network> network_siamese;  // distance-trained copy
  std::optional<EmbeddingTable> lsa;
  std::optional<EmbeddingTable> pca;
  TrainingConfig config;
  AutoencoderConfig autoencoder;
};

/// Writes the bundle as one JSON document with shortest round-trip float
/// text. Saving, loading and saving again is byte-identical.
void save_model(const ModelBundle& bundle, const std::string& path);
ModelBundle load_model(const std::string& path);

std::string serialize_model(const ModelBundle& bundle);
ModelBundle deserialize_model(const std::string& text);

/// Cross-checks dimensions before a save or after a load.
void validate_bundle(const ModelBundle& bundle);

}  // namespace ce

#endif  // CE_MODEL_IO_HPP_
