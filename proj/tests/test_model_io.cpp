#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "ce/model_io.hpp"
#include "ce/pipeline.hpp"
#include "helpers.hpp"

using namespace ce;

namespace {

ModelBundle sample_bundle(std::uint64_t seed) {
  Rng rng(seed);
  const SyntheticCorpus synthetic = generate_synthetic_corpus(
      {.topics = 2, .vocab_size = 10, .documents = 24, .min_cardinality = 2,
       .max_cardinality = 3},
      rng);
  PipelineOptions options;
  options.lda = {.topics = 2, .iterations = 30, .alpha = 0.5};
  options.hidden = {5, 3};
  options.validation_count = 2;
  options.autoencoder.max_iterations = 8;
  ModelBundle bundle = prepare_bundle(synthetic.corpus, options, seed);
  const DerivedArtifacts artifacts = derive_artifacts(bundle);
  run_pretrain(bundle, artifacts, options.hidden, seed);
  return bundle;
}

struct TempFile {
  std::string path;
  explicit TempFile(const char* name) : path(std::string("model_io_") + name + ".tmp") {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE("model_io") {

TEST_CASE("save and load round-trip bit-exactly") {
  const ModelBundle bundle = sample_bundle(41);
  TempFile file("roundtrip");
  save_model(bundle, file.path);
  const ModelBundle loaded = load_model(file.path);

  CHECK(loaded.stage == bundle.stage);
  CHECK(loaded.corpus.vocabulary == bundle.corpus.vocabulary);
  CHECK(loaded.corpus.documents == bundle.corpus.documents);
  CHECK(loaded.split.train == bundle.split.train);
  CHECK(loaded.split.validation == bundle.split.validation);
  CHECK(loaded.split.test == bundle.split.test);
  CHECK(loaded.negatives == bundle.negatives);
  CHECK(loaded.pipeline == bundle.pipeline);
  CHECK(loaded.lda == bundle.lda);
  REQUIRE(loaded.network.has_value());
  CHECK(*loaded.network == *bundle.network);
  REQUIRE(loaded.lsa.has_value());
  CHECK(loaded.lsa->vectors == bundle.lsa->vectors);
  REQUIRE(loaded.pca.has_value());
  CHECK(loaded.pca->vectors == bundle.pca->vectors);

  // Serializing the reloaded bundle reproduces the file byte for byte.
  CHECK(serialize_model(loaded) == serialize_model(bundle));

  TempFile resaved("resave");
  save_model(loaded, resaved.path);
  std::ifstream f1(file.path, std::ios::binary), f2(resaved.path, std::ios::binary);
  const std::string bytes1((std::istreambuf_iterator<char>(f1)), {});
  const std::string bytes2((std::istreambuf_iterator<char>(f2)), {});
  CHECK(bytes1 == bytes2);
}

TEST_CASE("tampered version tag is rejected") {
  const ModelBundle bundle = sample_bundle(43);
  std::string text = serialize_model(bundle);
  const std::string tag = kModelFormatTag;
  text.replace(text.find(tag), tag.size(), "ce-siamese/9");
  CHECK_THROWS_WITH_AS(deserialize_model(text), "unsupported model version", std::runtime_error);
}

TEST_CASE("truncated files are rejected") {
  const ModelBundle bundle = sample_bundle(47);
  const std::string text = serialize_model(bundle);
  CHECK_THROWS_WITH_AS(deserialize_model(text.substr(0, text.size() / 2)), "corrupt model file",
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(deserialize_model("not json at all"), "corrupt model file",
                       std::runtime_error);
}

TEST_CASE("inconsistent dimensions are rejected at save") {
  ModelBundle bundle = sample_bundle(53);
  Rng rng(1);
  // Wrong input width: pipeline dimension + topic count is 12, not 5.
  const std::size_t sizes[3] = {5, 4, 10};
  bundle.network = init_network(sizes, rng);
  CHECK_THROWS_AS((void)serialize_model(bundle), std::invalid_argument);

  ModelBundle wrong_output = sample_bundle(53);
  const std::size_t sizes2[3] = {12, 4, 7};  // output must match the vocabulary
  wrong_output.network = init_network(sizes2, rng);
  CHECK_THROWS_AS((void)serialize_model(wrong_output), std::invalid_argument);
}

}  // TEST_SUITE
