#ifndef CE_NETWORK_HPP_
#define CE_NETWORK_HPP_

#include <span>
#include <vector>

#include "ce/linalg.hpp"
#include "ce/rng.hpp"

namespace ce {

struct Layer {
  Matrix weights;            // n_h x n_{h-1}
  std::vector<double> bias;  // n_h

  bool operator==(const Layer&) const = default;
};

/// Feed-forward net with tanh units throughout. The concept embedding is the
/// output of the next-to-last layer; the last layer produces the document
/// prediction.
struct Network {
  std::vector<std::size_t> layer_sizes;  // [input, n1, ..., output]
  std::vector<Layer> layers;             // layer_sizes.size() - 1 entries

  std::size_t depth() const { return layers.size(); }
  std::size_t input_dim() const { return layer_sizes.front(); }
  std::size_t output_dim() const { return layer_sizes.back(); }
  std::size_t embedding_dim() const { return layer_sizes[layer_sizes.size() - 2]; }

  bool operator==(const Network&) const = default;
};

/// Weights uniform in [-r, r] with r = sqrt(6 / (fan_in + fan_out)); biases
/// zero.
Network init_network(std::span<const std::size_t> layer_sizes, Rng& rng);

/// The layer widths used throughout the experiments: two 100-unit layers, a
/// 10-dimensional embedding layer, then the vocabulary-wide output.
std::vector<std::size_t> default_layer_sizes(std::size_t input_dim, std::size_t vocab_size);

struct ActivationTrace {
  std::vector<std::vector<double>> z;  // z[0] = input, z[depth] = prediction

  std::span<const double> embedding() const { return z[z.size() - 2]; }
  std::span<const double> prediction() const { return z.back(); }
};

ActivationTrace forward(const Network& net, std::span<const double> x);
std::vector<double> concept_embedding(const Network& net, std::span<const double> x);

/// Per-layer gradient accumulator aligned with Network::layers.
struct NetGradients {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> bias;

  static NetGradients zeros_like(const Network& net);
  void add_scaled(const NetGradients& other, double scale);
};

void apply_gradient_step(Network& net, const NetGradients& grad, double learning_rate);

}  // namespace ce

#endif  // CE_NETWORK_HPP_
