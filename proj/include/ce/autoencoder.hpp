#ifndef CE_AUTOENCODER_HPP_
#define CE_AUTOENCODER_HPP_

#include <functional>
#include <span>
#include <vector>

#include "ce/linalg.hpp"
#include "ce/network.hpp"
#include "ce/rng.hpp"

namespace ce {

struct AutoencoderConfig {
  double sparsity_weight = 2.0;
  double sparsity_epsilon = 1e-4;
  double weight_decay = 0.02;
  int max_iterations = 200;
};

/// One tanh encoder/decoder pair with untied weights.
struct Autoencoder {
  Matrix encode_w;  // hidden x input
  std::vector<double> encode_b;
  Matrix decode_w;  // input x hidden
  std::vector<double> decode_b;
};

struct AutoencoderGradients {
  Matrix encode_w;
  std::vector<double> encode_b;
  Matrix decode_w;
  std::vector<double> decode_b;
};

/// Batch loss: sum of squared reconstruction errors, plus the smoothed-L1
/// sparsity penalty on hidden activations, plus weight decay on both weight
/// matrices (never biases).
struct AutoencoderLoss {
  double loss;
  double reconstruction;  // the squared-error part alone
  AutoencoderGradients grad;
};

AutoencoderLoss autoencoder_loss_grad(const Autoencoder& ae, const Matrix& batch,
                                      const AutoencoderConfig& cfg);

/// Full-batch gradient descent with a backtracking line search; every accepted
/// step strictly decreases the loss. Reports each accepted loss if a sink is
/// given.
Autoencoder train_autoencoder(const Matrix& batch, std::size_t hidden, const AutoencoderConfig& cfg,
                              Rng& rng, const std::function<void(double)>& on_accepted_loss = {});

/// Greedy layer-wise pretraining: each hidden layer's encoder is trained on
/// the previous layer's outputs, decoders are dropped, and the output layer
/// is freshly initialized.
Network pretrain_layerwise(const Matrix& train_inputs, std::span<const std::size_t> hidden_sizes,
                           std::size_t output_dim, const AutoencoderConfig& cfg, Rng& rng);

}  // namespace ce

#endif  // CE_AUTOENCODER_HPP_
