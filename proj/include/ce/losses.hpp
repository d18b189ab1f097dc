#ifndef CE_LOSSES_HPP_
#define CE_LOSSES_HPP_

#include <span>
#include <vector>

#include "ce/instances.hpp"
#include "ce/network.hpp"

namespace ce {

struct TrainingConfig {
  double learning_rate = 1e-2;  // eta_0
  double decay_factor = 0.95;
  int decay_period = 10;  // epochs in prediction training, mini-batches in distance training
  std::size_t batch_size = 20;
  double siamese_weight = 10.0;  // alpha in the multi-objective loss
  double scale = -1.0;           // beta; < 0 resolves to sqrt(embedding dim)
  double importance = 0.5;       // rho, down-weights negative-negative pairs
  double sensitivity = 1.0;      // lambda in the context-similarity kernel
  int eval_period = 10;          // epochs between validation primings
  double stop_threshold = 0.005;
  int max_epochs = 200;
  std::size_t pairs_per_kind = 0;  // 0 = one per positive instance
  bool swap_kappa = false;         // flips the presence re-weighting of the prediction loss

  double resolved_scale(std::size_t embedding_dim) const;
};

struct LossResult {
  double loss;
  NetGradients grad;
};

/// Re-weighted cross-entropy between tanh outputs and +-1 document targets,
/// averaged over the batch. Predictions are clamped away from +-1 before the
/// logs. kappa, the fraction of present terms, weights the present-term side
/// (or the absent side when swap_kappa is set).
LossResult prediction_loss_grad(const Network& net, const std::vector<Instance>& instances,
                                std::span<const std::size_t> batch, const TrainingConfig& cfg);
LossResult prediction_loss_grad(const Network& net, const std::vector<Instance>& instances,
                                const TrainingConfig& cfg);

/// One pair's contribution to the distance loss, before batch averaging.
/// Positive-positive pairs pull the embedding distance toward
/// beta*(1 - similarity), negative-negative pairs do the same at weight rho,
/// and mixed pairs push toward beta weighted by the context similarity.
double siamese_pair_term(PairKind kind, double embedding_distance, double similarity, double beta,
                         double rho);

struct SiameseLossResult {
  double total_loss;       // prediction losses of both sides + weighted distance loss
  double prediction_loss;  // sum of the two per-side prediction losses
  double siamese_loss;     // batch mean of the pair terms
  NetGradients grad;       // gradient of total_loss w.r.t. the shared parameters
  NetGradients siamese_grad;  // gradient of siamese_loss alone; output layer stays zero
};

/// Multi-objective loss over a batch of pairs with both towers sharing one
/// parameter set. The gradient is the exact tied-parameter derivative: both
/// towers' contributions accumulate into the same tensors. A pair whose
/// embeddings coincide contributes no distance gradient.
SiameseLossResult siamese_loss_grad(const Network& net, const std::vector<Instance>& instances,
                                    std::span<const InstancePair> batch,
                                    const TrainingConfig& cfg);

}  // namespace ce

#endif  // CE_LOSSES_HPP_
