#ifndef CE_TRAINING_HPP_
#define CE_TRAINING_HPP_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ce/losses.hpp"

namespace ce {

/// One line of training progress; emitted after every epoch and whenever the
/// validation priming runs.
struct ProgressRecord {
  std::string stage;  // "predict" or "siamese"
  int epoch;
  double loss;
  double learning_rate;
  bool evaluated = false;
  double validation_p2 = 0.0;
};

using ProgressSink = std::function<void(const ProgressRecord&)>;

/// Computes the surrogate validation score (priming P@2) for the current
/// parameters. Wired by the caller so the trainer stays independent of the
/// evaluation stack.
using ValidationScorer = std::function<double(const Network&)>;

enum class StopDecision { kContinue, kStop };

/// Stops once the relative improvement between the two latest evaluations
/// falls below the threshold. Fewer than two evaluations always continue.
StopDecision early_stop_p2(std::span<const double> history, double threshold);

/// Stage one: stochastic gradient descent on the prediction loss over
/// shuffled mini-batches, learning rate decayed every decay_period epochs.
Network train_prediction(Network net, const std::vector<Instance>& instances,
                         const TrainingConfig& cfg, Rng& rng,
                         const ValidationScorer& validation = {},
                         const ProgressSink& progress = {});

/// Stage two: stochastic gradient descent on the multi-objective loss over
/// pair mini-batches; the decay rule counts mini-batches. Both towers share
/// one parameter set, so they agree bitwise at every step by construction.
Network train_siamese(Network net, const std::vector<Instance>& instances,
                      const std::vector<InstancePair>& pairs, const TrainingConfig& cfg, Rng& rng,
                      const ValidationScorer& validation = {}, const ProgressSink& progress = {});

}  // namespace ce

#endif  // CE_TRAINING_HPP_
