#include "ce/training.hpp"

#include <cmath>
#include <stdexcept>

namespace ce {

StopDecision early_stop_p2(std::span<const double> history, double threshold) {
  if (history.size() < 2) return StopDecision::kContinue;
  const double previous = history[history.size() - 2];
  const double current = history.back();
  const double improvement = (current - previous) / std::max(std::abs(previous), 1e-12);
  return improvement < threshold ? StopDecision::kStop : StopDecision::kContinue;
}

namespace {

void check_finite(double loss) {
  if (!std::isfinite(loss)) throw std::runtime_error("training diverged");
}

template <typename StepFn>
Network run_sgd(Network net, std::size_t example_count, const TrainingConfig& cfg, Rng& rng,
                const ValidationScorer& validation, const ProgressSink& progress,
               const char* stage, bool decay_per_batch, StepFn step) {
  if (example_count == 0) throw std::invalid_argument("empty batch");
  const std::size_t batch_size = std::max<std::size_t>(1, cfg.batch_size);

  std::vector<std::size_t> order(example_count);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  double eta = cfg.learning_rate;
  std::vector<double> evaluations;
  long long batch_counter = 0;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      const std::size_t end = std::min(order.size(), start + batch_size);
      const std::span<const std::size_t> batch(order.data() + start, end - start);
      epoch_loss += step(net, batch, eta);
      ++batches;
      ++batch_counter;
      if (decay_per_batch && batch_counter % cfg.decay_period == 0) eta *= cfg.decay_factor;
    }
    epoch_loss /= double(batches);
    check_finite(epoch_loss);
    if (!decay_per_batch && epoch % cfg.decay_period == 0) eta *= cfg.decay_factor;

    ProgressRecord record{stage, epoch, epoch_loss, eta};
    if (validation && cfg.eval_period > 0 && epoch % cfg.eval_period == 0) {
      evaluations.push_back(validation(net));
      record.evaluated = true;
      record.validation_p2 = evaluations.back();
    }
    if (progress) progress(record);
    if (record.evaluated && early_stop_p2(evaluations, cfg.stop_threshold) == StopDecision::kStop) {
      break;
    }
  }
  return net;
}

}  // namespace

Network train_prediction(Network net, const std::vector<Instance>& instances,
                         const TrainingConfig& cfg, Rng& rng, const ValidationScorer& validation,
                         const ProgressSink& progress) {
  return run_sgd(std::move(net), instances.size(), cfg, rng, validation, progress, "predict",
                 /*decay_per_batch=*/false,
                 [&](Network& model, std::span<const std::size_t> batch, double eta) {
                   const LossResult result = prediction_loss_grad(model, instances, batch, cfg);
                   check_finite(result.loss);
                   apply_gradient_step(model, result.grad, eta);
                   return result.loss;
                 });
}

Network train_siamese(Network net, const std::vector<Instance>& instances,
                      const std::vector<InstancePair>& pairs, const TrainingConfig& cfg, Rng& rng,
                      const ValidationScorer& validation, const ProgressSink& progress) {
  std::vector<InstancePair> scratch(std::max<std::size_t>(1, cfg.batch_size));
  return run_sgd(std::move(net), pairs.size(), cfg, rng, validation, progress, "siamese",
                 /*decay_per_batch=*/true,
                 [&](Network& model, std::span<const std::size_t> batch, double eta) {
                   scratch.clear();
                   for (std::size_t idx : batch) scratch.push_back(pairs[idx]);
                   const SiameseLossResult result =
                       siamese_loss_grad(model, instances, scratch, cfg);
                   check_finite(result.total_loss);
                   apply_gradient_step(model, result.grad, eta);
                   return result.total_loss;
                 });
}

}  // namespace ce
