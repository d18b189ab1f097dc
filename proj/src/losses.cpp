#include "ce/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ce {

namespace {

constexpr double kPredictionClamp = 1e-7;  // keeps tanh outputs out of the logs' poles

double clamp_prediction(double y) {
  return std::clamp(y, -1.0 + kPredictionClamp, 1.0 - kPredictionClamp);
}

double kappa_for(const Instance& inst, bool swap) {
  std::size_t present = 0;
  for (double y : inst.target) present += y > 0.0;
  const double kappa = double(present) / double(inst.target.size());
  return swap ? 1.0 - kappa : kappa;
}

/// Backpropagates a gradient seeded at layer `top` (1-based) down to the
/// input, accumulating into `grad`. `delta` must already include the tanh
/// derivative at layer `top`.
void backpropagate(const Network& net, const ActivationTrace& trace, std::vector<double> delta,
                   std::size_t top, NetGradients& grad) {
  for (std::size_t h = top; h >= 1; --h) {
    add_outer(grad.weights[h - 1], delta, trace.z[h - 1]);
    axpy(1.0, delta, grad.bias[h - 1]);
    if (h == 1) break;
    std::vector<double> below = matvec_t(net.layers[h - 1].weights, delta);
    for (std::size_t i = 0; i < below.size(); ++i) {
      below[i] *= 1.0 - trace.z[h - 1][i] * trace.z[h - 1][i];
    }
    delta = std::move(below);
  }
}

/// Loss and gradient contribution of one instance, already carrying the batch
/// normalization factor 1/(2K|vocab|).
double accumulate_prediction(const Network& net, const Instance& inst,
                             const ActivationTrace& trace, double norm, bool swap,
                             NetGradients& grad) {
  const auto prediction = trace.prediction();
  const std::size_t n = prediction.size();
  const double kappa = kappa_for(inst, swap);

  double loss = 0.0;
  std::vector<double> delta(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double y = inst.target[j];
    const double p = clamp_prediction(prediction[j]);
    loss += kappa * (1.0 + y) * std::log1p(p) + (1.0 - kappa) * (1.0 - y) * std::log1p(-p);
    const double dldp = -norm * (kappa * (1.0 + y) / (1.0 + p) -
                                 (1.0 - kappa) * (1.0 - y) / (1.0 - p));
    delta[j] = dldp * (1.0 - prediction[j] * prediction[j]);
  }
  backpropagate(net, trace, std::move(delta), net.depth(), grad);
  return -norm * loss;
}

}  // namespace

double TrainingConfig::resolved_scale(std::size_t embedding_dim) const {
  return scale >= 0.0 ? scale : std::sqrt(double(embedding_dim));
}

LossResult prediction_loss_grad(const Network& net, const std::vector<Instance>& instances,
                                std::span<const std::size_t> batch, const TrainingConfig& cfg) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  LossResult out{0.0, NetGradients::zeros_like(net)};
  const double norm = 1.0 / (2.0 * double(batch.size()) * double(net.output_dim()));
  for (std::size_t idx : batch) {
    const ActivationTrace trace = forward(net, instances[idx].input);
    out.loss += accumulate_prediction(net, instances[idx], trace, norm, cfg.swap_kappa, out.grad);
  }
  return out;
}

LossResult prediction_loss_grad(const Network& net, const std::vector<Instance>& instances,
                                const TrainingConfig& cfg) {
  std::vector<std::size_t> all(instances.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return prediction_loss_grad(net, instances, all, cfg);
}

double siamese_pair_term(PairKind kind, double embedding_distance, double similarity, double beta,
                         double rho) {
  switch (kind) {
    case PairKind::kPositivePositive: {
      const double miss = embedding_distance - beta * (1.0 - similarity);
      return miss * miss;
    }
    case PairKind::kNegativeNegative: {
      const double miss = embedding_distance - beta * (1.0 - similarity);
      return rho * miss * miss;
    }
    case PairKind::kMixed: {
      const double miss = embedding_distance - beta;
      return miss * miss * similarity;
    }
  }
  return 0.0;
}

SiameseLossResult siamese_loss_grad(const Network& net, const std::vector<Instance>& instances,
                                    std::span<const InstancePair> batch,
                                    const TrainingConfig& cfg) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  const std::size_t n_pairs = batch.size();
  const double beta = cfg.resolved_scale(net.embedding_dim());
  const double rho = cfg.importance;
  const double pred_norm = 1.0 / (2.0 * double(n_pairs) * double(net.output_dim()));

  SiameseLossResult out;
  out.prediction_loss = 0.0;
  out.siamese_loss = 0.0;
  out.grad = NetGradients::zeros_like(net);
  out.siamese_grad = NetGradients::zeros_like(net);

  for (const InstancePair& pair : batch) {
    const Instance& first = instances[pair.first];
    const Instance& second = instances[pair.second];
    const ActivationTrace trace1 = forward(net, first.input);
    const ActivationTrace trace2 = forward(net, second.input);
    out.prediction_loss +=
        accumulate_prediction(net, first, trace1, pred_norm, cfg.swap_kappa, out.grad);
    out.prediction_loss +=
        accumulate_prediction(net, second, trace2, pred_norm, cfg.swap_kappa, out.grad);

    const auto ce1 = trace1.embedding();
    const auto ce2 = trace2.embedding();
    const double distance = euclidean_distance(ce1, ce2);

    out.siamese_loss +=
        siamese_pair_term(pair.kind, distance, pair.target_similarity, beta, rho) /
        double(n_pairs);
    if (distance == 0.0) continue;  // subgradient choice at the kink

    double coefficient = 0.0;
    switch (pair.kind) {
      case PairKind::kPositivePositive:
        coefficient = 2.0 * (distance - beta * (1.0 - pair.target_similarity));
        break;
      case PairKind::kNegativeNegative:
        coefficient = 2.0 * rho * (distance - beta * (1.0 - pair.target_similarity));
        break;
      case PairKind::kMixed:
        coefficient = 2.0 * (distance - beta) * pair.target_similarity;
        break;
    }
    coefficient /= double(n_pairs);

    const std::size_t dim = ce1.size();
    std::vector<double> delta1(dim), delta2(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      const double direction = coefficient * (ce1[i] - ce2[i]) / distance;
      delta1[i] = direction * (1.0 - ce1[i] * ce1[i]);
      delta2[i] = -direction * (1.0 - ce2[i] * ce2[i]);
    }
    // The distance loss never touches the output layer, so backpropagation
    // starts at the embedding layer.
    backpropagate(net, trace1, std::move(delta1), net.depth() - 1, out.siamese_grad);
    backpropagate(net, trace2, std::move(delta2), net.depth() - 1, out.siamese_grad);
  }

  out.grad.add_scaled(out.siamese_grad, cfg.siamese_weight);
  out.total_loss = out.prediction_loss + cfg.siamese_weight * out.siamese_loss;
  return out;
}

}  // namespace ce
