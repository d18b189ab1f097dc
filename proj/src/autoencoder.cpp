#include "ce/autoencoder.hpp"

#include <cmath>
#include <stdexcept>

namespace ce {

namespace {

Autoencoder init_autoencoder(std::size_t input, std::size_t hidden, Rng& rng) {
  const double r = std::sqrt(6.0 / double(input + hidden));
  Autoencoder ae;
  ae.encode_w = Matrix(hidden, input);
  ae.decode_w = Matrix(input, hidden);
  for (double& w : ae.encode_w.flat()) w = rng.uniform(-r, r);
  for (double& w : ae.decode_w.flat()) w = rng.uniform(-r, r);
  ae.encode_b.assign(hidden, 0.0);
  ae.decode_b.assign(input, 0.0);
  return ae;
}

}  // namespace

AutoencoderLoss autoencoder_loss_grad(const Autoencoder& ae, const Matrix& batch,
                                      const AutoencoderConfig& cfg) {
  if (cfg.sparsity_epsilon <= 0.0) throw std::invalid_argument("invalid sparsity smoothing");
  if (batch.rows() == 0) throw std::invalid_argument("empty batch");
  const std::size_t input = ae.encode_w.cols();
  const std::size_t hidden = ae.encode_w.rows();
  if (batch.cols() != input) throw std::invalid_argument("input dimension mismatch");

  AutoencoderLoss out;
  out.loss = 0.0;
  out.reconstruction = 0.0;
  out.grad.encode_w = Matrix(hidden, input);
  out.grad.decode_w = Matrix(input, hidden);
  out.grad.encode_b.assign(hidden, 0.0);
  out.grad.decode_b.assign(input, 0.0);

  std::vector<double> z1(hidden), recon(input), delta2(input), delta1(hidden);
  for (std::size_t k = 0; k < batch.rows(); ++k) {
    const auto x = batch.row(k);

    std::vector<double> a1 = matvec(ae.encode_w, x);
    for (std::size_t q = 0; q < hidden; ++q) z1[q] = std::tanh(a1[q] + ae.encode_b[q]);
    std::vector<double> a2 = matvec(ae.decode_w, z1);
    for (std::size_t j = 0; j < input; ++j) recon[j] = std::tanh(a2[j] + ae.decode_b[j]);

    double sq = 0.0;
    for (std::size_t j = 0; j < input; ++j) {
      const double e = recon[j] - x[j];
      sq += e * e;
      delta2[j] = 2.0 * e * (1.0 - recon[j] * recon[j]);
    }
    out.reconstruction += sq;
    out.loss += sq;
    for (std::size_t q = 0; q < hidden; ++q) {
      out.loss += cfg.sparsity_weight * std::sqrt(z1[q] * z1[q] + cfg.sparsity_epsilon);
    }

    add_outer(out.grad.decode_w, delta2, z1);
    axpy(1.0, delta2, out.grad.decode_b);

    const std::vector<double> back = matvec_t(ae.decode_w, delta2);
    for (std::size_t q = 0; q < hidden; ++q) {
      const double sparsity = cfg.sparsity_weight * z1[q] /
                              std::sqrt(z1[q] * z1[q] + cfg.sparsity_epsilon);
      delta1[q] = (back[q] + sparsity) * (1.0 - z1[q] * z1[q]);
    }
    add_outer(out.grad.encode_w, delta1, x);
    axpy(1.0, delta1, out.grad.encode_b);
  }

  if (cfg.weight_decay > 0.0) {
    out.loss += cfg.weight_decay * (squared_norm(ae.encode_w.flat()) +
                                    squared_norm(ae.decode_w.flat()));
    axpy(2.0 * cfg.weight_decay, ae.encode_w.flat(), out.grad.encode_w.flat());
    axpy(2.0 * cfg.weight_decay, ae.decode_w.flat(), out.grad.decode_w.flat());
  }
  return out;
}

Autoencoder train_autoencoder(const Matrix& batch, std::size_t hidden, const AutoencoderConfig& cfg,
                              Rng& rng, const std::function<void(double)>& on_accepted_loss) {
  if (batch.rows() == 0) throw std::invalid_argument("no pretraining data");
  Autoencoder ae = init_autoencoder(batch.cols(), hidden, rng);

  const auto step = [](Autoencoder model, const AutoencoderGradients& g, double eta) {
    axpy(-eta, g.encode_w.flat(), model.encode_w.flat());
    axpy(-eta, g.decode_w.flat(), model.decode_w.flat());
    axpy(-eta, g.encode_b, model.encode_b);
    axpy(-eta, g.decode_b, model.decode_b);
    return model;
  };

  AutoencoderLoss current = autoencoder_loss_grad(ae, batch, cfg);
  double eta = 1e-2;
  constexpr double kSufficientDecrease = 1e-4;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const double grad_sq = squared_norm(current.grad.encode_w.flat()) +
                           squared_norm(current.grad.decode_w.flat()) +
                           squared_norm(current.grad.encode_b) +
                           squared_norm(current.grad.decode_b);
    if (grad_sq < 1e-20) break;

    eta *= 2.0;  // trial step grows after each acceptance
    bool accepted = false;
    while (eta > 1e-14) {
      Autoencoder trial = step(ae, current.grad, eta);
      AutoencoderLoss trial_loss = autoencoder_loss_grad(trial, batch, cfg);
      if (trial_loss.loss <= current.loss - kSufficientDecrease * eta * grad_sq) {
        ae = std::move(trial);
        current = std::move(trial_loss);
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;
    if (on_accepted_loss) on_accepted_loss(current.loss);
  }
  return ae;
}

Network pretrain_layerwise(const Matrix& train_inputs, std::span<const std::size_t> hidden_sizes,
                           std::size_t output_dim, const AutoencoderConfig& cfg, Rng& rng) {
  if (train_inputs.rows() == 0) throw std::invalid_argument("no pretraining data");
  if (hidden_sizes.empty()) throw std::invalid_argument("invalid layer size");

  Network net;
  net.layer_sizes.push_back(train_inputs.cols());

  Matrix data = train_inputs;
  for (std::size_t hidden : hidden_sizes) {
    if (hidden == 0) throw std::invalid_argument("invalid layer size");
    Autoencoder ae = train_autoencoder(data, hidden, cfg, rng);

    Matrix next(data.rows(), hidden);
    for (std::size_t r = 0; r < data.rows(); ++r) {
      const std::vector<double> a = matvec(ae.encode_w, data.row(r));
      for (std::size_t q = 0; q < hidden; ++q) next(r, q) = std::tanh(a[q] + ae.encode_b[q]);
    }
    data = std::move(next);

    net.layers.push_back({std::move(ae.encode_w), std::move(ae.encode_b)});
    net.layer_sizes.push_back(hidden);
  }

  // Output layer starts from the ordinary random initialization.
  const std::size_t sizes[2] = {net.layer_sizes.back(), output_dim};
  Network top = init_network(sizes, rng);
  net.layers.push_back(std::move(top.layers.front()));
  net.layer_sizes.push_back(output_dim);
  return net;
}

}  // namespace ce
