#include "ce/network.hpp"

#include <cmath>
#include <stdexcept>

namespace ce {

Network init_network(std::span<const std::size_t> layer_sizes, Rng& rng) {
  if (layer_sizes.size() < 2) throw std::invalid_argument("invalid layer size");
  for (std::size_t s : layer_sizes) {
    if (s == 0) throw std::invalid_argument("invalid layer size");
  }

  Network net;
  net.layer_sizes.assign(layer_sizes.begin(), layer_sizes.end());
  for (std::size_t h = 1; h < layer_sizes.size(); ++h) {
    const std::size_t fan_in = layer_sizes[h - 1];
    const std::size_t fan_out = layer_sizes[h];
    const double r = std::sqrt(6.0 / double(fan_in + fan_out));
    Layer layer;
    layer.weights = Matrix(fan_out, fan_in);
    for (double& w : layer.weights.flat()) w = rng.uniform(-r, r);
    layer.bias.assign(fan_out, 0.0);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

std::vector<std::size_t> default_layer_sizes(std::size_t input_dim, std::size_t vocab_size) {
  return {input_dim, 100, 100, 10, vocab_size};
}

ActivationTrace forward(const Network& net, std::span<const double> x) {
  if (x.size() != net.input_dim()) throw std::invalid_argument("input dimension mismatch");
  ActivationTrace trace;
  trace.z.reserve(net.depth() + 1);
  trace.z.emplace_back(x.begin(), x.end());
  for (const Layer& layer : net.layers) {
    std::vector<double> a = matvec(layer.weights, trace.z.back());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::tanh(a[i] + layer.bias[i]);
    trace.z.push_back(std::move(a));
  }
  return trace;
}

std::vector<double> concept_embedding(const Network& net, std::span<const double> x) {
  const ActivationTrace trace = forward(net, x);
  const auto ce = trace.embedding();
  return {ce.begin(), ce.end()};
}

NetGradients NetGradients::zeros_like(const Network& net) {
  NetGradients g;
  for (const Layer& layer : net.layers) {
    g.weights.emplace_back(layer.weights.rows(), layer.weights.cols());
    g.bias.emplace_back(layer.bias.size(), 0.0);
  }
  return g;
}

void NetGradients::add_scaled(const NetGradients& other, double scale) {
  for (std::size_t h = 0; h < weights.size(); ++h) {
    axpy(scale, other.weights[h].flat(), weights[h].flat());
    axpy(scale, other.bias[h], bias[h]);
  }
}

void apply_gradient_step(Network& net, const NetGradients& grad, double learning_rate) {
  for (std::size_t h = 0; h < net.layers.size(); ++h) {
    axpy(-learning_rate, grad.weights[h].flat(), net.layers[h].weights.flat());
    axpy(-learning_rate, grad.bias[h], net.layers[h].bias);
  }
}

}  // namespace ce
