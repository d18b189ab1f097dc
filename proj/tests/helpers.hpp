#ifndef CE_TESTS_HELPERS_HPP_
#define CE_TESTS_HELPERS_HPP_

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ce/autoencoder.hpp"
#include "ce/corpus.hpp"
#include "ce/network.hpp"

namespace ce::testing {

inline Corpus corpus_from_text(const std::string& text) {
  std::istringstream in(text);
  return parse_corpus(in);
}

/// The running four-document example: df(a)=3, df(b)=2, df(c)=2, df(d)=1;
/// c and d never co-occur.
inline Corpus four_doc_corpus() { return corpus_from_text("a\tb\na\tc\na\tb\td\nc\n"); }

inline Corpus random_corpus(std::size_t vocab, std::size_t docs, Rng& rng) {
  std::ostringstream text;
  for (std::size_t d = 0; d < docs; ++d) {
    const std::size_t m = 1 + rng.next_below(vocab);
    std::vector<std::size_t> ids(vocab);
    for (std::size_t i = 0; i < vocab; ++i) ids[i] = i;
    rng.shuffle(ids);
    for (std::size_t i = 0; i < m; ++i) {
      if (i > 0) text << '\t';
      text << "t" << ids[i];
    }
    text << '\n';
  }
  return corpus_from_text(text.str());
}

/// Central finite differences over every parameter of a network.
inline NetGradients finite_difference_grad(Network net,
                                           const std::function<double(const Network&)>& loss,
                                           double step = 1e-5) {
  NetGradients fd = NetGradients::zeros_like(net);
  for (std::size_t h = 0; h < net.layers.size(); ++h) {
    auto weights = net.layers[h].weights.flat();
    for (std::size_t i = 0; i < weights.size(); ++i) {
      const double saved = weights[i];
      weights[i] = saved + step;
      const double up = loss(net);
      weights[i] = saved - step;
      const double down = loss(net);
      weights[i] = saved;
      fd.weights[h].flat()[i] = (up - down) / (2.0 * step);
    }
    for (std::size_t i = 0; i < net.layers[h].bias.size(); ++i) {
      const double saved = net.layers[h].bias[i];
      net.layers[h].bias[i] = saved + step;
      const double up = loss(net);
      net.layers[h].bias[i] = saved - step;
      const double down = loss(net);
      net.layers[h].bias[i] = saved;
      fd.bias[h][i] = (up - down) / (2.0 * step);
    }
  }
  return fd;
}

inline double tensor_relative_error(std::span<const double> analytic,
                                    std::span<const double> numeric) {
  double peak = 1e-8, diff = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    peak = std::max({peak, std::abs(analytic[i]), std::abs(numeric[i])});
    diff = std::max(diff, std::abs(analytic[i] - numeric[i]));
  }
  return diff / peak;
}

/// Max per-tensor norm-relative error between analytic and finite-difference
/// gradients, over every weight matrix and bias vector.
inline double max_gradient_error(const NetGradients& analytic, const NetGradients& numeric) {
  double worst = 0.0;
  for (std::size_t h = 0; h < analytic.weights.size(); ++h) {
    worst = std::max(worst,
                     tensor_relative_error(analytic.weights[h].flat(), numeric.weights[h].flat()));
    worst = std::max(worst, tensor_relative_error(analytic.bias[h], numeric.bias[h]));
  }
  return worst;
}

/// Same scheme for the autoencoder's four parameter tensors.
inline double autoencoder_gradient_error(Autoencoder ae, const Matrix& batch,
                                         const AutoencoderConfig& cfg, double step = 1e-5) {
  const auto loss_at = [&](const Autoencoder& model) {
    return autoencoder_loss_grad(model, batch, cfg).loss;
  };
  const AutoencoderGradients analytic = autoencoder_loss_grad(ae, batch, cfg).grad;

  const auto fd_span = [&](std::span<double> params) {
    std::vector<double> grad(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double saved = params[i];
      params[i] = saved + step;
      const double up = loss_at(ae);
      params[i] = saved - step;
      const double down = loss_at(ae);
      params[i] = saved;
      grad[i] = (up - down) / (2.0 * step);
    }
    return grad;
  };

  double worst = 0.0;
  worst = std::max(worst, tensor_relative_error(analytic.encode_w.flat(),
                                                fd_span(ae.encode_w.flat())));
  worst = std::max(worst, tensor_relative_error(analytic.decode_w.flat(),
                                                fd_span(ae.decode_w.flat())));
  worst = std::max(worst, tensor_relative_error(analytic.encode_b, fd_span(ae.encode_b)));
  worst = std::max(worst, tensor_relative_error(analytic.decode_b, fd_span(ae.decode_b)));
  return worst;
}

}  // namespace ce::testing

#endif  // CE_TESTS_HELPERS_HPP_
