#pragma once

#include <vector>

#include "ra/rng.hpp"
#include "ra/types.hpp"

namespace ra {

// Fully connected network: tanh hidden layers, linear output.
struct NetworkParams {
  std::vector<Mat> W;  // W[k] maps layer k activations (columns) forward
  std::vector<Vec> b;

  int input_dim() const { return W.empty() ? 0 : static_cast<int>(W.front().cols()); }
  int output_dim() const { return W.empty() ? 0 : static_cast<int>(W.back().rows()); }
  std::vector<int> layer_sizes() const;
  long parameter_count() const;
};

// Xavier-uniform weights, zero biases.  sizes = [input, hidden..., output].
NetworkParams make_network(const std::vector<int>& sizes, Rng& init_rng);

// Batched forward pass; samples are columns.
Mat forward(const NetworkParams& net, const Mat& x);
Vec forward(const NetworkParams& net, const Vec& x);

// Activations kept for the backward pass (a[0] = input, a.back() = output).
struct ForwardCache {
  std::vector<Mat> a;
};
Mat forward_cached(const NetworkParams& net, const Mat& x, ForwardCache& cache);

struct Gradients {
  std::vector<Mat> dW;
  std::vector<Vec> db;
};

// Backpropagation from dLoss/dOutput (same shape as the output batch).
Gradients backward(const NetworkParams& net, const ForwardCache& cache,
                   const Mat& output_grad);

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  bool decoupled_weight_decay = false;  // AdamW
  double weight_decay = 0.01;
};

struct AdamState {
  std::vector<Mat> mW, vW;
  std::vector<Vec> mb, vb;
  long t = 0;
};

AdamState make_adam_state(const NetworkParams& net);

// One bias-corrected Adam (or AdamW) update. Throws on non-finite gradients.
void optimizer_step(NetworkParams& net, AdamState& state, const Gradients& grads,
                    double lr, const AdamConfig& config = {});

// target <- tau * online + (1 - tau) * target
void soft_update(NetworkParams& target, const NetworkParams& online, double tau);

}  // namespace ra
