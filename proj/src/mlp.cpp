#include "ra/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace ra {

std::vector<int> NetworkParams::layer_sizes() const {
  std::vector<int> sizes;
  if (W.empty()) return sizes;
  sizes.push_back(static_cast<int>(W.front().cols()));
  for (const auto& w : W) sizes.push_back(static_cast<int>(w.rows()));
  return sizes;
}

long NetworkParams::parameter_count() const {
  long n = 0;
  for (const auto& w : W) n += w.size();
  for (const auto& v : b) n += v.size();
  return n;
}

NetworkParams make_network(const std::vector<int>& sizes, Rng& init_rng) {
  if (sizes.size() < 2)
    throw std::invalid_argument("make_network: need at least input and output sizes");
  for (int s : sizes)
    if (s < 1) throw std::invalid_argument("make_network: layer sizes must be positive");
  NetworkParams net;
  for (std::size_t k = 0; k + 1 < sizes.size(); ++k) {
    int fan_in = sizes[k], fan_out = sizes[k + 1];
    double limit = std::sqrt(6.0 / (fan_in + fan_out));
    Mat w(fan_out, fan_in);
    for (long i = 0; i < w.size(); ++i)
      w.data()[i] = init_rng.uniform(-limit, limit);
    net.W.push_back(std::move(w));
    net.b.push_back(Vec::Zero(fan_out));
  }
  return net;
}

Mat forward(const NetworkParams& net, const Mat& x) {
  ForwardCache cache;
  return forward_cached(net, x, cache);
}

Vec forward(const NetworkParams& net, const Vec& x) {
  return forward(net, Mat(x)).col(0);
}

Mat forward_cached(const NetworkParams& net, const Mat& x, ForwardCache& cache) {
  if (net.W.empty()) throw std::invalid_argument("forward: empty network");
  if (x.rows() != net.input_dim())
    throw std::invalid_argument("forward: input has " + std::to_string(x.rows()) +
                                " rows, expected " + std::to_string(net.input_dim()));
  cache.a.clear();
  cache.a.reserve(net.W.size() + 1);
  cache.a.push_back(x);
  for (std::size_t k = 0; k < net.W.size(); ++k) {
    Mat z = (net.W[k] * cache.a.back()).colwise() + net.b[k];
    if (k + 1 < net.W.size()) z = z.array().tanh();
    cache.a.push_back(std::move(z));
  }
  return cache.a.back();
}

Gradients backward(const NetworkParams& net, const ForwardCache& cache,
                   const Mat& output_grad) {
  if (cache.a.size() != net.W.size() + 1)
    throw std::invalid_argument("backward: cache does not match network");
  Gradients grads;
  grads.dW.resize(net.W.size());
  grads.db.resize(net.W.size());
  Mat delta = output_grad;  // dLoss/dz at the output (linear layer)
  for (std::size_t k = net.W.size(); k-- > 0;) {
    grads.dW[k] = delta * cache.a[k].transpose();
    grads.db[k] = delta.rowwise().sum();
    if (k > 0) {
      // Propagate through tanh: a = tanh(z) => da/dz = 1 - a^2.
      delta = (net.W[k].transpose() * delta).array() *
              (1.0 - cache.a[k].array().square());
    }
  }
  return grads;
}

AdamState make_adam_state(const NetworkParams& net) {
  AdamState s;
  for (const auto& w : net.W) {
    s.mW.push_back(Mat::Zero(w.rows(), w.cols()));
    s.vW.push_back(Mat::Zero(w.rows(), w.cols()));
  }
  for (const auto& v : net.b) {
    s.mb.push_back(Vec::Zero(v.size()));
    s.vb.push_back(Vec::Zero(v.size()));
  }
  return s;
}

namespace {

template <class T>
void adam_update(T& param, T& m, T& v, const T& grad, double lr,
                 const AdamConfig& c, double bc1, double bc2) {
  if (!grad.allFinite()) throw std::invalid_argument("optimizer_step: non-finite gradient");
  m.array() = c.beta1 * m.array() + (1.0 - c.beta1) * grad.array();
  v.array() = c.beta2 * v.array() + (1.0 - c.beta2) * grad.array().square();
  T step = ((m.array() / bc1) / ((v.array() / bc2).sqrt() + c.eps)).matrix();
  if (c.decoupled_weight_decay) step.array() += c.weight_decay * param.array();
  param -= lr * step;
}

}  // namespace

void optimizer_step(NetworkParams& net, AdamState& state, const Gradients& grads,
                    double lr, const AdamConfig& config) {
  if (grads.dW.size() != net.W.size() || grads.db.size() != net.b.size())
    throw std::invalid_argument("optimizer_step: gradient shape mismatch");
  ++state.t;
  double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.t));
  double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.t));
  for (std::size_t k = 0; k < net.W.size(); ++k) {
    adam_update(net.W[k], state.mW[k], state.vW[k], grads.dW[k], lr, config, bc1, bc2);
    adam_update(net.b[k], state.mb[k], state.vb[k], grads.db[k], lr, config, bc1, bc2);
  }
}

void soft_update(NetworkParams& target, const NetworkParams& online, double tau) {
  if (target.W.size() != online.W.size())
    throw std::invalid_argument("soft_update: mismatched networks");
  if (!(tau >= 0.0 && tau <= 1.0))
    throw std::invalid_argument("soft_update: tau must lie in [0, 1]");
  for (std::size_t k = 0; k < target.W.size(); ++k) {
    target.W[k] = tau * online.W[k] + (1.0 - tau) * target.W[k];
    target.b[k] = tau * online.b[k] + (1.0 - tau) * target.b[k];
  }
}

}  // namespace ra
