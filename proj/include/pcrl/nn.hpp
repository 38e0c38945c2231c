#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pcrl/rng.hpp"

namespace pcrl {

enum class Activation { Identity, Sigmoid2, Relu, Tanh };

std::string_view to_string(Activation a);
Activation activation_from_string(std::string_view s);

// Steeper logistic 1 / (1 + exp(-2x)); strictly in (0,1), sigmoid2(0) = 0.5.
inline double sigmoid2(double x) { return 1.0 / (1.0 + std::exp(-2.0 * x)); }

struct Layer {
  int in = 0;
  int out = 0;
  Activation act = Activation::Identity;
  std::vector<double> w;  // out x in, row-major
  std::vector<double> b;  // out
};

// Plain multilayer perceptron. Value semantics: copying gives an independent
// network; nothing here locks, so a mutable instance must have one owner.
struct Network {
  std::vector<Layer> layers;

  bool empty() const { return layers.empty(); }
  int input_dim() const { return layers.empty() ? 0 : layers.front().in; }
  int output_dim() const { return layers.empty() ? 0 : layers.back().out; }
  std::vector<int> layer_sizes() const;
  std::size_t param_count() const;  // sum over layers of in*out + out
  bool same_shape(const Network& other) const;
};

// Weights uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero.
// `hidden` is applied to every layer but the last, `output` to the last.
// Throws std::invalid_argument on fewer than two sizes or a size < 1.
Network init_network(const std::vector<int>& layer_sizes, Activation hidden,
                     Activation output, Rng& rng);
Network init_network(const std::vector<int>& layer_sizes, Activation hidden,
                     Activation output, std::uint64_t seed);

// Reusable buffers so rollout-time forward passes do not allocate.
class ForwardScratch {
 public:
  std::span<const double> run(const Network& net, std::span<const double> input);

 private:
  std::vector<double> buf_[2];
};

std::vector<double> forward(const Network& net, std::span<const double> input);

// Same shape as the Network it was made for; holds d(loss)/d(weight).
struct Gradient {
  struct LayerGrad {
    std::vector<double> w, b;
  };
  std::vector<LayerGrad> layers;

  void zero();
  bool congruent_with(const Network& net) const;
};

Gradient make_gradient(const Network& net);

// Per-layer activation and delta buffers for a whole batch, reused across
// training steps.
class BatchWorkspace {
 public:
  void prepare(const Network& net, std::size_t batch);

 private:
  friend double backward_mse(const Network&, std::span<const double* const>,
                             std::span<const double>, Gradient&, BatchWorkspace&);
  std::vector<std::vector<double>> act_;  // act_[l]: batch x out_l
  std::vector<double> delta_, delta_prev_;
  std::size_t batch_ = 0;
};

// Mean squared error over the batch, loss = (1/n) * sum_i (f(x_i) - y_i)^2,
// and its exact gradient w.r.t. every weight and bias (reverse mode).
// The network must have scalar output. Throws on an empty batch or a
// dimension mismatch. Returns the loss.
double backward_mse(const Network& net, std::span<const double* const> inputs,
                    std::span<const double> targets, Gradient& grad,
                    BatchWorkspace& ws);

struct MseResult {
  double loss = 0.0;
  Gradient grad;
};

MseResult backward_mse(const Network& net, const std::vector<std::vector<double>>& inputs,
                       std::span<const double> targets);

// w <- w - stepsize * g, elementwise. Throws on shape mismatch.
void sgd_step(Network& net, const Gradient& grad, double stepsize);

// Flat parameter order: layer-major; within a layer the weight matrix
// row-major (output-neuron rows), then the biases.
std::vector<double> flatten(const Network& net);
void flatten_into(const Network& net, std::vector<double>& out);

// Writes `flat` back into `net`'s existing shape. Throws on length mismatch.
void unflatten_into(Network& net, std::span<const double> flat);
Network unflatten(const Network& shape_template, std::span<const double> flat);

// Text checkpoint: first line the layer sizes, then one parameter per line
// in flatten() order. Activations are not stored; the loader takes them.
void save_network(const Network& net, const std::string& path);
Network load_network(const std::string& path, Activation hidden, Activation output);

}  // namespace pcrl
