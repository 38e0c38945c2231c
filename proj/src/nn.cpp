#include "pcrl/nn.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pcrl {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::Identity: return "identity";
    case Activation::Sigmoid2: return "sigmoid2";
    case Activation::Relu: return "relu";
    case Activation::Tanh: return "tanh";
  }
  return "identity";
}

Activation activation_from_string(std::string_view s) {
  if (s == "identity") return Activation::Identity;
  if (s == "sigmoid2") return Activation::Sigmoid2;
  if (s == "relu") return Activation::Relu;
  if (s == "tanh") return Activation::Tanh;
  throw std::invalid_argument("unknown activation: " + std::string(s));
}

namespace {

inline double apply_act(Activation a, double x) {
  switch (a) {
    case Activation::Identity: return x;
    case Activation::Sigmoid2: return sigmoid2(x);
    case Activation::Relu: return x > 0.0 ? x : 0.0;
    case Activation::Tanh: return std::tanh(x);
  }
  return x;
}

// Derivative in terms of the activation value (all four have that form; for
// relu the sign of the output matches the sign of the preactivation).
inline double act_deriv_from_value(Activation a, double v) {
  switch (a) {
    case Activation::Identity: return 1.0;
    case Activation::Sigmoid2: return 2.0 * v * (1.0 - v);
    case Activation::Relu: return v > 0.0 ? 1.0 : 0.0;
    case Activation::Tanh: return 1.0 - v * v;
  }
  return 1.0;
}

// out[s] = act(W * in[s] + b) for every sample row.
void layer_forward_batch(const Layer& L, std::size_t batch, const double* const* in_rows,
                         std::vector<double>& out) {
  const double* w = L.w.data();
  for (std::size_t s = 0; s < batch; ++s) {
    const double* x = in_rows[s];
    double* y = out.data() + s * static_cast<std::size_t>(L.out);
    for (int o = 0; o < L.out; ++o) {
      const double* wrow = w + static_cast<std::size_t>(o) * L.in;
      double acc = L.b[static_cast<std::size_t>(o)];
#pragma omp simd reduction(+ : acc)
      for (int i = 0; i < L.in; ++i) acc += wrow[i] * x[i];
      y[o] = apply_act(L.act, acc);
    }
  }
}

}  // namespace

std::vector<int> Network::layer_sizes() const {
  std::vector<int> s;
  if (layers.empty()) return s;
  s.push_back(layers.front().in);
  for (const Layer& l : layers) s.push_back(l.out);
  return s;
}

std::size_t Network::param_count() const {
  std::size_t q = 0;
  for (const Layer& l : layers)
    q += static_cast<std::size_t>(l.in) * l.out + static_cast<std::size_t>(l.out);
  return q;
}

bool Network::same_shape(const Network& other) const {
  if (layers.size() != other.layers.size()) return false;
  for (std::size_t i = 0; i < layers.size(); ++i)
    if (layers[i].in != other.layers[i].in || layers[i].out != other.layers[i].out)
      return false;
  return true;
}

Network init_network(const std::vector<int>& layer_sizes, Activation hidden,
                     Activation output, Rng& rng) {
  if (layer_sizes.size() < 2)
    throw std::invalid_argument("init_network: need at least input and output sizes");
  for (int s : layer_sizes)
    if (s < 1) throw std::invalid_argument("init_network: layer sizes must be >= 1");

  Network net;
  net.layers.resize(layer_sizes.size() - 1);
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    Layer& L = net.layers[l];
    L.in = layer_sizes[l];
    L.out = layer_sizes[l + 1];
    L.act = (l + 1 == net.layers.size()) ? output : hidden;
    L.w.resize(static_cast<std::size_t>(L.in) * L.out);
    L.b.assign(static_cast<std::size_t>(L.out), 0.0);
    const double bound = 1.0 / std::sqrt(static_cast<double>(L.in));
    for (double& w : L.w) w = rng.uniform(-bound, bound);
  }
  return net;
}

Network init_network(const std::vector<int>& layer_sizes, Activation hidden,
                     Activation output, std::uint64_t seed) {
  Rng rng(seed);
  return init_network(layer_sizes, hidden, output, rng);
}

std::span<const double> ForwardScratch::run(const Network& net, std::span<const double> input) {
  if (net.empty()) throw std::invalid_argument("forward: empty network");
  if (static_cast<int>(input.size()) != net.input_dim())
    throw std::invalid_argument("forward: input length " + std::to_string(input.size()) +
                                " does not match first layer size " +
                                std::to_string(net.input_dim()));
  const double* x = input.data();
  int cur = 0;
  for (const Layer& L : net.layers) {
    std::vector<double>& y = buf_[cur];
    y.resize(static_cast<std::size_t>(L.out));
    const double* const rows[1] = {x};
    layer_forward_batch(L, 1, rows, y);
    x = y.data();
    cur ^= 1;
  }
  const std::vector<double>& last = buf_[cur ^ 1];
  return {last.data(), last.size()};
}

std::vector<double> forward(const Network& net, std::span<const double> input) {
  ForwardScratch scratch;
  auto out = scratch.run(net, input);
  return {out.begin(), out.end()};
}

void Gradient::zero() {
  for (LayerGrad& l : layers) {
    std::fill(l.w.begin(), l.w.end(), 0.0);
    std::fill(l.b.begin(), l.b.end(), 0.0);
  }
}

bool Gradient::congruent_with(const Network& net) const {
  if (layers.size() != net.layers.size()) return false;
  for (std::size_t i = 0; i < layers.size(); ++i)
    if (layers[i].w.size() != net.layers[i].w.size() ||
        layers[i].b.size() != net.layers[i].b.size())
      return false;
  return true;
}

Gradient make_gradient(const Network& net) {
  Gradient g;
  g.layers.resize(net.layers.size());
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    g.layers[i].w.assign(net.layers[i].w.size(), 0.0);
    g.layers[i].b.assign(net.layers[i].b.size(), 0.0);
  }
  return g;
}

void BatchWorkspace::prepare(const Network& net, std::size_t batch) {
  act_.resize(net.layers.size());
  std::size_t widest = 0;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    act_[l].resize(batch * static_cast<std::size_t>(net.layers[l].out));
    widest = std::max(widest, static_cast<std::size_t>(net.layers[l].out));
  }
  delta_.resize(batch * widest);
  delta_prev_.resize(batch * widest);
  batch_ = batch;
}

double backward_mse(const Network& net, std::span<const double* const> inputs,
                    std::span<const double> targets, Gradient& grad, BatchWorkspace& ws) {
  if (net.empty()) throw std::invalid_argument("backward_mse: empty network");
  if (net.output_dim() != 1)
    throw std::invalid_argument("backward_mse: network output must be scalar");
  const std::size_t n = inputs.size();
  if (n == 0) throw std::invalid_argument("backward_mse: empty batch");
  if (targets.size() != n)
    throw std::invalid_argument("backward_mse: inputs/targets size mismatch");
  if (!grad.congruent_with(net))
    throw std::invalid_argument("backward_mse: gradient shape mismatch");

  ws.prepare(net, n);
  const std::size_t nl = net.layers.size();

  // Forward, keeping every layer's activations.
  std::vector<const double*> rows(n);
  for (std::size_t s = 0; s < n; ++s) rows[s] = inputs[s];
  for (std::size_t l = 0; l < nl; ++l) {
    const Layer& L = net.layers[l];
    layer_forward_batch(L, n, rows.data(), ws.act_[l]);
    for (std::size_t s = 0; s < n; ++s)
      rows[s] = ws.act_[l].data() + s * static_cast<std::size_t>(L.out);
  }

  double loss = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  // delta for the output layer: dLoss/dz = 2(f - y)/n * act'(z)
  for (std::size_t s = 0; s < n; ++s) {
    const double f = ws.act_[nl - 1][s];
    const double r = f - targets[s];
    loss += r * r;
    ws.delta_[s] = 2.0 * r * inv_n * act_deriv_from_value(net.layers[nl - 1].act, f);
  }
  loss *= inv_n;

  grad.zero();
  for (std::size_t l = nl; l-- > 0;) {
    const Layer& L = net.layers[l];
    Gradient::LayerGrad& G = grad.layers[l];
    const std::size_t in_sz = static_cast<std::size_t>(L.in);
    const std::size_t out_sz = static_cast<std::size_t>(L.out);

    // dW[o][i] += sum_s delta[s][o] * a_prev[s][i];  db[o] += sum_s delta[s][o]
    for (std::size_t s = 0; s < n; ++s) {
      const double* aprev = (l == 0) ? inputs[s] : ws.act_[l - 1].data() + s * in_sz;
      const double* d = ws.delta_.data() + s * out_sz;
      for (std::size_t o = 0; o < out_sz; ++o) {
        const double dv = d[o];
        if (dv == 0.0) continue;
        double* gw = G.w.data() + o * in_sz;
#pragma omp simd
        for (std::size_t i = 0; i < in_sz; ++i) gw[i] += dv * aprev[i];
        G.b[o] += dv;
      }
    }

    if (l == 0) break;

    // delta_prev[s][i] = act'(a_prev[s][i]) * sum_o w[o][i] * delta[s][o]
    const Layer& Lprev = net.layers[l - 1];
    for (std::size_t s = 0; s < n; ++s) {
      const double* d = ws.delta_.data() + s * out_sz;
      double* dp = ws.delta_prev_.data() + s * in_sz;
      std::fill(dp, dp + in_sz, 0.0);
      for (std::size_t o = 0; o < out_sz; ++o) {
        const double dv = d[o];
        if (dv == 0.0) continue;
        const double* wrow = L.w.data() + o * in_sz;
#pragma omp simd
        for (std::size_t i = 0; i < in_sz; ++i) dp[i] += dv * wrow[i];
      }
      const double* aprev = ws.act_[l - 1].data() + s * in_sz;
      for (std::size_t i = 0; i < in_sz; ++i)
        dp[i] *= act_deriv_from_value(Lprev.act, aprev[i]);
    }
    std::swap(ws.delta_, ws.delta_prev_);
  }
  return loss;
}

MseResult backward_mse(const Network& net, const std::vector<std::vector<double>>& inputs,
                       std::span<const double> targets) {
  for (const auto& x : inputs)
    if (static_cast<int>(x.size()) != net.input_dim())
      throw std::invalid_argument("backward_mse: input dimension mismatch");
  std::vector<const double*> rows(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) rows[i] = inputs[i].data();
  MseResult res;
  res.grad = make_gradient(net);
  BatchWorkspace ws;
  res.loss = backward_mse(net, rows, targets, res.grad, ws);
  return res;
}

void sgd_step(Network& net, const Gradient& grad, double stepsize) {
  if (!grad.congruent_with(net)) throw std::invalid_argument("sgd_step: shape mismatch");
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    Layer& L = net.layers[l];
    const Gradient::LayerGrad& G = grad.layers[l];
    for (std::size_t i = 0; i < L.w.size(); ++i) L.w[i] -= stepsize * G.w[i];
    for (std::size_t i = 0; i < L.b.size(); ++i) L.b[i] -= stepsize * G.b[i];
  }
}

void flatten_into(const Network& net, std::vector<double>& out) {
  out.clear();
  out.reserve(net.param_count());
  for (const Layer& L : net.layers) {
    out.insert(out.end(), L.w.begin(), L.w.end());
    out.insert(out.end(), L.b.begin(), L.b.end());
  }
}

std::vector<double> flatten(const Network& net) {
  std::vector<double> v;
  flatten_into(net, v);
  return v;
}

void unflatten_into(Network& net, std::span<const double> flat) {
  if (flat.size() != net.param_count())
    throw std::invalid_argument("unflatten: expected " + std::to_string(net.param_count()) +
                                " values, got " + std::to_string(flat.size()));
  std::size_t pos = 0;
  for (Layer& L : net.layers) {
    std::copy_n(flat.data() + pos, L.w.size(), L.w.data());
    pos += L.w.size();
    std::copy_n(flat.data() + pos, L.b.size(), L.b.data());
    pos += L.b.size();
  }
}

Network unflatten(const Network& shape_template, std::span<const double> flat) {
  Network net = shape_template;
  unflatten_into(net, flat);
  return net;
}

void save_network(const Network& net, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("save_network: cannot open " + path);
  const std::vector<int> sizes = net.layer_sizes();
  for (std::size_t i = 0; i < sizes.size(); ++i) f << (i ? " " : "") << sizes[i];
  f << "\n";
  char buf[40];
  for (const double v : flatten(net)) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    f << buf << "\n";
  }
  if (!f) throw std::runtime_error("save_network: write failed for " + path);
}

Network load_network(const std::string& path, Activation hidden, Activation output) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("load_network: cannot open " + path);
  std::string header;
  if (!std::getline(f, header)) throw std::runtime_error("load_network: missing header");
  std::istringstream hs(header);
  std::vector<int> sizes;
  for (int s; hs >> s;) sizes.push_back(s);
  Rng rng(0);
  Network net = init_network(sizes, hidden, output, rng);
  std::vector<double> flat(net.param_count());
  for (double& v : flat)
    if (!(f >> v)) throw std::runtime_error("load_network: truncated file " + path);
  unflatten_into(net, flat);
  return net;
}

}  // namespace pcrl
