#include "pcrl/critic.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pcrl {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
}

void ReplayBuffer::add(Sample sample) {
  if (theta_dim_ == 0) {
    theta_dim_ = sample.theta.size();
    if (theta_dim_ == 0) throw std::invalid_argument("ReplayBuffer: empty theta");
  } else if (sample.theta.size() != theta_dim_) {
    throw std::invalid_argument("ReplayBuffer: theta dimension mismatch");
  }
  entries_.push_back(std::move(sample));
  while (entries_.size() > capacity_) entries_.pop_front();
}

void ReplayBuffer::minibatch_indices(std::size_t b, Rng& rng,
                                     std::vector<std::size_t>& out) const {
  if (entries_.empty()) throw std::logic_error("ReplayBuffer: minibatch from empty buffer");
  out.resize(b);
  const double n = static_cast<double>(entries_.size());
  for (std::size_t k = 0; k < b; ++k) {
    std::size_t i = static_cast<std::size_t>(rng.uniform() * n);
    if (i >= entries_.size()) i = entries_.size() - 1;  // guard the u == 1-ulp edge
    out[k] = i;
  }
}

std::vector<Sample> ReplayBuffer::minibatch(std::size_t b, Rng& rng) const {
  std::vector<std::size_t> idx;
  minibatch_indices(b, rng, idx);
  std::vector<Sample> out;
  out.reserve(b);
  for (std::size_t i : idx) out.push_back(entries_[i]);
  return out;
}

void ReplayBuffer::dump(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("ReplayBuffer::dump: cannot open " + path);
  char buf[40];
  for (const Sample& s : entries_) {
    f << s.iteration;
    std::snprintf(buf, sizeof buf, "%.17g", s.j_hat);
    f << ',' << buf;
    for (double v : s.theta) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      f << ',' << buf;
    }
    f << '\n';
  }
  if (!f) throw std::runtime_error("ReplayBuffer::dump: write failed for " + path);
}

ReplayBuffer ReplayBuffer::load(const std::string& path, std::size_t capacity) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("ReplayBuffer::load: cannot open " + path);
  ReplayBuffer buf(capacity);
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    Sample s;
    std::string cell;
    if (!std::getline(ls, cell, ',')) continue;
    s.iteration = std::stol(cell);
    if (!std::getline(ls, cell, ','))
      throw std::runtime_error("ReplayBuffer::load: malformed row in " + path);
    s.j_hat = std::stod(cell);
    while (std::getline(ls, cell, ',')) s.theta.push_back(std::stod(cell));
    if (s.theta.empty())
      throw std::runtime_error("ReplayBuffer::load: row without theta in " + path);
    buf.add(std::move(s));
  }
  return buf;
}

ParameterCritic::ParameterCritic(Network net, double alpha, int minibatch_size)
    : net_(std::move(net)), alpha_(alpha), minibatch_size_(minibatch_size) {
  if (net_.output_dim() != 1)
    throw std::invalid_argument("ParameterCritic: network must have scalar output");
  if (alpha_ < 0.0) throw std::invalid_argument("ParameterCritic: alpha must be >= 0");
  if (minibatch_size_ < 1)
    throw std::invalid_argument("ParameterCritic: minibatch size must be >= 1");
  grad_ = make_gradient(net_);
}

double ParameterCritic::predict(std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != net_.input_dim())
    throw std::invalid_argument("ParameterCritic::predict: theta dimension mismatch");
  return fwd_.run(net_, theta)[0];
}

double ParameterCritic::train_step(const ReplayBuffer& buffer, Rng& rng) {
  if (buffer.empty()) throw std::logic_error("ParameterCritic::train_step: empty buffer");
  const std::size_t b = static_cast<std::size_t>(minibatch_size_);
  buffer.minibatch_indices(b, rng, batch_idx_);
  batch_x_.resize(b);
  batch_y_.resize(b);
  for (std::size_t k = 0; k < b; ++k) {
    const Sample& s = buffer[batch_idx_[k]];
    batch_x_[k] = s.theta.data();
    batch_y_[k] = s.j_hat;
  }
  const double loss = backward_mse(net_, batch_x_, batch_y_, grad_, ws_);
  if (alpha_ != 0.0) sgd_step(net_, grad_, alpha_);
  return loss;
}

double ParameterCritic::buffer_mse(const ReplayBuffer& buffer) {
  if (buffer.empty()) throw std::logic_error("ParameterCritic::buffer_mse: empty buffer");
  double acc = 0.0;
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    const Sample& s = buffer[i];
    const double r = predict(s.theta) - s.j_hat;
    acc += r * r;
  }
  return acc / static_cast<double>(buffer.size());
}

}  // namespace pcrl
