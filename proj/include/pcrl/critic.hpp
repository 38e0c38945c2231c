#pragma once

#include <cstddef>
#include <deque>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "pcrl/nn.hpp"
#include "pcrl/rng.hpp"

namespace pcrl {

// One imperishable training point for the parameter critic: a parameter
// vector and a noisy unbiased evaluation of the objective there. Never goes
// stale when the actor moves, so it stays valid for the critic forever.
struct Sample {
  std::vector<double> theta;
  double j_hat = 0.0;
  long iteration = 0;
};

// Bounded FIFO store of Samples; the only way a sample leaves is eviction of
// the oldest entry once capacity is exceeded.
class ReplayBuffer {
 public:
  static constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

  explicit ReplayBuffer(std::size_t capacity = kUnbounded);

  void add(Sample sample);
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t capacity() const { return capacity_; }
  const Sample& operator[](std::size_t i) const { return entries_[i]; }

  // b indices drawn uniformly with replacement from the current entries.
  void minibatch_indices(std::size_t b, Rng& rng, std::vector<std::size_t>& out) const;
  std::vector<Sample> minibatch(std::size_t b, Rng& rng) const;

  // Rows: iteration, j_hat, then the theta coordinates, comma-separated.
  void dump(const std::string& path) const;
  static ReplayBuffer load(const std::string& path, std::size_t capacity = kUnbounded);

 private:
  std::deque<Sample> entries_;
  std::size_t capacity_;
  std::size_t theta_dim_ = 0;  // fixed by the first add
};

// MLP critic over flat parameter vectors, trained by minibatch MSE SGD.
class ParameterCritic {
 public:
  ParameterCritic(Network net, double alpha, int minibatch_size);

  double predict(std::span<const double> theta);

  // One SGD step on a fresh uniform minibatch; returns the pre-step loss.
  double train_step(const ReplayBuffer& buffer, Rng& rng);

  // Mean of (F(theta_i) - j_hat_i)^2 over every buffer entry.
  double buffer_mse(const ReplayBuffer& buffer);

  const Network& net() const { return net_; }
  Network& net() { return net_; }
  double alpha() const { return alpha_; }
  void set_alpha(double a) { alpha_ = a; }
  int minibatch_size() const { return minibatch_size_; }

 private:
  Network net_;
  double alpha_;
  int minibatch_size_;
  Gradient grad_;
  BatchWorkspace ws_;
  ForwardScratch fwd_;
  std::vector<const double*> batch_x_;
  std::vector<double> batch_y_;
  std::vector<std::size_t> batch_idx_;
};

}  // namespace pcrl
