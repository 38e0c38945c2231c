#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pcrl/critic.hpp"
#include "pcrl/env.hpp"
#include "pcrl/nn.hpp"
#include "pcrl/sampler.hpp"
#include "pcrl/zo.hpp"

namespace pcrl {

struct TrainConfig {
  double eta = 0.1;    // actor stepsize
  double mu = 0.005;   // smoothing radius
  double alpha = 0.005;  // critic stepsize
  int critic_steps_per_iter = 1;
  int minibatch = 1;
  std::size_t buffer_capacity = ReplayBuffer::kUnbounded;
  long iterations = 10000;
  Direction direction = Direction::Descend;

  SamplerConfig sampler;        // Synthetic / Finite / Geometric
  double noise_sigma = 0.0;     // synthetic mode observation noise
  int theta_dim = 1;            // synthetic mode: dimension of theta
  double theta0 = 1.0;          // synthetic mode: initial value of every coordinate

  std::vector<int> actor_hidden;  // rollout modes: hidden layer sizes
  Activation actor_hidden_act = Activation::Relu;
  Activation actor_output_act = Activation::Tanh;
  double action_scale = 10.0;

  std::vector<int> critic_hidden = {256};
  Activation critic_hidden_act = Activation::Sigmoid2;

  std::uint64_t master_seed = 0;

  long eval_interval = 0;  // rollout modes: evaluate every n iterations (0 = never)
  int eval_episodes = 20;
  long mse_interval = 1;   // record critic buffer MSE every n iterations (0 = never)

  // Skip the critic in the actor update (raw samples drive it instead) while
  // the buffer and critic training still run. Under one master seed this must
  // reproduce the baseline actor trajectory exactly, which pins down that the
  // named substreams really are independent.
  bool bypass_critic = false;
};

struct TrainRecord {
  long iteration = 0;
  double j_plus = 0.0;
  double j_minus = 0.0;
  std::optional<double> f_plus;      // critic loop only
  std::optional<double> f_minus;     // critic loop only
  std::optional<double> critic_mse;  // critic loop, at mse_interval
  double theta_norm_sq = 0.0;
  std::optional<double> eval_return;  // rollout modes, at eval_interval
  double elapsed_seconds = 0.0;       // wall clock, not reproducible
};

struct TrainResult {
  std::vector<TrainRecord> records;
  std::vector<double> theta;  // final actor parameters
  Network actor;              // rollout modes: final actor (empty otherwise)
  Network critic;             // critic loop: final critic (empty otherwise)
  ReplayBuffer buffer{ReplayBuffer::kUnbounded};  // critic loop: final buffer
};

// Called after each iteration's record is written (progress/CSV streaming).
using RecordCallback = std::function<void(const TrainRecord&)>;
// Called every checkpoint interval with the current actor parameters and the
// critic network (null in the baseline loop).
using CheckpointCallback =
    std::function<void(long iteration, const std::vector<double>& theta, const Network* critic)>;

struct TrainHooks {
  RecordCallback on_record;
  CheckpointCallback on_checkpoint;
  long checkpoint_interval = 0;
};

// Critic-free zeroth-order loop: two fresh noisy samples drive every update.
TrainResult run_baseline(const TrainConfig& cfg, Env* env, const TrainHooks& hooks = {});

// Full loop: samples feed the replay buffer, the critic trains on it, and the
// actor follows the critic's two-point estimate.
TrainResult run_parameter_critic(const TrainConfig& cfg, Env* env, const TrainHooks& hooks = {});

// Mean return of `episodes` fresh finite-horizon rollouts under a fixed policy.
double evaluate_policy(Env& env, const Policy& policy, int episodes, long horizon, Rng& rng);

}  // namespace pcrl
