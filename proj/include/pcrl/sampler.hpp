#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "pcrl/env.hpp"
#include "pcrl/nn.hpp"
#include "pcrl/rng.hpp"

namespace pcrl {

enum class SamplerMode { Finite, Geometric, Synthetic };

SamplerMode sampler_mode_from_string(std::string_view s);
std::string_view to_string(SamplerMode m);

struct SamplerConfig {
  SamplerMode mode = SamplerMode::Synthetic;
  int horizon = 200;    // Finite
  double gamma = 0.99;  // Geometric
};

// P(H = h) = (1 - gamma) * gamma^(h-1) on {1, 2, ...}; E[H] = 1/(1 - gamma).
// Collecting exactly H undiscounted rewards then makes the rollout sum an
// unbiased estimate of the gamma-discounted infinite-horizon value.
// Throws std::invalid_argument unless gamma is in (0, 1).
long draw_geometric(double gamma, Rng& rng);

// Maps an observation to the 1-D action.
using Policy = std::function<double(std::span<const double>)>;

// Reset, then roll out up to `horizon` steps (terminal states stop early);
// returns the undiscounted reward sum.
double sample_finite_horizon(Env& env, const Policy& policy, long horizon, Rng& rng);

// Algorithm: draw H geometric(1 - gamma), then collect H undiscounted rewards.
double sample_geometric_horizon(Env& env, const Policy& policy, double gamma, Rng& rng);

// Mode-agnostic front door: one noisy unbiased evaluation of the objective at
// a flat parameter vector. Rollout modes unflatten theta into an actor
// network whose scalar output, scaled by `action_scale`, is the action.
class ObjectiveSampler {
 public:
  static ObjectiveSampler synthetic(SyntheticObjective obj, int param_dim);
  static ObjectiveSampler rollout(const SamplerConfig& cfg, Env& env, Network actor_template,
                                  double action_scale);

  double sample(std::span<const double> theta, Rng& rng);
  int param_dim() const { return param_dim_; }
  SamplerMode mode() const { return cfg_.mode; }

  // Policy closure over the given flat parameters (also used for evaluation).
  Policy make_policy(std::span<const double> theta);

 private:
  ObjectiveSampler() = default;
  SamplerConfig cfg_;
  SyntheticObjective synthetic_{};
  Env* env_ = nullptr;
  Network actor_;
  ForwardScratch scratch_;
  double action_scale_ = 1.0;
  int param_dim_ = 0;
};

}  // namespace pcrl
