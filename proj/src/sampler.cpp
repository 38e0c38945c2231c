#include "pcrl/sampler.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pcrl {

SamplerMode sampler_mode_from_string(std::string_view s) {
  if (s == "finite") return SamplerMode::Finite;
  if (s == "geometric") return SamplerMode::Geometric;
  if (s == "synthetic") return SamplerMode::Synthetic;
  throw std::invalid_argument("unknown sampler mode: " + std::string(s));
}

std::string_view to_string(SamplerMode m) {
  switch (m) {
    case SamplerMode::Finite: return "finite";
    case SamplerMode::Geometric: return "geometric";
    case SamplerMode::Synthetic: return "synthetic";
  }
  return "synthetic";
}

long draw_geometric(double gamma, Rng& rng) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("draw_geometric: gamma must be in (0, 1)");
  // Inverse CDF: H = 1 + floor(log(1 - U) / log(gamma)), U in [0, 1).
  const double u = rng.uniform();
  const double h = std::floor(std::log1p(-u) / std::log(gamma));
  if (!(h < 1e18)) return static_cast<long>(1e18);
  return 1 + static_cast<long>(h);
}

double sample_finite_horizon(Env& env, const Policy& policy, long horizon, Rng& rng) {
  if (horizon < 1) throw std::invalid_argument("sample_finite_horizon: horizon must be >= 1");
  env.reset(rng);
  double total = 0.0;
  for (long t = 0; t < horizon; ++t) {
    const StepResult r = env.step(policy(env.observation()));
    total += r.reward;
    if (r.done) break;
  }
  return total;
}

double sample_geometric_horizon(Env& env, const Policy& policy, double gamma, Rng& rng) {
  const long h = draw_geometric(gamma, rng);
  return sample_finite_horizon(env, policy, h, rng);
}

ObjectiveSampler ObjectiveSampler::synthetic(SyntheticObjective obj, int param_dim) {
  if (param_dim < 1) throw std::invalid_argument("ObjectiveSampler: param_dim must be >= 1");
  ObjectiveSampler s;
  s.cfg_.mode = SamplerMode::Synthetic;
  s.synthetic_ = obj;
  s.param_dim_ = param_dim;
  return s;
}

ObjectiveSampler ObjectiveSampler::rollout(const SamplerConfig& cfg, Env& env,
                                           Network actor_template, double action_scale) {
  if (cfg.mode == SamplerMode::Synthetic)
    throw std::invalid_argument("ObjectiveSampler::rollout: synthetic mode has no environment");
  if (actor_template.input_dim() != env.obs_dim())
    throw std::invalid_argument("ObjectiveSampler: actor input dim does not match observation");
  if (actor_template.output_dim() != 1)
    throw std::invalid_argument("ObjectiveSampler: actor must have scalar output");
  ObjectiveSampler s;
  s.cfg_ = cfg;
  s.env_ = &env;
  s.actor_ = std::move(actor_template);
  s.action_scale_ = action_scale;
  s.param_dim_ = static_cast<int>(s.actor_.param_count());
  return s;
}

Policy ObjectiveSampler::make_policy(std::span<const double> theta) {
  unflatten_into(actor_, theta);
  return [this](std::span<const double> obs) {
    return action_scale_ * scratch_.run(actor_, obs)[0];
  };
}

double ObjectiveSampler::sample(std::span<const double> theta, Rng& rng) {
  if (static_cast<int>(theta.size()) != param_dim_)
    throw std::invalid_argument("ObjectiveSampler::sample: theta dimension mismatch");
  switch (cfg_.mode) {
    case SamplerMode::Synthetic:
      return synthetic_eval(synthetic_, theta, rng);
    case SamplerMode::Finite:
      return sample_finite_horizon(*env_, make_policy(theta), cfg_.horizon, rng);
    case SamplerMode::Geometric:
      return sample_geometric_horizon(*env_, make_policy(theta), cfg_.gamma, rng);
  }
  throw std::logic_error("ObjectiveSampler::sample: bad mode");
}

}  // namespace pcrl
