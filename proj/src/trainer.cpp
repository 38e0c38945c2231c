#include "pcrl/trainer.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace pcrl {

namespace {

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

double norm_sq(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

struct RunSetup {
  ObjectiveSampler sampler;
  std::vector<double> theta0;
  Network actor;  // rollout modes only
};

RunSetup make_setup(const TrainConfig& cfg, Env* env, Rng& rng_init) {
  if (cfg.sampler.mode == SamplerMode::Synthetic) {
    if (cfg.theta_dim < 1)
      throw std::invalid_argument("trainer: theta_dim must be >= 1 in synthetic mode");
    SyntheticObjective obj;
    obj.noise_sigma = cfg.noise_sigma;
    RunSetup s{ObjectiveSampler::synthetic(obj, cfg.theta_dim),
               std::vector<double>(static_cast<std::size_t>(cfg.theta_dim), cfg.theta0),
               Network{}};
    return s;
  }
  if (env == nullptr)
    throw std::invalid_argument("trainer: rollout sampler modes need an environment");
  std::vector<int> sizes;
  sizes.push_back(env->obs_dim());
  sizes.insert(sizes.end(), cfg.actor_hidden.begin(), cfg.actor_hidden.end());
  sizes.push_back(1);
  Network actor = init_network(sizes, cfg.actor_hidden_act, cfg.actor_output_act, rng_init);
  std::vector<double> theta0 = flatten(actor);
  RunSetup s{ObjectiveSampler::rollout(cfg.sampler, *env, actor, cfg.action_scale),
             std::move(theta0), std::move(actor)};
  return s;
}

TrainResult run_loop(const TrainConfig& cfg, Env* env, const TrainHooks& hooks,
                     bool with_critic) {
  if (!(cfg.eta > 0.0)) throw std::invalid_argument("trainer: eta must be > 0");
  if (!(cfg.mu > 0.0)) throw std::invalid_argument("trainer: mu must be > 0");
  if (cfg.iterations < 1) throw std::invalid_argument("trainer: iterations must be >= 1");

  Rng rng_init = Rng::substream(cfg.master_seed, Stream::Init);
  Rng rng_pert = Rng::substream(cfg.master_seed, Stream::Perturbation);
  Rng rng_roll_plus = Rng::substream(cfg.master_seed, Stream::RolloutPlus);
  Rng rng_roll_minus = Rng::substream(cfg.master_seed, Stream::RolloutMinus);
  Rng rng_minibatch = Rng::substream(cfg.master_seed, Stream::Minibatch);
  Rng rng_eval = Rng::substream(cfg.master_seed, Stream::Eval);

  RunSetup setup = make_setup(cfg, env, rng_init);
  const int p = setup.sampler.param_dim();

  TrainResult result;
  result.theta = setup.theta0;
  result.buffer = ReplayBuffer(cfg.buffer_capacity);
  result.records.reserve(static_cast<std::size_t>(cfg.iterations));

  std::unique_ptr<ParameterCritic> critic;
  if (with_critic) {
    std::vector<int> csizes;
    csizes.push_back(p);
    csizes.insert(csizes.end(), cfg.critic_hidden.begin(), cfg.critic_hidden.end());
    csizes.push_back(1);
    Network cnet = init_network(csizes, cfg.critic_hidden_act, Activation::Identity, rng_init);
    critic = std::make_unique<ParameterCritic>(std::move(cnet), cfg.alpha, cfg.minibatch);
  }

  // Separate env instance for evaluation so rollout streams stay untouched.
  std::unique_ptr<Env> eval_env;
  if (env != nullptr && cfg.eval_interval > 0) eval_env = env->clone();

  std::vector<double> u, estimate;
  std::vector<double> theta_plus(p), theta_minus(p);
  const auto t_start = std::chrono::steady_clock::now();

  for (long t = 0; t < cfg.iterations; ++t) {
    draw_perturbation(p, rng_pert, u);
    for (int i = 0; i < p; ++i) {
      theta_plus[i] = result.theta[i] + cfg.mu * u[i];
      theta_minus[i] = result.theta[i] - cfg.mu * u[i];
    }
    const double j_plus = setup.sampler.sample(theta_plus, rng_roll_plus);
    const double j_minus = setup.sampler.sample(theta_minus, rng_roll_minus);

    TrainRecord rec;
    rec.iteration = t;
    rec.j_plus = j_plus;
    rec.j_minus = j_minus;

    if (with_critic) {
      result.buffer.add(Sample{theta_plus, j_plus, t});
      result.buffer.add(Sample{theta_minus, j_minus, t});
      for (int k = 0; k < cfg.critic_steps_per_iter; ++k)
        critic->train_step(result.buffer, rng_minibatch);
      const double f_plus = critic->predict(theta_plus);
      const double f_minus = critic->predict(theta_minus);
      rec.f_plus = f_plus;
      rec.f_minus = f_minus;
      if (cfg.mse_interval > 0 && (t + 1) % cfg.mse_interval == 0)
        rec.critic_mse = critic->buffer_mse(result.buffer);
      if (cfg.bypass_critic)
        two_point_estimate(j_plus, j_minus, cfg.mu, u, estimate);
      else
        two_point_estimate(f_plus, f_minus, cfg.mu, u, estimate);
    } else {
      two_point_estimate(j_plus, j_minus, cfg.mu, u, estimate);
    }

    actor_update(result.theta, estimate, cfg.eta, cfg.direction);
    if (!all_finite(result.theta))
      throw std::runtime_error("trainer: actor parameters diverged at iteration " +
                               std::to_string(t));

    rec.theta_norm_sq = norm_sq(result.theta);

    if (eval_env && cfg.eval_interval > 0 && (t + 1) % cfg.eval_interval == 0) {
      const Policy pol = setup.sampler.make_policy(result.theta);
      const long horizon =
          cfg.sampler.mode == SamplerMode::Finite ? cfg.sampler.horizon
                                                  : eval_env->max_episode_steps();
      rec.eval_return = evaluate_policy(*eval_env, pol, cfg.eval_episodes, horizon, rng_eval);
    }

    rec.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    result.records.push_back(rec);
    if (hooks.on_record) hooks.on_record(result.records.back());
    if (hooks.on_checkpoint && hooks.checkpoint_interval > 0 &&
        (t + 1) % hooks.checkpoint_interval == 0)
      hooks.on_checkpoint(t, result.theta, critic ? &critic->net() : nullptr);
  }

  if (!setup.actor.empty()) result.actor = unflatten(setup.actor, result.theta);
  if (critic) result.critic = critic->net();
  return result;
}

}  // namespace

TrainResult run_baseline(const TrainConfig& cfg, Env* env, const TrainHooks& hooks) {
  return run_loop(cfg, env, hooks, /*with_critic=*/false);
}

TrainResult run_parameter_critic(const TrainConfig& cfg, Env* env, const TrainHooks& hooks) {
  if (cfg.critic_steps_per_iter < 0)
    throw std::invalid_argument("trainer: critic_steps_per_iter must be >= 0");
  return run_loop(cfg, env, hooks, /*with_critic=*/true);
}

double evaluate_policy(Env& env, const Policy& policy, int episodes, long horizon, Rng& rng) {
  if (episodes < 1) throw std::invalid_argument("evaluate_policy: episodes must be >= 1");
  if (horizon < 1) horizon = env.max_episode_steps() > 0 ? env.max_episode_steps() : 200;
  double total = 0.0;
  for (int e = 0; e < episodes; ++e) total += sample_finite_horizon(env, policy, horizon, rng);
  return total / episodes;
}

}  // namespace pcrl
