#pragma once

#include <memory>
#include <span>

#include "pcrl/rng.hpp"

namespace pcrl {

struct StepResult {
  double reward = 0.0;
  bool done = false;
};

// Episodic environment with a 1-D continuous action. Instances hold mutable
// episode state; use one instance per thread.
class Env {
 public:
  virtual ~Env() = default;
  virtual void reset(Rng& rng) = 0;
  // Advance one step. Throws std::logic_error when called on a terminal state.
  virtual StepResult step(double action) = 0;
  virtual std::span<const double> observation() const = 0;
  virtual int obs_dim() const = 0;
  virtual bool terminal() const = 0;
  // Episode step cap enforced by the environment itself; 0 means none.
  virtual int max_episode_steps() const = 0;
  virtual std::unique_ptr<Env> clone() const = 0;
};

struct CartPoleState {
  double x = 0.0;        // cart position (m)
  double x_dot = 0.0;    // cart velocity (m/s)
  double theta = 0.0;    // pole angle (rad)
  double theta_dot = 0.0;  // pole angular velocity (rad/s)
};

struct CartPoleConfig {
  double gravity = 9.8;
  double cart_mass = 1.0;
  double pole_mass = 0.1;
  double half_length = 0.5;  // pole half-length (m)
  double force_mag = 10.0;   // largest applicable |force| (N)
  double tau = 0.02;         // integration step (s)
  int max_steps = 200;
  double x_limit = 2.4;
  double theta_limit = 0.20943951023931953;  // 12 degrees
};

// Cart with an inverted pole, forward-Euler integrated. Reward is +1 on a
// step that stays inside the position/angle bounds and -1 on the step that
// leaves them (which also ends the episode). Hitting the step cap ends the
// episode without the -1.
class CartPole final : public Env {
 public:
  explicit CartPole(CartPoleConfig cfg = {});

  void reset(Rng& rng) override;  // each component uniform in [-0.05, 0.05]
  StepResult step(double force) override;
  std::span<const double> observation() const override;
  int obs_dim() const override { return 4; }
  bool terminal() const override { return done_; }
  int max_episode_steps() const override { return cfg_.max_steps; }
  std::unique_ptr<Env> clone() const override;

  const CartPoleConfig& config() const { return cfg_; }
  const CartPoleState& state() const { return state_; }
  // Test seam: place the system at an arbitrary (possibly near-terminal) state.
  void set_state(const CartPoleState& s);
  bool out_of_bounds(const CartPoleState& s) const;

 private:
  CartPoleConfig cfg_;
  CartPoleState state_;
  double obs_[4] = {0, 0, 0, 0};
  int steps_ = 0;
  bool done_ = false;

  void sync_obs();
};

// The noisy quadratic ||theta||^2 plus N(0, sigma^2) observation noise;
// with `maximize` set the deterministic part flips sign to -||theta||^2.
struct SyntheticObjective {
  double noise_sigma = 0.0;
  bool maximize = false;
};

double synthetic_eval(const SyntheticObjective& obj, std::span<const double> theta, Rng& rng);

}  // namespace pcrl
