#include "pcrl/env.hpp"

#include <cmath>
#include <stdexcept>

namespace pcrl {

CartPole::CartPole(CartPoleConfig cfg) : cfg_(cfg) { sync_obs(); }

void CartPole::sync_obs() {
  obs_[0] = state_.x;
  obs_[1] = state_.x_dot;
  obs_[2] = state_.theta;
  obs_[3] = state_.theta_dot;
}

bool CartPole::out_of_bounds(const CartPoleState& s) const {
  return std::abs(s.x) > cfg_.x_limit || std::abs(s.theta) > cfg_.theta_limit;
}

void CartPole::reset(Rng& rng) {
  state_.x = rng.uniform(-0.05, 0.05);
  state_.x_dot = rng.uniform(-0.05, 0.05);
  state_.theta = rng.uniform(-0.05, 0.05);
  state_.theta_dot = rng.uniform(-0.05, 0.05);
  steps_ = 0;
  done_ = false;
  sync_obs();
}

void CartPole::set_state(const CartPoleState& s) {
  state_ = s;
  steps_ = 0;
  done_ = out_of_bounds(s);
  sync_obs();
}

StepResult CartPole::step(double force) {
  if (done_) throw std::logic_error("CartPole::step: episode already terminal");

  const double total_mass = cfg_.cart_mass + cfg_.pole_mass;
  const double polemass_length = cfg_.pole_mass * cfg_.half_length;
  const double cos_t = std::cos(state_.theta);
  const double sin_t = std::sin(state_.theta);

  const double temp =
      (force + polemass_length * state_.theta_dot * state_.theta_dot * sin_t) / total_mass;
  const double theta_acc = (cfg_.gravity * sin_t - cos_t * temp) /
                           (cfg_.half_length * (4.0 / 3.0 - cfg_.pole_mass * cos_t * cos_t / total_mass));
  const double x_acc = temp - polemass_length * theta_acc * cos_t / total_mass;

  // Forward Euler, positions advanced with the pre-step velocities.
  state_.x += cfg_.tau * state_.x_dot;
  state_.x_dot += cfg_.tau * x_acc;
  state_.theta += cfg_.tau * state_.theta_dot;
  state_.theta_dot += cfg_.tau * theta_acc;
  ++steps_;
  sync_obs();

  StepResult r;
  if (out_of_bounds(state_)) {
    r.reward = -1.0;
    r.done = true;
  } else {
    r.reward = 1.0;
    r.done = cfg_.max_steps > 0 && steps_ >= cfg_.max_steps;
  }
  done_ = r.done;
  return r;
}

std::span<const double> CartPole::observation() const { return {obs_, 4}; }

std::unique_ptr<Env> CartPole::clone() const { return std::make_unique<CartPole>(cfg_); }

double synthetic_eval(const SyntheticObjective& obj, std::span<const double> theta, Rng& rng) {
  double sq = 0.0;
  for (double v : theta) sq += v * v;
  if (obj.maximize) sq = -sq;
  const double noise = obj.noise_sigma > 0.0 ? obj.noise_sigma * rng.normal() : 0.0;
  return sq + noise;
}

}  // namespace pcrl
