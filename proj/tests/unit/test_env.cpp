#include <doctest.h>

#include <cmath>

#include "pcrl/env.hpp"

using namespace pcrl;

TEST_CASE("cartpole reset draws uniformly in [-0.05, 0.05] and is deterministic") {
  CartPole env;
  Rng a(11), b(11);
  env.reset(a);
  const CartPoleState s1 = env.state();
  CartPole env2;
  env2.reset(b);
  const CartPoleState s2 = env2.state();
  CHECK(s1.x == s2.x);
  CHECK(s1.x_dot == s2.x_dot);
  CHECK(s1.theta == s2.theta);
  CHECK(s1.theta_dot == s2.theta_dot);

  Rng rng(7);
  double sums[4] = {0, 0, 0, 0};
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    env.reset(rng);
    const CartPoleState& s = env.state();
    const double comp[4] = {s.x, s.x_dot, s.theta, s.theta_dot};
    for (int c = 0; c < 4; ++c) {
      CHECK(std::abs(comp[c]) <= 0.05);
      sums[c] += comp[c];
    }
    CHECK(!env.terminal());  // every drawn state is inside the bounds
  }
  const double se = 0.05 / std::sqrt(3.0) / 100.0;  // sd of U(-.05,.05) over sqrt(1e4)
  for (int c = 0; c < 4; ++c) CHECK(std::abs(sums[c] / n) < 3 * se);
}

TEST_CASE("cartpole zero state with zero force is a fixed point") {
  CartPole env;
  env.set_state(CartPoleState{});
  for (int i = 0; i < 150; ++i) {
    const StepResult r = env.step(0.0);
    CHECK(r.reward == 1.0);
    CHECK(!r.done);
    CHECK(env.state().x == 0.0);
    CHECK(env.state().x_dot == 0.0);
    CHECK(env.state().theta == 0.0);
    CHECK(env.state().theta_dot == 0.0);
  }
}

TEST_CASE("cartpole: one step under full force from the origin") {
  CartPole env;
  env.set_state(CartPoleState{});
  const StepResult r = env.step(10.0);
  CHECK(r.reward == 1.0);
  CHECK(!r.done);
  // temp = 10/1.1; theta_acc = -temp / (0.5*(4/3 - 0.1/1.1));
  // x_acc = temp - 0.05*theta_acc/1.1; one Euler step with tau = 0.02
  CHECK(env.state().x == 0.0);
  CHECK(env.state().theta == 0.0);
  CHECK(env.state().x_dot == doctest::Approx(0.1951219512195122).epsilon(1e-12));
  CHECK(env.state().theta_dot == doctest::Approx(-0.2926829268292683).epsilon(1e-12));
}

TEST_CASE("cartpole terminates with -1 when a bound is crossed") {
  CartPole env;
  CartPoleState s;
  s.theta = 0.2090;  // just inside 12 degrees
  s.theta_dot = 1.0;
  env.set_state(s);
  const StepResult r = env.step(0.0);
  CHECK(r.reward == -1.0);
  CHECK(r.done);
  CHECK(env.terminal());
  CHECK_THROWS_AS(env.step(0.0), std::logic_error);
}

TEST_CASE("cartpole pole falls from a small tilt with zero force") {
  CartPole env;
  CartPoleState s;
  s.theta = 0.01;
  env.set_state(s);
  double prev = s.theta;
  for (int i = 0; i < 30; ++i) {
    env.step(0.0);
    CHECK(env.state().theta >= prev);  // |theta| non-decreasing while falling
    prev = env.state().theta;
  }
  CHECK(prev > 0.01);
}

TEST_CASE("cartpole episode ends at the step cap without the -1") {
  CartPoleConfig cfg;
  cfg.max_steps = 5;
  CartPole env(cfg);
  env.set_state(CartPoleState{});
  double total = 0.0;
  StepResult r;
  for (int i = 0; i < 5; ++i) {
    r = env.step(0.0);
    total += r.reward;
  }
  CHECK(r.done);
  CHECK(total == 5.0);
}

TEST_CASE("cartpole rewards only take values +1 / -1 and trajectories are deterministic") {
  CartPole a, b;
  Rng ra(3), rb(3);
  a.reset(ra);
  b.reset(rb);
  for (int i = 0; i < 200 && !a.terminal(); ++i) {
    const double force = (i % 3 - 1) * 5.0;
    const StepResult sa = a.step(force);
    const StepResult sb = b.step(force);
    CHECK((sa.reward == 1.0 || sa.reward == -1.0));
    CHECK(sa.reward == sb.reward);
    CHECK(a.state().theta == b.state().theta);
    if (sa.done) break;
  }
}

TEST_CASE("synthetic objective evaluates the quadratic") {
  SyntheticObjective obj;
  Rng rng(1);
  CHECK(synthetic_eval(obj, std::vector<double>{1.0}, rng) == 1.0);
  CHECK(synthetic_eval(obj, std::vector<double>{0.0, 0.0}, rng) == 0.0);
  CHECK(synthetic_eval(obj, std::vector<double>{2.0}, rng) == 4.0);

  SyntheticObjective maxed;
  maxed.maximize = true;
  CHECK(synthetic_eval(maxed, std::vector<double>{2.0}, rng) == -4.0);
}

TEST_CASE("synthetic noise is centered") {
  SyntheticObjective obj;
  obj.noise_sigma = 1.0;
  Rng rng(5);
  const int n = 100000;
  double sum = 0.0;
  const std::vector<double> theta = {0.0};
  for (int i = 0; i < n; ++i) sum += synthetic_eval(obj, theta, rng);
  CHECK(std::abs(sum / n) < 3.0 / std::sqrt(double(n)));
}
