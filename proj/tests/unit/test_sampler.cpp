#include <doctest.h>

#include <cmath>
#include <numeric>

#include "pcrl/checks.hpp"
#include "pcrl/sampler.hpp"

using namespace pcrl;

namespace {
const Policy kNullPolicy = [](std::span<const double>) { return 0.0; };
}

TEST_CASE("draw_geometric: support starts at 1, degenerate gamma, determinism") {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) CHECK(draw_geometric(1e-12, rng) == 1);

  Rng a(9), b(9);
  for (int i = 0; i < 100; ++i) CHECK(draw_geometric(0.9, a) == draw_geometric(0.9, b));

  CHECK_THROWS_AS(draw_geometric(0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(draw_geometric(1.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(draw_geometric(-0.5, rng), std::invalid_argument);
  CHECK_THROWS_AS(draw_geometric(1.5, rng), std::invalid_argument);
}

TEST_CASE("draw_geometric moments and pmf") {
  CHECK(check_geometric_mean(41).pass);
  CHECK(check_geometric_pmf(42).pass);
}

TEST_CASE("mean horizon grows with gamma") {
  Rng rng(8);
  double lo = 0.0, hi = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) lo += static_cast<double>(draw_geometric(0.5, rng));
  for (int i = 0; i < n; ++i) hi += static_cast<double>(draw_geometric(0.9, rng));
  CHECK(lo / n < hi / n);
}

TEST_CASE("finite horizon on a constant-reward chain sums the rewards") {
  ChainMdp chain({{1.0}}, {1.0}, 0);
  Rng rng(1);
  CHECK(sample_finite_horizon(chain, kNullPolicy, 200, rng) == 200.0);
  CHECK(sample_finite_horizon(chain, kNullPolicy, 1, rng) == 1.0);
  CHECK_THROWS_AS(sample_finite_horizon(chain, kNullPolicy, 0, rng), std::invalid_argument);
}

TEST_CASE("geometric sampling is unbiased for the discounted value") {
  SUBCASE("constant chain, gamma = 0.9: value 10") {
    CHECK(check_geometric_chain_constant(7).pass);
  }
  SUBCASE("two-state chain from the worked example") {
    // s1 -> s2 -> s2 with rewards (1, 0); at gamma = 0.5, V(s1) = 1.
    ChainMdp chain({{0.0, 1.0}, {0.0, 1.0}}, {1.0, 0.0}, 0);
    const double v = chain_exact_value({{0.0, 1.0}, {0.0, 1.0}}, {1.0, 0.0}, 0.5)[0];
    CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    Rng rng(12);
    const int n = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double j = sample_geometric_horizon(chain, kNullPolicy, 0.5, rng);
      sum += j;
      sumsq += j * j;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sumsq / n - mean * mean) / n);
    CHECK(std::abs(mean - v) < 3 * se);
  }
  SUBCASE("3-state chain vs the exact linear solve") {
    CHECK(check_geometric_chain_exact(13).pass);
  }
}

TEST_CASE("gamma -> 0+ collects only the first reward") {
  ChainMdp chain({{0.0, 1.0}, {0.0, 1.0}}, {5.0, 1.0}, 0);
  Rng rng(4);
  for (int i = 0; i < 50; ++i)
    CHECK(sample_geometric_horizon(chain, kNullPolicy, 1e-12, rng) == 5.0);
}

TEST_CASE("running variance of geometric samples stabilizes") {
  ChainMdp chain({{1.0}}, {1.0}, 0);
  Rng rng(21);
  const int n = 100000;
  double mean = 0.0, m2 = 0.0;
  double var_half = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double x = sample_geometric_horizon(chain, kNullPolicy, 0.9, rng);
    const double d = x - mean;
    mean += d / i;
    m2 += d * (x - mean);
    if (i == n / 2) var_half = m2 / (i - 1);
  }
  const double var_full = m2 / (n - 1);
  CHECK(std::abs(var_full - var_half) / var_full < 0.05);
}

TEST_CASE("samplers never mutate theta") {
  SyntheticObjective obj;
  obj.noise_sigma = 0.5;
  ObjectiveSampler sampler = ObjectiveSampler::synthetic(obj, 3);
  const std::vector<double> theta = {1.0, -2.0, 0.5};
  const std::vector<double> copy = theta;
  Rng rng(2);
  sampler.sample(theta, rng);
  CHECK(theta == copy);
}

TEST_CASE("objective sampler dispatch") {
  SUBCASE("synthetic, sigma = 0") {
    ObjectiveSampler s = ObjectiveSampler::synthetic(SyntheticObjective{}, 1);
    Rng rng(1);
    CHECK(s.sample(std::vector<double>{2.0}, rng) == 4.0);
  }
  SUBCASE("finite mode delegates exactly") {
    ChainMdp chain({{1.0}}, {1.0}, 0);
    SamplerConfig cfg;
    cfg.mode = SamplerMode::Finite;
    cfg.horizon = 7;
    Network actor = init_network({1, 1}, Activation::Identity, Activation::Tanh, 3);
    ObjectiveSampler s = ObjectiveSampler::rollout(cfg, chain, actor, 1.0);
    const std::vector<double> theta = flatten(actor);
    Rng r1(5), r2(5);
    ChainMdp chain2({{1.0}}, {1.0}, 0);
    const double direct =
        sample_finite_horizon(chain2, [&](std::span<const double>) { return 0.0; }, 7, r2);
    CHECK(s.sample(theta, r1) == direct);
  }
  SUBCASE("geometric mode matches the analytic mean") {
    ChainMdp chain({{1.0}}, {1.0}, 0);
    SamplerConfig cfg;
    cfg.mode = SamplerMode::Geometric;
    cfg.gamma = 0.9;
    Network actor = init_network({1, 1}, Activation::Identity, Activation::Tanh, 3);
    ObjectiveSampler s = ObjectiveSampler::rollout(cfg, chain, actor, 1.0);
    const std::vector<double> theta = flatten(actor);
    Rng rng(6);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += s.sample(theta, rng);
    CHECK(std::abs(sum / n - 10.0) < 0.1);
  }
}
