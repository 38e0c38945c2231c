#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pcrl/env.hpp"
#include "pcrl/nn.hpp"
#include "pcrl/rng.hpp"

namespace pcrl {

// One executable diagnostic: `measured` must stay within `bound`.
struct CheckResult {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
};

// Dense solve by Gaussian elimination with partial pivoting (small systems).
std::vector<double> solve_linear(std::vector<std::vector<double>> a, std::vector<double> b);

// Exact discounted value V = (I - gamma P)^{-1} r of a reward chain.
std::vector<double> chain_exact_value(const std::vector<std::vector<double>>& p,
                                      const std::vector<double>& r, double gamma);

// Finite reward chain: emits the reward of the state it is leaving, then
// moves by the row-stochastic transition matrix. Never terminal; the action
// is ignored. Stochastic transitions draw from the Rng passed to reset(),
// which must outlive the episode.
class ChainMdp final : public Env {
 public:
  ChainMdp(std::vector<std::vector<double>> transitions, std::vector<double> rewards,
           int start_state);

  void reset(Rng& rng) override;
  StepResult step(double action) override;
  std::span<const double> observation() const override { return {obs_, 1}; }
  int obs_dim() const override { return 1; }
  bool terminal() const override { return false; }
  int max_episode_steps() const override { return 0; }
  std::unique_ptr<Env> clone() const override;

  int state() const { return state_; }

 private:
  std::vector<std::vector<double>> p_;
  std::vector<double> r_;
  int start_;
  int state_;
  double obs_[1] = {0};
  Rng* rng_ = nullptr;
};

// Estimator under test for the unbiasedness check; injectable so a
// deliberately broken estimator can be shown to fail.
using TwoPointFn = std::function<std::vector<double>(double j_plus, double j_minus, double mu,
                                                     std::span<const double> u)>;

// Monte-Carlo mean of the two-point estimator on the noiseless quadratic
// J(theta) = ||theta||^2 against the exact gradient 2*theta; measured value
// is the largest per-coordinate |z| over 1e5 draws.
CheckResult check_two_point_unbiasedness(int p, std::uint64_t seed, const TwoPointFn& fn);
CheckResult check_two_point_unbiasedness(int p, std::uint64_t seed);

// Symmetric vs one-sided estimator means on the quadratic, |z| of the
// difference over 1e5 draws.
CheckResult check_asymmetric_agreement(std::uint64_t seed);

// |mean horizon - 1/(1-gamma)| on 1e5 geometric draws at gamma = 0.9.
CheckResult check_geometric_mean(std::uint64_t seed);

// |P(H = 1) - (1 - gamma)| at gamma = 0.5 against 3 standard errors.
CheckResult check_geometric_pmf(std::uint64_t seed);

// Constant-reward chain at gamma = 0.9: sampled value vs 1/(1-gamma),
// absolute tolerance 0.1 over 1e5 samples.
CheckResult check_geometric_chain_constant(std::uint64_t seed);

// 3-state chain with V solved exactly from (I - gamma P)V = r; |z| bound 3.
CheckResult check_geometric_chain_exact(std::uint64_t seed);

// Central finite differences vs backward_mse on `instances` random
// (network, batch) pairs; measured value is the worst relative error.
CheckResult check_gradient_finite_difference(int instances, std::uint64_t seed);

// d/dx sigmoid2 = 2 s (1 - s) against central differences on a grid.
CheckResult check_sigmoid2_derivative();

std::vector<CheckResult> run_core_checks(std::uint64_t seed);

// One line per result; returns true when everything passed.
bool print_checks(const std::vector<CheckResult>& results, std::ostream& os);

}  // namespace pcrl
