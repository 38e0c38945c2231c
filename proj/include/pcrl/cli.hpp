#pragma once

#include <string>
#include <vector>

#include "pcrl/config.hpp"

namespace pcrl {

// Exit statuses shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;

// Noisy-quadratic benchmark: both loops (baseline and parameter critic)
// across every configured noise level, `trials` runs each. Writes one CSV
// per (mode, sigma), a per-trial summary with cross-trial quartiles, and the
// effective config.
int cmd_toy(const std::string& config_path, const std::vector<std::string>& overrides);

// Cartpole benchmark: the parameter-critic loop for each configured actor
// architecture. Per-run CSVs named by architecture, checkpoints, a summary,
// and the effective config.
int cmd_cartpole(const std::string& config_path, const std::vector<std::string>& overrides);

// Estimator, sampler, and gradient diagnostics with one PASS/FAIL line each.
int cmd_check(std::uint64_t seed);

// Helpers shared by the subcommands (exposed for tests).
ExperimentConfig load_experiment_config(const ExperimentConfig& defaults,
                                        const std::string& config_path,
                                        const std::vector<std::string>& overrides);
void run_trials_parallel(int trials, int workers, const std::function<void(int)>& run_one);

}  // namespace pcrl
