#pragma once

#include <map>
#include <string>
#include <vector>

#include "pcrl/trainer.hpp"

namespace pcrl {

// Raised on unparsable files, unknown keys, or bad values; the CLI maps it
// to exit status 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key = value text: one pair per line, '#' starts a comment, blank lines
// ignored. Later assignments win, so command-line overrides are just extra
// pairs applied after the file.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_config_file(const std::string& path);
void apply_override(KeyValues& kv, const std::string& assignment);  // "key=value"

// Everything a full experiment needs: the training loop parameters plus
// trial fan-out and output bookkeeping.
struct ExperimentConfig {
  TrainConfig train;
  int trials = 1;
  int workers = 0;  // 0: one per hardware thread
  std::string out_dir = "out";
  long checkpoint_interval = 0;
  std::vector<double> sigmas = {0.01, 0.1, 1.0};          // toy sweep
  std::vector<std::vector<int>> actor_archs;              // cartpole sweep
};

ExperimentConfig toy_defaults();
ExperimentConfig cartpole_defaults();

// Applies `kv` on top of `base`; rejects unknown keys by name.
ExperimentConfig make_experiment_config(const ExperimentConfig& base, const KeyValues& kv);

// Inverse of make_experiment_config: every key with its effective value.
// Re-running from this file reproduces the run.
void write_effective_config(const ExperimentConfig& cfg, const std::string& path);

std::vector<int> parse_int_list(const std::string& s);          // "34,22"
std::vector<std::vector<int>> parse_arch_list(const std::string& s);  // "64,32;54,22"
std::vector<double> parse_double_list(const std::string& s);
std::string format_int_list(const std::vector<int>& v);
std::string format_arch_list(const std::vector<std::vector<int>>& v);
std::string format_double_list(const std::vector<double>& v);

}  // namespace pcrl
