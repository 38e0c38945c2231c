#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pcrl/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Derivative-free policy search with a parameter critic"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false, out_set = false;
  int trials = 0, workers = 0;
  std::vector<std::string> overrides;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value config file");
    sub->add_option("--out", out_dir, "output directory")->each([&](const std::string&) {
      out_set = true;
    });
    sub->add_option("--seed", seed, "master seed")->each([&](const std::string&) {
      seed_set = true;
    });
    sub->add_option("--trials", trials, "number of independent trials");
    sub->add_option("--workers", workers, "worker threads (0 = all cores)");
    sub->add_option("overrides", overrides, "key=value overrides");
  };

  CLI::App* toy = app.add_subcommand("toy", "noisy quadratic benchmark (both loops)");
  add_common(toy);
  CLI::App* cartpole = app.add_subcommand("cartpole", "cartpole benchmark (parameter critic)");
  add_common(cartpole);
  CLI::App* check = app.add_subcommand("check", "estimator/sampler/gradient diagnostics");
  check->add_option("--seed", seed, "diagnostic seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return pcrl::kExitConfigError;
  }

  // Flags fold into the same override mechanism as trailing key=value pairs.
  std::vector<std::string> all_overrides;
  if (seed_set) all_overrides.push_back("seed=" + std::to_string(seed));
  if (out_set) all_overrides.push_back("out_dir=" + out_dir);
  if (trials > 0) all_overrides.push_back("trials=" + std::to_string(trials));
  if (workers > 0) all_overrides.push_back("workers=" + std::to_string(workers));
  all_overrides.insert(all_overrides.end(), overrides.begin(), overrides.end());

  if (toy->parsed()) return pcrl::cmd_toy(config_path, all_overrides);
  if (cartpole->parsed()) return pcrl::cmd_cartpole(config_path, all_overrides);
  if (check->parsed()) return pcrl::cmd_check(seed);
  std::cerr << "no subcommand\n";
  return pcrl::kExitConfigError;
}
