#include "pcrl/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "pcrl/checks.hpp"
#include "pcrl/csv.hpp"
#include "pcrl/trainer.hpp"

namespace pcrl {

namespace {

namespace fs = std::filesystem;

// Distinct per-run master seed; trials and sweep points must not share
// substreams.
std::uint64_t run_seed(std::uint64_t base, std::uint64_t mode_tag, std::uint64_t point,
                       std::uint64_t trial) {
  std::uint64_t s = mix64(base + 0x243f6a8885a308d3ULL);
  s = mix64(s ^ (mode_tag * 0x13198a2e03707344ULL));
  s = mix64(s ^ (point * 0xa4093822299f31d0ULL));
  s = mix64(s ^ (trial * 0x082efa98ec4e6c89ULL));
  return s;
}

std::string sigma_label(double sigma) {
  std::ostringstream os;
  os << sigma;
  std::string s = os.str();
  for (char& ch : s)
    if (ch == '.') ch = 'p';
  return s;
}

std::string arch_label(const std::vector<int>& hidden) {
  std::ostringstream os;
  for (std::size_t i = 0; i < hidden.size(); ++i) os << (i ? "x" : "") << hidden[i];
  return os.str();
}

double median_of(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double quantile_of(std::vector<double> v, double q) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

const std::vector<std::string> kRunColumns = {
    "trial",      "iteration",    "j_plus",      "j_minus", "f_plus",
    "f_minus",    "critic_mse",   "theta_norm_sq", "eval_return", "elapsed_s"};

void write_records(CsvWriter& csv, int trial, const std::vector<TrainRecord>& records) {
  for (const TrainRecord& r : records) {
    csv.begin_row();
    csv.cell(static_cast<long>(trial));
    csv.cell(r.iteration);
    csv.cell(r.j_plus);
    csv.cell(r.j_minus);
    csv.cell(r.f_plus);
    csv.cell(r.f_minus);
    csv.cell(r.critic_mse);
    csv.cell(r.theta_norm_sq);
    csv.cell(r.eval_return);
    csv.cell(r.elapsed_seconds);
    csv.end_row();
  }
}

}  // namespace

ExperimentConfig load_experiment_config(const ExperimentConfig& defaults,
                                        const std::string& config_path,
                                        const std::vector<std::string>& overrides) {
  KeyValues kv;
  if (!config_path.empty()) kv = parse_config_file(config_path);
  for (const std::string& o : overrides) apply_override(kv, o);
  return make_experiment_config(defaults, kv);
}

void run_trials_parallel(int trials, int workers, const std::function<void(int)>& run_one) {
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, trials));
  if (workers == 1) {
    for (int t = 0; t < trials; ++t) run_one(t);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::mutex err_mutex;
  std::vector<std::string> errors;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int t = next.fetch_add(1);
        if (t >= trials) break;
        try {
          run_one(t);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lk(err_mutex);
          errors.emplace_back(e.what());
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (!errors.empty()) throw std::runtime_error("trial failed: " + errors.front());
}

int cmd_toy(const std::string& config_path, const std::vector<std::string>& overrides) {
  ExperimentConfig cfg;
  try {
    cfg = load_experiment_config(toy_defaults(), config_path, overrides);
    if (cfg.train.sampler.mode != SamplerMode::Synthetic)
      throw ConfigError("config: toy requires sampler_mode = synthetic");
    fs::create_directories(cfg.out_dir);
    write_effective_config(cfg, cfg.out_dir + "/config_effective.cfg");
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    CsvWriter summary(cfg.out_dir + "/toy_summary.csv",
                      {"mode", "sigma", "stat", "value"});
    const char* modes[2] = {"baseline", "critic"};
    for (int mode = 0; mode < 2; ++mode) {
      for (std::size_t si = 0; si < cfg.sigmas.size(); ++si) {
        const double sigma = cfg.sigmas[si];
        std::vector<TrainResult> results(static_cast<std::size_t>(cfg.trials));
        run_trials_parallel(cfg.trials, cfg.workers, [&](int trial) {
          TrainConfig tc = cfg.train;
          tc.noise_sigma = sigma;
          tc.master_seed = run_seed(cfg.train.master_seed, static_cast<std::uint64_t>(mode),
                                    si, static_cast<std::uint64_t>(trial));
          results[static_cast<std::size_t>(trial)] =
              mode == 0 ? run_baseline(tc, nullptr) : run_parameter_critic(tc, nullptr);
        });

        const std::string run_path =
            cfg.out_dir + "/toy_" + modes[mode] + "_sigma" + sigma_label(sigma) + ".csv";
        CsvWriter csv(run_path, kRunColumns);
        std::vector<double> finals;
        for (int t = 0; t < cfg.trials; ++t) {
          const TrainResult& res = results[static_cast<std::size_t>(t)];
          write_records(csv, t, res.records);
          finals.push_back(res.records.back().theta_norm_sq);
        }

        for (int t = 0; t < cfg.trials; ++t) {
          summary.begin_row();
          summary.cell(std::string(modes[mode]));
          summary.cell(sigma);
          summary.cell("trial_" + std::to_string(t) + "_final_log10_theta_norm_sq");
          summary.cell(std::log10(finals[static_cast<std::size_t>(t)]));
          summary.end_row();
        }
        for (const auto& [stat, q] :
             {std::pair<const char*, double>{"q25", 0.25}, {"median", 0.5}, {"q75", 0.75}}) {
          summary.begin_row();
          summary.cell(std::string(modes[mode]));
          summary.cell(sigma);
          summary.cell(std::string(stat) + "_final_theta_norm_sq");
          summary.cell(quantile_of(finals, q));
          summary.end_row();
        }
        std::cout << "toy " << modes[mode] << " sigma=" << sigma
                  << " median final ||theta||^2 = " << format_double(median_of(finals)) << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "toy: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

int cmd_cartpole(const std::string& config_path, const std::vector<std::string>& overrides) {
  ExperimentConfig cfg;
  try {
    cfg = load_experiment_config(cartpole_defaults(), config_path, overrides);
    if (cfg.train.sampler.mode == SamplerMode::Synthetic)
      throw ConfigError("config: cartpole requires a rollout sampler_mode (finite|geometric)");
    if (cfg.actor_archs.empty()) cfg.actor_archs = {cfg.train.actor_hidden};
    fs::create_directories(cfg.out_dir);
    write_effective_config(cfg, cfg.out_dir + "/config_effective.cfg");
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    CsvWriter summary(cfg.out_dir + "/cartpole_summary.csv",
                      {"arch", "trial", "best_eval_return", "final_eval_return",
                       "first_iter_at_190", "final_critic_mse"});
    for (const std::vector<int>& arch : cfg.actor_archs) {
      const std::string label = arch_label(arch);
      std::vector<TrainResult> results(static_cast<std::size_t>(cfg.trials));
      std::mutex io_mutex;
      run_trials_parallel(cfg.trials, cfg.workers, [&](int trial) {
        TrainConfig tc = cfg.train;
        tc.actor_hidden = arch;
        tc.master_seed = run_seed(cfg.train.master_seed, 2, std::hash<std::string>{}(label),
                                  static_cast<std::uint64_t>(trial));
        CartPole env;
        TrainHooks hooks;
        const std::string stem = cfg.out_dir + "/cartpole_" + label + "_t" + std::to_string(trial);
        hooks.checkpoint_interval = cfg.checkpoint_interval;
        if (cfg.checkpoint_interval > 0) {
          hooks.on_checkpoint = [&, stem](long iter, const std::vector<double>& theta,
                                          const Network* critic) {
            Network actor = init_network([&] {
              std::vector<int> sizes{4};
              sizes.insert(sizes.end(), arch.begin(), arch.end());
              sizes.push_back(1);
              return sizes;
            }(), tc.actor_hidden_act, tc.actor_output_act, std::uint64_t{0});
            unflatten_into(actor, theta);
            save_network(actor, stem + "_actor_iter" + std::to_string(iter + 1) + ".txt");
            if (critic)
              save_network(*critic, stem + "_critic_iter" + std::to_string(iter + 1) + ".txt");
          };
        }
        hooks.on_record = [&](const TrainRecord& r) {
          if (r.eval_return && ((r.iteration + 1) % 10000 == 0)) {
            std::lock_guard<std::mutex> lk(io_mutex);
            std::cout << "cartpole " << label << " trial " << trial << " iter "
                      << (r.iteration + 1) << " eval_return " << *r.eval_return << "\n";
          }
        };
        results[static_cast<std::size_t>(trial)] = run_parameter_critic(tc, &env, hooks);
        const TrainResult& res = results[static_cast<std::size_t>(trial)];
        CsvWriter csv(stem + ".csv", kRunColumns);
        write_records(csv, trial, res.records);
        save_network(res.actor, stem + "_actor_final.txt");
        save_network(res.critic, stem + "_critic_final.txt");
      });

      for (int t = 0; t < cfg.trials; ++t) {
        const TrainResult& res = results[static_cast<std::size_t>(t)];
        double best = -1.0, final_eval = -1.0, final_mse = std::nan("");
        long first190 = -1;
        for (const TrainRecord& r : res.records) {
          if (r.eval_return) {
            best = std::max(best, *r.eval_return);
            final_eval = *r.eval_return;
            if (first190 < 0 && *r.eval_return >= 190.0) first190 = r.iteration + 1;
          }
          if (r.critic_mse) final_mse = *r.critic_mse;
        }
        summary.begin_row();
        summary.cell(label);
        summary.cell(static_cast<long>(t));
        summary.cell(best);
        summary.cell(final_eval);
        summary.cell(first190);
        summary.cell(final_mse);
        summary.end_row();
        std::cout << "cartpole " << label << " trial " << t << " best eval return " << best
                  << (first190 > 0 ? " (>=190 at iter " + std::to_string(first190) + ")" : "")
                  << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "cartpole: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

int cmd_check(std::uint64_t seed) {
  const std::vector<CheckResult> results = run_core_checks(seed);
  const bool ok = print_checks(results, std::cout);
  std::cout << (ok ? "all checks passed" : "CHECK FAILURES PRESENT") << "\n";
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace pcrl
