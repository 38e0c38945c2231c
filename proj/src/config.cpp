#include "pcrl/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace pcrl {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
  }
}

long to_long(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects an integer, got '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<std::uint64_t>(x);
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects an unsigned integer, got '" + v + "'");
  }
}

}  // namespace

KeyValues parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open '" + path + "'");
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: " + path + ":" + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config: " + path + ":" + std::to_string(lineno) + ": empty key");
    kv[key] = val;
  }
  return kv;
}

void apply_override(KeyValues& kv, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("config: override '" + assignment + "' is not of the form key=value");
  kv[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> v;
  std::istringstream is(s);
  std::string cell;
  while (std::getline(is, cell, ',')) {
    cell = trim(cell);
    if (cell.empty()) continue;
    v.push_back(static_cast<int>(to_long("int list", cell)));
  }
  return v;
}

std::vector<std::vector<int>> parse_arch_list(const std::string& s) {
  std::vector<std::vector<int>> v;
  std::istringstream is(s);
  std::string group;
  while (std::getline(is, group, ';')) {
    group = trim(group);
    if (group.empty()) continue;
    v.push_back(parse_int_list(group));
  }
  return v;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> v;
  std::istringstream is(s);
  std::string cell;
  while (std::getline(is, cell, ',')) {
    cell = trim(cell);
    if (cell.empty()) continue;
    v.push_back(to_double("list", cell));
  }
  return v;
}

std::string format_int_list(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

std::string format_arch_list(const std::vector<std::vector<int>>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ";" : "") << format_int_list(v[i]);
  return os.str();
}

std::string format_double_list(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

ExperimentConfig toy_defaults() {
  ExperimentConfig c;
  c.train.eta = 0.1;
  c.train.mu = 0.005;
  c.train.alpha = 0.005;
  c.train.critic_steps_per_iter = 5;
  c.train.minibatch = 1;
  c.train.buffer_capacity = ReplayBuffer::kUnbounded;
  c.train.iterations = 10000;
  c.train.direction = Direction::Descend;
  c.train.sampler.mode = SamplerMode::Synthetic;
  c.train.theta_dim = 1;
  c.train.theta0 = 1.0;
  c.train.critic_hidden = {256};
  c.train.critic_hidden_act = Activation::Sigmoid2;
  c.train.mse_interval = 50;
  c.trials = 50;
  c.sigmas = {0.01, 0.1, 1.0};
  c.out_dir = "out/toy";
  return c;
}

ExperimentConfig cartpole_defaults() {
  ExperimentConfig c;
  c.train.eta = 5e-5;
  c.train.mu = 0.5;
  c.train.alpha = 1e-5;
  c.train.critic_steps_per_iter = 5;
  c.train.minibatch = 20;
  c.train.buffer_capacity = 50;
  c.train.iterations = 120000;
  c.train.direction = Direction::Ascend;
  c.train.sampler.mode = SamplerMode::Finite;
  c.train.sampler.horizon = 200;
  c.train.sampler.gamma = 0.99;
  c.train.actor_hidden = {34, 22};
  c.train.actor_hidden_act = Activation::Relu;
  c.train.actor_output_act = Activation::Tanh;
  c.train.action_scale = 10.0;
  c.train.critic_hidden = {256, 128};
  c.train.critic_hidden_act = Activation::Relu;
  c.train.eval_interval = 500;
  c.train.eval_episodes = 20;
  c.train.mse_interval = 1;
  c.trials = 3;
  c.actor_archs = {{34, 22}};
  c.out_dir = "out/cartpole";
  return c;
}

ExperimentConfig make_experiment_config(const ExperimentConfig& base, const KeyValues& kv) {
  ExperimentConfig c = base;
  std::map<std::string, std::string> rest(kv.begin(), kv.end());
  auto take = [&rest](const char* key) -> std::optional<std::string> {
    auto it = rest.find(key);
    if (it == rest.end()) return std::nullopt;
    std::string v = it->second;
    rest.erase(it);
    return v;
  };

  try {
    if (auto v = take("eta")) c.train.eta = to_double("eta", *v);
    if (auto v = take("mu")) c.train.mu = to_double("mu", *v);
    if (auto v = take("alpha")) c.train.alpha = to_double("alpha", *v);
    if (auto v = take("critic_steps")) c.train.critic_steps_per_iter =
        static_cast<int>(to_long("critic_steps", *v));
    if (auto v = take("minibatch")) c.train.minibatch = static_cast<int>(to_long("minibatch", *v));
    if (auto v = take("buffer_capacity")) {
      const long b = to_long("buffer_capacity", *v);
      c.train.buffer_capacity = b <= 0 ? ReplayBuffer::kUnbounded : static_cast<std::size_t>(b);
    }
    if (auto v = take("iterations")) c.train.iterations = to_long("iterations", *v);
    if (auto v = take("direction")) c.train.direction = direction_from_string(*v);
    if (auto v = take("sampler_mode")) c.train.sampler.mode = sampler_mode_from_string(*v);
    if (auto v = take("horizon")) c.train.sampler.horizon =
        static_cast<int>(to_long("horizon", *v));
    if (auto v = take("gamma")) c.train.sampler.gamma = to_double("gamma", *v);
    if (auto v = take("sigmas")) c.sigmas = parse_double_list(*v);
    if (auto v = take("theta_dim")) c.train.theta_dim = static_cast<int>(to_long("theta_dim", *v));
    if (auto v = take("theta0")) c.train.theta0 = to_double("theta0", *v);
    if (auto v = take("actor_hidden")) {
      c.actor_archs = parse_arch_list(*v);
      if (c.actor_archs.empty()) throw ConfigError("config: actor_hidden is empty");
      c.train.actor_hidden = c.actor_archs.front();
    }
    if (auto v = take("actor_hidden_act")) c.train.actor_hidden_act = activation_from_string(*v);
    if (auto v = take("actor_output_act")) c.train.actor_output_act = activation_from_string(*v);
    if (auto v = take("action_scale")) c.train.action_scale = to_double("action_scale", *v);
    if (auto v = take("critic_hidden")) c.train.critic_hidden = parse_int_list(*v);
    if (auto v = take("critic_hidden_act")) c.train.critic_hidden_act = activation_from_string(*v);
    if (auto v = take("seed")) c.train.master_seed = to_u64("seed", *v);
    if (auto v = take("eval_interval")) c.train.eval_interval = to_long("eval_interval", *v);
    if (auto v = take("eval_episodes")) c.train.eval_episodes =
        static_cast<int>(to_long("eval_episodes", *v));
    if (auto v = take("mse_interval")) c.train.mse_interval = to_long("mse_interval", *v);
    if (auto v = take("trials")) c.trials = static_cast<int>(to_long("trials", *v));
    if (auto v = take("workers")) c.workers = static_cast<int>(to_long("workers", *v));
    if (auto v = take("out_dir")) c.out_dir = *v;
    if (auto v = take("checkpoint_interval"))
      c.checkpoint_interval = to_long("checkpoint_interval", *v);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  if (!rest.empty()) throw ConfigError("config: unknown key '" + rest.begin()->first + "'");
  if (c.trials < 1) throw ConfigError("config: trials must be >= 1");
  if (c.train.minibatch < 1) throw ConfigError("config: minibatch must be >= 1");
  return c;
}

void write_effective_config(const ExperimentConfig& cfg, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("config: cannot write '" + path + "'");
  f.precision(17);
  f << "eta = " << cfg.train.eta << "\n";
  f << "mu = " << cfg.train.mu << "\n";
  f << "alpha = " << cfg.train.alpha << "\n";
  f << "critic_steps = " << cfg.train.critic_steps_per_iter << "\n";
  f << "minibatch = " << cfg.train.minibatch << "\n";
  f << "buffer_capacity = "
    << (cfg.train.buffer_capacity == ReplayBuffer::kUnbounded
            ? 0
            : static_cast<long>(cfg.train.buffer_capacity))
    << "\n";
  f << "iterations = " << cfg.train.iterations << "\n";
  f << "direction = " << to_string(cfg.train.direction) << "\n";
  f << "sampler_mode = " << to_string(cfg.train.sampler.mode) << "\n";
  f << "horizon = " << cfg.train.sampler.horizon << "\n";
  f << "gamma = " << cfg.train.sampler.gamma << "\n";
  f << "sigmas = " << format_double_list(cfg.sigmas) << "\n";
  f << "theta_dim = " << cfg.train.theta_dim << "\n";
  f << "theta0 = " << cfg.train.theta0 << "\n";
  if (!cfg.actor_archs.empty())
    f << "actor_hidden = " << format_arch_list(cfg.actor_archs) << "\n";
  else if (!cfg.train.actor_hidden.empty())
    f << "actor_hidden = " << format_int_list(cfg.train.actor_hidden) << "\n";
  f << "actor_hidden_act = " << to_string(cfg.train.actor_hidden_act) << "\n";
  f << "actor_output_act = " << to_string(cfg.train.actor_output_act) << "\n";
  f << "action_scale = " << cfg.train.action_scale << "\n";
  f << "critic_hidden = " << format_int_list(cfg.train.critic_hidden) << "\n";
  f << "critic_hidden_act = " << to_string(cfg.train.critic_hidden_act) << "\n";
  f << "seed = " << cfg.train.master_seed << "\n";
  f << "eval_interval = " << cfg.train.eval_interval << "\n";
  f << "eval_episodes = " << cfg.train.eval_episodes << "\n";
  f << "mse_interval = " << cfg.train.mse_interval << "\n";
  f << "trials = " << cfg.trials << "\n";
  f << "workers = " << cfg.workers << "\n";
  f << "out_dir = " << cfg.out_dir << "\n";
  f << "checkpoint_interval = " << cfg.checkpoint_interval << "\n";
  if (!f) throw ConfigError("config: write failed for '" + path + "'");
}

}  // namespace pcrl
