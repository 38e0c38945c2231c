#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "pcrl/config.hpp"

using namespace pcrl;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
  const std::string path = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream f(path);
  f << body;
  return path;
}

}  // namespace

TEST_CASE("config file parsing: comments, blanks, strict key=value") {
  const std::string path = write_temp("pcrl_cfg1.cfg",
                                      "# a comment\n"
                                      "eta = 0.25\n"
                                      "\n"
                                      "iterations=123   # trailing comment\n"
                                      "direction = ascend\n");
  const KeyValues kv = parse_config_file(path);
  const ExperimentConfig cfg = make_experiment_config(toy_defaults(), kv);
  CHECK(cfg.train.eta == 0.25);
  CHECK(cfg.train.iterations == 123);
  CHECK(cfg.train.direction == Direction::Ascend);
  std::remove(path.c_str());
}

TEST_CASE("unknown keys are rejected by name") {
  KeyValues kv;
  kv["etaa"] = "0.5";
  try {
    make_experiment_config(toy_defaults(), kv);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("etaa") != std::string::npos);
  }
}

TEST_CASE("bad values are rejected") {
  KeyValues kv;
  kv["eta"] = "fast";
  CHECK_THROWS_AS(make_experiment_config(toy_defaults(), kv), ConfigError);
  KeyValues kv2;
  kv2["direction"] = "sideways";
  CHECK_THROWS_AS(make_experiment_config(toy_defaults(), kv2), ConfigError);
  KeyValues kv3;
  kv3["trials"] = "0";
  CHECK_THROWS_AS(make_experiment_config(toy_defaults(), kv3), ConfigError);
}

TEST_CASE("overrides win over file values") {
  const std::string path = write_temp("pcrl_cfg2.cfg", "eta = 0.25\nmu = 0.5\n");
  KeyValues kv = parse_config_file(path);
  apply_override(kv, "eta=0.125");
  const ExperimentConfig cfg = make_experiment_config(toy_defaults(), kv);
  CHECK(cfg.train.eta == 0.125);
  CHECK(cfg.train.mu == 0.5);
  CHECK_THROWS_AS(apply_override(kv, "no_equals_sign"), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("list and architecture parsing") {
  CHECK(parse_int_list("34,22") == std::vector<int>{34, 22});
  CHECK(parse_arch_list("64,32;54,22;34,22") ==
        std::vector<std::vector<int>>{{64, 32}, {54, 22}, {34, 22}});
  CHECK(parse_double_list("0.01,0.1,1") == std::vector<double>{0.01, 0.1, 1.0});
}

TEST_CASE("effective config round trips to an identical config") {
  ExperimentConfig cfg = toy_defaults();
  cfg.train.eta = 0.3;
  cfg.train.master_seed = 987654321;
  cfg.sigmas = {0.5, 2.0};
  cfg.trials = 7;
  cfg.train.critic_hidden = {16, 8};
  const std::string path =
      (std::filesystem::temp_directory_path() / "pcrl_cfg3.cfg").string();
  write_effective_config(cfg, path);

  const KeyValues kv = parse_config_file(path);
  const ExperimentConfig back = make_experiment_config(toy_defaults(), kv);
  CHECK(back.train.eta == cfg.train.eta);
  CHECK(back.train.master_seed == cfg.train.master_seed);
  CHECK(back.sigmas == cfg.sigmas);
  CHECK(back.trials == cfg.trials);
  CHECK(back.train.critic_hidden == cfg.train.critic_hidden);
  CHECK(back.train.buffer_capacity == cfg.train.buffer_capacity);
  std::remove(path.c_str());
}

TEST_CASE("cartpole defaults carry the benchmark constants") {
  const ExperimentConfig cfg = cartpole_defaults();
  CHECK(cfg.train.eta == 5e-5);
  CHECK(cfg.train.mu == 0.5);
  CHECK(cfg.train.buffer_capacity == 50);
  CHECK(cfg.train.minibatch == 20);
  CHECK(cfg.train.actor_hidden == std::vector<int>{34, 22});
  CHECK(cfg.train.critic_hidden == std::vector<int>{256, 128});
  CHECK(cfg.train.direction == Direction::Ascend);
}
