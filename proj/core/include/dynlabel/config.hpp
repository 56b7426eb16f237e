#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dynlabel/baselines.hpp"
#include "dynlabel/ppo.hpp"
#include "dynlabel/runner.hpp"
#include "dynlabel/synth.hpp"
#include "dynlabel/toml.hpp"

namespace dynlabel::cli {

struct DataConfig {
  double scene_len = 15.0;
  double ratio = 0.8;  // train share
  uint64_t split_seed = 7;
  // synthetic corpus settings (when a scenario name is used as data source)
  std::string scenario = "crossing_pair";
  int count = 2;
  double speed_min = 1.2;
  double speed_max = 2.0;
  double arena_half = 16.0;
  double radius = 3.0;
  int train_scenes = 40;
  int test_scenes = 20;
  std::vector<int> excluded_windows;
};

// Fully resolved run settings: file values override defaults, flags override
// the file. A serialized snapshot is written next to every run's outputs.
struct RunConfig {
  sim::SimConfig sim;
  metrics::RewardConfig reward;
  ppo::PpoConfig ppo;
  ppo::CurriculumSchedule curriculum;
  DataConfig data;
  geom::CameraSpec camera;
  baseline::ForceConfig force;
  enc::EncoderConfig encoder;
  uint64_t seed = 0;

  run::EnvConfig env() const { return {sim, camera, encoder, reward}; }
  data::SynthParams synth_params() const;
};

RunConfig config_from_toml(const tomlmini::Table& table);
RunConfig load_config(const std::string& path);  // empty path -> defaults
std::string to_toml(const RunConfig& cfg);
void save_config(const RunConfig& cfg, const std::string& path);

}  // namespace dynlabel::cli
