#pragma once

#include <string>
#include <vector>

#include "dynlabel/baselines.hpp"
#include "dynlabel/encoder.hpp"
#include "dynlabel/policy.hpp"
#include "dynlabel/reward.hpp"
#include "dynlabel/rng.hpp"
#include "dynlabel/sim.hpp"
#include "dynlabel/trajectory.hpp"

namespace dynlabel::run {

// Everything a world rollout needs besides the scene itself.
struct EnvConfig {
  sim::SimConfig sim;
  geom::CameraSpec camera;
  enc::EncoderConfig encoder;
  metrics::RewardConfig reward;
};

enum class ControllerKind { none, force, rl };

ControllerKind controller_from_string(const std::string& s);
std::string to_string(ControllerKind kind);

struct Controller {
  ControllerKind kind = ControllerKind::none;
  baseline::ForceConfig force;
  const policy::Policy* policy = nullptr;  // required for rl
  policy::ActMode mode = policy::ActMode::deterministic;
};

// Per-step snapshot for replay export. Rewards/actions are per label and
// absent on the initial record.
struct StepRecord {
  int step = 0;
  double time = 0.0;
  std::vector<Vec3> object_pos;
  std::vector<bool> object_active;
  std::vector<Vec2> offsets;
  std::vector<Vec3> label_pos;
  std::vector<metrics::StepCounts> counts;
  std::vector<double> rewards;
  std::vector<Vec2> actions;
  bool has_actions = false;
};

struct SceneRunResult {
  metrics::EpisodeMetrics metrics;
  double mean_episode_reward = 0.0;  // mean over labels of summed step rewards
  long invalid_observations = 0;     // rl observations that fell behind the camera
  std::vector<StepRecord> replay;
};

// Replays one scene under a controller, labeling every track. `rng` is only
// consumed by a stochastic rl controller; pass nullptr otherwise.
SceneRunResult run_scene(const data::Scene& scene, const EnvConfig& env,
                         const Controller& controller, Rng* rng = nullptr,
                         bool record = false);

}  // namespace dynlabel::run
