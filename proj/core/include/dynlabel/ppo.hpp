#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dynlabel/policy.hpp"
#include "dynlabel/runner.hpp"
#include "dynlabel/trajectory.hpp"

namespace dynlabel::ppo {

struct PpoConfig {
  double gamma = 0.99;
  double lambda = 0.95;  // GAE
  double clip_eps = 0.2;
  double entropy_coef = 5e-3;
  double value_coef = 0.5;
  int epochs = 3;
  size_t buffer_size = 8192;  // transitions per update (desk scale;
                              // paper scale 204800)
  size_t batch_size = 256;    // minibatch transitions (paper scale 1024)
  double lr0 = 3e-4;          // decays linearly to 0 over total_steps
  uint64_t total_steps = 300000;  // environment (world) steps
  int episode_len = 150;
  uint64_t eval_interval = 10000;
  uint64_t checkpoint_interval = 100000;
  int num_worlds = 4;
  int threads = 0;  // 0 = auto; 1 = bit-reproducible single-threaded mode
  double grad_clip = 0.5;
  double abort_penalty = -0.5;  // terminal reward when an observation leaves
                                // the frustum and the episode aborts
};

// numAgent grows from `start` to `end` in increments of `step_size`, one
// stage per equal share of the step budget.
struct CurriculumSchedule {
  int start = 2;
  int end = 2;
  int step_size = 2;

  int stages() const;
  int num_agents_at(uint64_t global_step, uint64_t total_steps) const;
  std::vector<uint64_t> boundaries(uint64_t total_steps) const;
};

int advance_curriculum(const CurriculumSchedule& schedule, uint64_t global_step,
                       uint64_t total_steps);

struct Transition {
  enc::EncodedObservation obs;
  sim::Action action;  // raw, pre-clamp
  double log_prob = 0.0;
  double reward = 0.0;
  double value = 0.0;
  bool done = false;
};

// One (label, episode) trajectory. Truncated streams ended on the episode
// clock and bootstrap from V(s_T); aborted or fully terminal streams do not.
struct Stream {
  std::vector<Transition> transitions;
  double bootstrap_value = 0.0;
  bool truncated = false;
};

struct EpisodeBuffer {
  std::vector<Stream> streams;
  uint64_t env_steps = 0;  // world steps spent collecting

  size_t transition_count() const {
    size_t n = 0;
    for (const auto& s : streams) n += s.transitions.size();
    return n;
  }
};

// Advantages and lambda-returns, flattened in stream order. Advantages are
// raw (unnormalized); the update normalizes per batch.
struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;
};

GaeResult compute_gae(const EpisodeBuffer& buffer, double gamma, double lambda);

// Parallel world instances with independent RNG streams; collection order is
// fixed by worker index, so results do not depend on thread scheduling.
class RolloutPool {
 public:
  RolloutPool(const std::vector<data::Scene>& scenes, const run::EnvConfig& env,
              int num_worlds, int episode_len, double abort_penalty,
              uint64_t seed);
  ~RolloutPool();

  // Runs whole episodes round-robin until at least n_env_steps world steps
  // are collected (episodes never split across buffers).
  EpisodeBuffer collect(const policy::Policy& policy, int num_agents,
                        uint64_t n_env_steps, int threads);

 private:
  struct Worker;
  const std::vector<data::Scene>* scenes_;
  run::EnvConfig env_;
  int episode_len_;
  double abort_penalty_;
  std::vector<std::unique_ptr<Worker>> workers_;
};

EpisodeBuffer collect_rollouts(RolloutPool& pool, const policy::Policy& policy,
                               int num_agents, uint64_t n_env_steps,
                               int threads = 1);

struct LossReport {
  double actor_loss = 0.0;
  double critic_loss = 0.0;
  double entropy = 0.0;
  size_t minibatches = 0;
};

// Clipped-surrogate update with entropy bonus and value regression; epochs of
// shuffled minibatches, joint gradient-norm clip, Adam step at `lr`.
LossReport ppo_update(policy::Policy& policy, nn::Adam<float>& actor_opt,
                      nn::Adam<float>& critic_opt, const EpisodeBuffer& buffer,
                      const PpoConfig& cfg, double lr, Rng& rng, int threads);

struct TrainLogRow {
  uint64_t global_step = 0;
  double train_reward = 0.0;
  double test_reward = 0.0;
  double actor_loss = 0.0;
  double critic_loss = 0.0;
  double entropy = 0.0;
  int num_agent = 0;
  double lr = 0.0;
};

struct TrainResult {
  std::vector<TrainLogRow> log;
  std::string log_path;
  std::string final_checkpoint;
};

// collect -> GAE -> update -> curriculum loop with periodic deterministic
// evaluation on held-out scenes, CSV logging, and checkpointing (interval,
// stage boundaries, final).
TrainResult train(const PpoConfig& cfg, const CurriculumSchedule& curriculum,
                  const run::EnvConfig& env, const policy::PolicyConfig& pcfg,
                  const std::vector<data::Scene>& train_scenes,
                  const std::vector<data::Scene>& test_scenes,
                  const std::string& out_dir, uint64_t seed);

}  // namespace dynlabel::ppo
