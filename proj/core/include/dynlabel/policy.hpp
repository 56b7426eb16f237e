#pragma once

#include <string>
#include <vector>

#include "dynlabel/encoder.hpp"
#include "dynlabel/nn.hpp"
#include "dynlabel/sim.hpp"

namespace dynlabel::policy {

struct PolicyConfig {
  nn::NetDims dims;           // architecture sizes
  enc::EncoderConfig encoder;  // feature scaling; baked into the fingerprint
};

enum class ActMode { stochastic, deterministic };

struct PolicyDecision {
  sim::Action action;
  double log_prob = 0.0;
  double value = 0.0;
  Vec2 mean;
  Vec2 std;
};

struct Evaluation {
  double log_prob = 0.0;
  double value = 0.0;
  double entropy = 0.0;
};

enum class HeatmapMode { offset, accel };

// Actor (diagonal Gaussian over x/z accelerations) and critic (state value),
// same encoder topology with separate parameters. Inference is pure given the
// parameters; parallel callers use their own Scratch (or Policy copy).
class Policy {
 public:
  explicit Policy(const PolicyConfig& cfg, uint64_t init_seed = 0);

  struct Scratch {
    nn::NetWorkspace<float> actor;
    nn::NetWorkspace<float> critic;
  };

  PolicyDecision act(const enc::EncodedObservation& obs, ActMode mode,
                     Rng& rng, Scratch& scratch) const;
  PolicyDecision act(const enc::EncodedObservation& obs, ActMode mode,
                     Rng& rng);

  Evaluation evaluate(const enc::EncodedObservation& obs,
                      const sim::Action& action, Scratch& scratch) const;

  std::vector<Evaluation> evaluate_actions(
      const std::vector<enc::EncodedObservation>& obs,
      const std::vector<sim::Action>& actions) const;

  // Critic value over a grid of hypothetical label placements: cell centers
  // span [-S/2, S/2]^2 (offset mode) or one integration step of accelerations
  // in [-maxAcc, maxAcc]^2 (accel mode). Row-major, x across columns, z down
  // rows. Probes a copy; the world is untouched.
  std::vector<double> value_heatmap(const sim::World& world, size_t label_index,
                                    int grid = 30,
                                    HeatmapMode mode = HeatmapMode::offset) const;

  nn::Net<float>& actor() { return actor_; }
  nn::Net<float>& critic() { return critic_; }
  const nn::Net<float>& actor() const { return actor_; }
  const nn::Net<float>& critic() const { return critic_; }
  const PolicyConfig& config() const { return config_; }

  // Hash of everything a checkpoint must agree on to be loadable.
  uint64_t fingerprint() const;

 private:
  PolicyConfig config_;
  nn::Net<float> actor_;
  nn::Net<float> critic_;
  Scratch scratch_;
};

void save_checkpoint(const Policy& policy, const std::string& path);
Policy load_checkpoint(const std::string& path, const PolicyConfig& cfg);

}  // namespace dynlabel::policy
