#include "dynlabel/policy.hpp"

#include <cmath>
#include <cstdio>

#include "dynlabel/errors.hpp"
#include "dynlabel/geometry.hpp"

namespace dynlabel::policy {

namespace {

const float* neighbor_data(const enc::EncodedObservation& obs) {
  return obs.neighbors.empty() ? nullptr : obs.neighbors.front().data();
}

}  // namespace

Policy::Policy(const PolicyConfig& cfg, uint64_t init_seed)
    : config_(cfg),
      actor_(cfg.dims, 4, "actor"),
      critic_(cfg.dims, 1, "critic") {
  Rng rng(init_seed);
  actor_.init_params(rng);
  critic_.init_params(rng);
}

PolicyDecision Policy::act(const enc::EncodedObservation& obs, ActMode mode,
                           Rng& rng, Scratch& scratch) const {
  if (!obs.valid) throw UsageError("act: observation is invalid");
  actor_.forward(obs.self.data(), neighbor_data(obs), obs.neighbors.size(),
                 scratch.actor);
  float mu[2], log_std[2];
  bool clamped[2];
  nn::split_gaussian_head(scratch.actor.out.data(), mu, log_std, clamped);

  float a[2];
  if (mode == ActMode::stochastic) {
    nn::gaussian_sample2(mu, log_std, rng, a);
  } else {
    a[0] = mu[0];
    a[1] = mu[1];
  }

  critic_.forward(obs.self.data(), neighbor_data(obs), obs.neighbors.size(),
                  scratch.critic);

  PolicyDecision d;
  d.action.a = Vec2{a[0], a[1]};
  d.log_prob = nn::gaussian_log_prob2(mu, log_std, a);
  d.value = scratch.critic.out[0];
  d.mean = Vec2{mu[0], mu[1]};
  d.std = Vec2{std::exp(static_cast<double>(log_std[0])),
               std::exp(static_cast<double>(log_std[1]))};
  if (!std::isfinite(d.mean.x) || !std::isfinite(d.mean.y) ||
      !std::isfinite(d.log_prob) || !std::isfinite(d.value))
    throw DivergenceError("act: policy produced non-finite output");
  return d;
}

PolicyDecision Policy::act(const enc::EncodedObservation& obs, ActMode mode,
                           Rng& rng) {
  return act(obs, mode, rng, scratch_);
}

Evaluation Policy::evaluate(const enc::EncodedObservation& obs,
                            const sim::Action& action,
                            Scratch& scratch) const {
  if (!obs.valid) throw UsageError("evaluate: observation is invalid");
  actor_.forward(obs.self.data(), neighbor_data(obs), obs.neighbors.size(),
                 scratch.actor);
  float mu[2], log_std[2];
  bool clamped[2];
  nn::split_gaussian_head(scratch.actor.out.data(), mu, log_std, clamped);
  critic_.forward(obs.self.data(), neighbor_data(obs), obs.neighbors.size(),
                  scratch.critic);

  float a[2] = {static_cast<float>(action.a.x), static_cast<float>(action.a.y)};
  Evaluation e;
  e.log_prob = nn::gaussian_log_prob2(mu, log_std, a);
  e.value = scratch.critic.out[0];
  e.entropy = nn::gaussian_entropy2(log_std);
  return e;
}

std::vector<Evaluation> Policy::evaluate_actions(
    const std::vector<enc::EncodedObservation>& obs,
    const std::vector<sim::Action>& actions) const {
  if (obs.size() != actions.size())
    throw UsageError("evaluate_actions: batch size mismatch");
  Scratch scratch;
  std::vector<Evaluation> out;
  out.reserve(obs.size());
  for (size_t i = 0; i < obs.size(); ++i)
    out.push_back(evaluate(obs[i], actions[i], scratch));
  return out;
}

std::vector<double> Policy::value_heatmap(const sim::World& world,
                                          size_t label_index, int grid,
                                          HeatmapMode mode) const {
  if (label_index >= world.state().labels.size())
    throw UsageError("value_heatmap: label index out of range");
  sim::World probe = world;  // original untouched
  const sim::SimConfig& cfg = world.config();
  const sim::LabelState& label = world.state().labels[label_index];
  Vec2 base_offset = label.offset;
  Vec2 base_vel = label.offset_vel;

  Scratch scratch;
  std::vector<double> values;
  values.reserve(static_cast<size_t>(grid) * grid);
  for (int row = 0; row < grid; ++row) {
    for (int col = 0; col < grid; ++col) {
      Vec2 offset;
      if (mode == HeatmapMode::offset) {
        double s = cfg.plane_side;
        offset = Vec2{-s / 2.0 + (col + 0.5) * s / grid,
                      -s / 2.0 + (row + 0.5) * s / grid};
      } else {
        double m = cfg.max_acc;
        Vec2 acc{-m + (col + 0.5) * 2.0 * m / grid,
                 -m + (row + 0.5) * 2.0 * m / grid};
        Vec2 vel = base_vel + acc * cfg.dt;
        offset = base_offset + vel * cfg.dt;
      }
      probe.place_label(label_index, offset);
      enc::EncodedObservation obs =
          enc::encode_observation(probe.state(), cfg, probe.projector(),
                                  config_.encoder, label_index);
      if (!obs.valid) {
        values.push_back(0.0);
        continue;
      }
      critic_.forward(obs.self.data(), neighbor_data(obs),
                      obs.neighbors.size(), scratch.critic);
      values.push_back(scratch.critic.out[0]);
    }
  }
  return values;
}

uint64_t Policy::fingerprint() const {
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "self=%zu|neigh=%zu|hidden=%zu|score=%zu|ref_speed=%.9g|rel_scale=%.9g",
                config_.dims.self_dim, config_.dims.neigh_dim,
                config_.dims.hidden, config_.dims.score_hidden,
                config_.encoder.ref_speed, config_.encoder.rel_scale);
  uint64_t h = 0xcbf29ce484222325ULL;
  for (const char* c = buf; *c; ++c) {
    h ^= static_cast<unsigned char>(*c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace dynlabel::policy
