#include "dynlabel/runner.hpp"

#include "dynlabel/errors.hpp"
#include "dynlabel/geometry.hpp"

namespace dynlabel::run {

ControllerKind controller_from_string(const std::string& s) {
  if (s == "none") return ControllerKind::none;
  if (s == "force") return ControllerKind::force;
  if (s == "rl") return ControllerKind::rl;
  throw UsageError("unknown controller '" + s + "' (expected none|force|rl)");
}

std::string to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::none: return "none";
    case ControllerKind::force: return "force";
    case ControllerKind::rl: return "rl";
  }
  return "?";
}

namespace {

StepRecord snapshot(const sim::WorldState& state,
                    const std::vector<metrics::StepCounts>& counts) {
  StepRecord rec;
  rec.step = state.step;
  rec.time = state.time;
  for (const auto& o : state.objects) {
    rec.object_pos.push_back(o.pos);
    rec.object_active.push_back(o.active);
  }
  for (const auto& l : state.labels) {
    rec.offsets.push_back(l.offset);
    rec.label_pos.push_back(l.world_pos);
  }
  rec.counts = counts;
  return rec;
}

}  // namespace

SceneRunResult run_scene(const data::Scene& scene, const EnvConfig& env,
                         const Controller& controller, Rng* rng, bool record) {
  if (controller.kind == ControllerKind::rl && !controller.policy)
    throw UsageError("rl controller requires a policy");

  std::vector<std::string> labeled;
  for (const auto& t : scene.tracks) labeled.push_back(t.id);
  sim::World world(scene, env.sim, env.camera, labeled);
  const geom::Projector& proj = world.projector();

  size_t n_labels = world.state().labels.size();
  std::vector<bool> pinned(n_labels, controller.kind == ControllerKind::none);
  std::vector<double> reward_sums(n_labels, 0.0);
  Rng fallback_rng(0);
  Rng& sample_rng = rng ? *rng : fallback_rng;

  policy::Policy::Scratch scratch;
  metrics::MetricsAccumulator acc;
  SceneRunResult result;

  if (record)
    result.replay.push_back(
        snapshot(world.state(), geom::measure_step(world.state(), env.sim, proj)));

  std::vector<sim::Action> actions(n_labels);
  std::vector<bool> pin_mask(pinned);
  while (!world.finished()) {
    const sim::WorldState before = world.state();
    for (size_t i = 0; i < n_labels; ++i) {
      const sim::LabelState& label = world.state().labels[i];
      if (!label.active) {
        actions[i] = sim::Action{{0.0, 0.0}};
        continue;
      }
      switch (controller.kind) {
        case ControllerKind::none:
          actions[i] = baseline::none_controller(world.state(), i);
          break;
        case ControllerKind::force:
          actions[i] = baseline::force_controller(world.state(), env.sim, proj,
                                                  i, controller.force);
          break;
        case ControllerKind::rl: {
          enc::EncodedObservation obs = enc::encode_observation(
              world.state(), env.sim, proj, env.encoder, i);
          if (!obs.valid) {
            ++result.invalid_observations;
            actions[i] = sim::Action{{0.0, 0.0}};
          } else {
            actions[i] = controller.policy
                             ->act(obs, controller.mode, sample_rng, scratch)
                             .action;
          }
          break;
        }
      }
    }

    world.step(actions, &pin_mask);
    auto counts = geom::measure_step(world.state(), env.sim, proj);
    acc.accumulate(before, world.state(), counts);

    std::vector<double> rewards(n_labels, 0.0);
    for (size_t i = 0; i < n_labels; ++i) {
      if (!world.state().labels[i].active) continue;
      rewards[i] =
          metrics::reward(counts[i], actions[i], env.sim.max_acc, env.reward)
              .total;
      reward_sums[i] += rewards[i];
    }

    if (record) {
      StepRecord rec = snapshot(world.state(), counts);
      rec.rewards = rewards;
      rec.actions.reserve(n_labels);
      for (size_t i = 0; i < n_labels; ++i) rec.actions.push_back(actions[i].a);
      rec.has_actions = true;
      result.replay.push_back(std::move(rec));
    }
  }

  result.metrics = acc.finalize();
  double total = 0.0;
  for (double r : reward_sums) total += r;
  result.mean_episode_reward =
      n_labels ? total / static_cast<double>(n_labels) : 0.0;
  return result;
}

}  // namespace dynlabel::run
