#pragma once

// Shared scene/world builders for tests: stationary or scripted objects with
// a known camera.

#include <string>
#include <vector>

#include "dynlabel/runner.hpp"
#include "dynlabel/sim.hpp"
#include "dynlabel/trajectory.hpp"

namespace fixtures {

using namespace dynlabel;

// Scene with constant-position tracks, num_steps decision steps at dt.
inline data::Scene static_scene(const std::vector<Vec2>& positions,
                                int num_steps = 10, double dt = 0.1) {
  data::Scene scene;
  scene.scene_id = "static";
  scene.dt = dt;
  scene.num_steps = num_steps;
  scene.duration = num_steps * dt;
  for (size_t i = 0; i < positions.size(); ++i) {
    data::ResampledTrack tr;
    tr.id = "o" + std::to_string(i);
    tr.entry_step = 0;
    tr.exit_step = num_steps;
    tr.pos.assign(static_cast<size_t>(num_steps) + 1, positions[i]);
    tr.vel.assign(static_cast<size_t>(num_steps) + 1, Vec2{});
    scene.tracks.push_back(std::move(tr));
  }
  return scene;
}

// Scene whose track k follows path_k(step).
inline data::Scene scripted_scene(
    const std::vector<std::function<Vec2(int)>>& paths, int num_steps = 10,
    double dt = 0.1) {
  data::Scene scene;
  scene.scene_id = "scripted";
  scene.dt = dt;
  scene.num_steps = num_steps;
  scene.duration = num_steps * dt;
  for (size_t i = 0; i < paths.size(); ++i) {
    data::ResampledTrack tr;
    tr.id = "o" + std::to_string(i);
    tr.entry_step = 0;
    tr.exit_step = num_steps;
    for (int k = 0; k <= num_steps; ++k) tr.pos.push_back(paths[i](k));
    tr.vel.resize(tr.pos.size());
    for (size_t k = 1; k < tr.pos.size(); ++k)
      tr.vel[k] = (tr.pos[k] - tr.pos[k - 1]) * (1.0 / dt);
    if (tr.vel.size() > 1) tr.vel[0] = tr.vel[1];
    scene.tracks.push_back(std::move(tr));
  }
  return scene;
}

inline std::vector<std::string> all_ids(const data::Scene& scene) {
  std::vector<std::string> ids;
  for (const auto& t : scene.tracks) ids.push_back(t.id);
  return ids;
}

// Camera on the +z side looking at the origin: screen-u increases with
// world +x, which keeps left/right reasoning in tests direct.
inline geom::CameraSpec test_camera() {
  geom::CameraSpec cam;
  cam.eye = Vec3{0.0, 6.0, 14.0};
  cam.target = Vec3{0.0, 1.0, 0.0};
  return cam;
}

inline run::EnvConfig test_env() {
  run::EnvConfig env;
  env.camera = test_camera();
  return env;
}

}  // namespace fixtures
