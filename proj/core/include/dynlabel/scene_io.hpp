#pragma once

#include <string>
#include <vector>

#include "dynlabel/trajectory.hpp"

namespace dynlabel::data {

// Scene files are JSON: id, dt, duration, steps, and per-track positions and
// velocities over [entry_step, exit_step].
void save_scene(const Scene& scene, const std::string& path);
Scene load_scene(const std::string& path);

struct ManifestEntry {
  std::string scene_id;
  std::string file;
  int steps = 0;
  std::vector<std::string> track_ids;
  SceneStats stats;
};

// manifest.json: per-scene ids, step counts, track ids, and the corpus-style
// statistics (max concurrent objects, mean speed, mean moving distance).
void write_manifest(const std::vector<ManifestEntry>& entries,
                    const std::string& path);

// Scene ids + files listed in a manifest, in listed order.
std::vector<std::string> manifest_scene_files(const std::string& manifest_path);

}  // namespace dynlabel::data
