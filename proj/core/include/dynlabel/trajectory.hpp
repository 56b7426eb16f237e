#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dynlabel/math.hpp"

namespace dynlabel::data {

// One observed position of an entity on the ground plane (x, z), in meters.
struct TrajectorySample {
  double t = 0.0;  // seconds, >= 0
  Vec2 pos;        // (x, z)
};

struct RawTrack {
  std::string id;
  std::vector<TrajectorySample> samples;  // strictly increasing in t

  double t_first() const { return samples.front().t; }
  double t_last() const { return samples.back().t; }
};

// A track resampled to the decision rate over one scene window. Positions and
// velocities are indexed by step relative to the window start; a track that
// enters or leaves mid-window covers only [entry_step, exit_step].
struct ResampledTrack {
  std::string id;
  int entry_step = 0;
  int exit_step = 0;  // inclusive
  std::vector<Vec2> pos;
  std::vector<Vec2> vel;

  bool covers(int step) const { return step >= entry_step && step <= exit_step; }
  const Vec2& pos_at(int step) const { return pos[static_cast<size_t>(step - entry_step)]; }
  const Vec2& vel_at(int step) const { return vel[static_cast<size_t>(step - entry_step)]; }
};

struct Scene {
  std::string scene_id;
  double duration = 15.0;
  double dt = 0.1;
  int num_steps = 150;  // decision steps; state samples span 0..num_steps
  std::vector<ResampledTrack> tracks;

  const ResampledTrack* find_track(const std::string& id) const;
};

struct DatasetSplit {
  std::vector<Scene> train;
  std::vector<Scene> test;
  uint64_t seed = 0;
};

struct SceneStats {
  int max_concurrent = 0;
  double mean_speed = 0.0;            // m/s, averaged over tracks
  double mean_moving_distance = 0.0;  // meters, averaged over tracks
};

// --- CSV ingestion -------------------------------------------------------

// Reads `t,id,x,z` rows (header required). Tracks are grouped by id and
// sorted by time; duplicate (t, id) pairs and malformed rows raise DataError
// with the offending line number.
std::vector<RawTrack> ingest_csv(std::istream& in);

// Lossless writer (17 significant digits); ingest(emit(tracks)) == tracks.
void emit_csv(const std::vector<RawTrack>& tracks, std::ostream& out);

// --- Resampling and scene splitting --------------------------------------

// Linear interpolation of the track at t_start + k*dt for k in [0, num_steps].
// Queries that exactly hit a raw sample reproduce its position bit-exactly.
// Velocity at step k is the backward difference; step 0 copies step 1.
ResampledTrack resample(const RawTrack& track, double dt, double t_start,
                        int num_steps);

struct SplitOptions {
  // Tracks that must cover every kept window end to end. Windows where any
  // of these covers less than the full scene length are discarded.
  std::vector<std::string> required_ids;
  // Window indices to drop (e.g. hand-curated stoppages); counted over the
  // kept sequence *before* exclusion, i.e. raw window index.
  std::vector<int> excluded_windows;
  std::string id_prefix = "scene";
};

// Cuts the corpus into consecutive non-overlapping windows of scene_len
// seconds, anchored at the earliest sample, and resamples every track that
// covers at least two steps of a window. Trailing partial windows are
// discarded.
std::vector<Scene> split_scenes(const std::vector<RawTrack>& tracks,
                                double scene_len, double dt,
                                const SplitOptions& opts = {});

// Deterministic shuffle + split. Train size is floor(ratio*n), at least 1.
DatasetSplit train_test_split(const std::vector<Scene>& scenes, double ratio,
                              uint64_t seed);

SceneStats scene_stats(const Scene& scene);

}  // namespace dynlabel::data
