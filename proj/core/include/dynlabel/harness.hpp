#pragma once

#include <string>
#include <vector>

#include "dynlabel/config.hpp"
#include "dynlabel/policy.hpp"
#include "dynlabel/ppo.hpp"
#include "dynlabel/runner.hpp"
#include "dynlabel/scene_io.hpp"

namespace dynlabel::cli {

// Scene sources accepted by eval/replay/heatmap/train: a scene JSON file, a
// manifest.json (or a directory containing one), a glob over scene files, or
// a synthetic scenario name (crossing_pair, roundabout, lane_drill,
// random_walk) expanded from the [data] config.
std::vector<data::Scene> resolve_scenes(const RunConfig& cfg,
                                        const std::string& source,
                                        bool held_out_seeds);

std::vector<std::string> expand_glob(const std::string& pattern);

struct IngestResult {
  size_t scene_count = 0;
  std::string manifest_path;
};

// CSV corpus -> scene files + manifest under out_dir.
IngestResult cmd_ingest(const RunConfig& cfg, const std::string& csv_path,
                        const std::string& out_dir);

// Synthetic corpus -> trajectory CSV (same schema ingest reads).
void cmd_synth(const RunConfig& cfg, const std::string& kind, double duration,
               uint64_t seed, const std::string& out_csv);

ppo::TrainResult cmd_train(const RunConfig& cfg, const std::string& data_source,
                           const std::string& out_dir);

struct EvalResult {
  std::string metrics_path;
  std::string table_path;
  std::string table_text;
};

EvalResult cmd_eval(const RunConfig& cfg,
                    const std::vector<run::ControllerKind>& controllers,
                    const std::string& checkpoint,
                    const std::string& scenes_source,
                    const std::string& out_dir, bool single_thread);

void cmd_replay(const RunConfig& cfg, run::ControllerKind controller,
                const std::string& checkpoint, const std::string& scene_source,
                const std::string& out_path);

struct HeatmapResult {
  int grid = 30;
  std::vector<double> values;  // row-major, x across columns, z down rows
  uint64_t hash_before = 0;
  uint64_t hash_after = 0;
};

HeatmapResult cmd_heatmap(const RunConfig& cfg, const std::string& checkpoint,
                          const std::string& scene_source, int step,
                          int label_index, const std::string& out_csv,
                          policy::HeatmapMode mode = policy::HeatmapMode::offset);

}  // namespace dynlabel::cli
