#include "dynlabel/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dynlabel/errors.hpp"
#include "dynlabel/synth.hpp"

namespace dynlabel::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool glob_match(const std::string& pattern, const std::string& name) {
  size_t p = 0, n = 0, star = std::string::npos, backtrack = 0;
  while (n < name.size()) {
    if (p < pattern.size() && (pattern[p] == name[n])) {
      ++p;
      ++n;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      backtrack = n;
    } else if (star != std::string::npos) {
      p = star + 1;
      n = ++backtrack;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

bool is_scenario_name(const std::string& s) {
  return s == "crossing_pair" || s == "roundabout" || s == "lane_drill" ||
         s == "random_walk";
}

policy::PolicyConfig policy_config(const RunConfig& cfg) {
  policy::PolicyConfig pc;
  pc.encoder = cfg.encoder;
  return pc;
}

}  // namespace

std::vector<std::string> expand_glob(const std::string& pattern) {
  if (pattern.find('*') == std::string::npos) return {pattern};
  fs::path p(pattern);
  fs::path dir = p.parent_path().empty() ? fs::path(".") : p.parent_path();
  std::string leaf = p.filename().string();
  if (dir.string().find('*') != std::string::npos)
    throw UsageError("glob wildcards are only supported in the file name: " +
                     pattern);
  std::vector<std::string> out;
  if (!fs::exists(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && glob_match(leaf, e.path().filename().string()))
      out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<data::Scene> resolve_scenes(const RunConfig& cfg,
                                        const std::string& source,
                                        bool held_out_seeds) {
  std::vector<data::Scene> scenes;
  if (is_scenario_name(source)) {
    data::SynthKind kind = data::synth_kind_from_string(source);
    data::SynthParams params = cfg.synth_params();
    int count = held_out_seeds ? cfg.data.test_scenes : cfg.data.train_scenes;
    uint64_t base = cfg.seed + (held_out_seeds ? 10000 : 0);
    for (int i = 0; i < count; ++i)
      scenes.push_back(
          data::synth_generate(kind, params, base + i, cfg.sim.dt));
    return scenes;
  }

  std::vector<std::string> files;
  if (source.find('*') != std::string::npos) {
    files = expand_glob(source);
  } else if (fs::is_directory(source)) {
    files = data::manifest_scene_files((fs::path(source) / "manifest.json").string());
  } else if (fs::path(source).filename() == "manifest.json") {
    files = data::manifest_scene_files(source);
  } else if (fs::exists(source)) {
    files = {source};
  } else {
    throw UsageError("scene source '" + source +
                     "' is neither a file, directory, glob, nor scenario name");
  }
  for (const auto& f : files) scenes.push_back(data::load_scene(f));
  std::sort(scenes.begin(), scenes.end(),
            [](const data::Scene& a, const data::Scene& b) {
              return a.scene_id < b.scene_id;
            });
  return scenes;
}

IngestResult cmd_ingest(const RunConfig& cfg, const std::string& csv_path,
                        const std::string& out_dir) {
  std::ifstream in(csv_path);
  if (!in) throw DataError("cannot open '" + csv_path + "'");
  auto tracks = data::ingest_csv(in);

  data::SplitOptions opts;
  opts.excluded_windows = cfg.data.excluded_windows;
  auto scenes = data::split_scenes(tracks, cfg.data.scene_len, cfg.sim.dt, opts);

  fs::create_directories(out_dir);
  std::vector<data::ManifestEntry> entries;
  for (const auto& scene : scenes) {
    std::string file = scene.scene_id + ".json";
    data::save_scene(scene, (fs::path(out_dir) / file).string());
    data::ManifestEntry e;
    e.scene_id = scene.scene_id;
    e.file = file;
    e.steps = scene.num_steps;
    for (const auto& t : scene.tracks) e.track_ids.push_back(t.id);
    e.stats = data::scene_stats(scene);
    entries.push_back(std::move(e));
  }
  IngestResult result;
  result.scene_count = scenes.size();
  result.manifest_path = (fs::path(out_dir) / "manifest.json").string();
  data::write_manifest(entries, result.manifest_path);
  return result;
}

void cmd_synth(const RunConfig& cfg, const std::string& kind, double duration,
               uint64_t seed, const std::string& out_csv) {
  data::SynthParams params = cfg.synth_params();
  params.duration = duration;
  auto tracks = data::synth_tracks(data::synth_kind_from_string(kind), params,
                                   seed);
  std::ofstream out(out_csv);
  if (!out) throw DataError("cannot write '" + out_csv + "'");
  data::emit_csv(tracks, out);
}

ppo::TrainResult cmd_train(const RunConfig& cfg, const std::string& data_source,
                           const std::string& out_dir) {
  std::vector<data::Scene> train_scenes, test_scenes;
  if (is_scenario_name(data_source)) {
    train_scenes = resolve_scenes(cfg, data_source, false);
    test_scenes = resolve_scenes(cfg, data_source, true);
  } else {
    auto scenes = resolve_scenes(cfg, data_source, false);
    auto split = data::train_test_split(scenes, cfg.data.ratio,
                                        cfg.data.split_seed);
    train_scenes = std::move(split.train);
    test_scenes = std::move(split.test);
  }
  fs::create_directories(out_dir);
  save_config(cfg, (fs::path(out_dir) / "config.toml").string());
  return ppo::train(cfg.ppo, cfg.curriculum, cfg.env(), policy_config(cfg),
                    train_scenes, test_scenes, out_dir, cfg.seed);
}

EvalResult cmd_eval(const RunConfig& cfg,
                    const std::vector<run::ControllerKind>& controllers,
                    const std::string& checkpoint,
                    const std::string& scenes_source,
                    const std::string& out_dir, bool single_thread) {
  auto scenes = resolve_scenes(cfg, scenes_source, true);
  if (scenes.empty()) throw DataError("eval: no scenes in '" + scenes_source + "'");

  bool needs_rl = std::find(controllers.begin(), controllers.end(),
                            run::ControllerKind::rl) != controllers.end();
  std::unique_ptr<policy::Policy> policy;
  if (needs_rl) {
    if (checkpoint.empty())
      throw UsageError("eval: the rl controller requires --checkpoint");
    policy = std::make_unique<policy::Policy>(
        policy::load_checkpoint(checkpoint, policy_config(cfg)));
  }

  fs::create_directories(out_dir);
  EvalResult result;
  result.metrics_path = (fs::path(out_dir) / "metrics.csv").string();
  result.table_path = (fs::path(out_dir) / "table.txt").string();

  std::ofstream csv(result.metrics_path);
  if (!csv) throw DataError("cannot write '" + result.metrics_path + "'");
  csv << "method,scene,occ,int,dist\n";

  std::ostringstream table;
  table << "method     OCC      INT      DIST\n";

  run::EnvConfig env = cfg.env();
  for (run::ControllerKind kind : controllers) {
    run::Controller ctl;
    ctl.kind = kind;
    ctl.force = cfg.force;
    ctl.policy = policy.get();
    ctl.mode = policy::ActMode::deterministic;

    // Scene-level parallelism with a deterministic merge: results land in
    // per-scene slots and are emitted in scene order.
    std::vector<run::SceneRunResult> results(scenes.size());
    unsigned hw = std::thread::hardware_concurrency();
    size_t n_threads = single_thread ? 1 : std::min<size_t>(hw ? hw : 1, 8);
    if (n_threads <= 1) {
      for (size_t i = 0; i < scenes.size(); ++i)
        results[i] = run::run_scene(scenes[i], env, ctl);
    } else {
      std::vector<std::thread> pool;
      for (size_t t = 0; t < n_threads; ++t)
        pool.emplace_back([&, t]() {
          for (size_t i = t; i < scenes.size(); i += n_threads)
            results[i] = run::run_scene(scenes[i], env, ctl);
        });
      for (auto& th : pool) th.join();
    }

    char buf[160];
    double occ = 0.0, intr = 0.0, dist = 0.0;
    for (size_t i = 0; i < scenes.size(); ++i) {
      const auto& m = results[i].metrics;
      std::snprintf(buf, sizeof(buf), "%s,%s,%.9g,%.9g,%.9g\n",
                    run::to_string(kind).c_str(), scenes[i].scene_id.c_str(),
                    m.occ, m.int_, m.dist);
      csv << buf;
      occ += m.occ;
      intr += m.int_;
      dist += m.dist;
    }
    double n = static_cast<double>(scenes.size());
    std::snprintf(buf, sizeof(buf), "%-9s  %7.4f  %7.4f  %+8.3f\n",
                  run::to_string(kind).c_str(), occ / n, intr / n, dist / n);
    table << buf;
  }

  result.table_text = table.str();
  std::ofstream table_out(result.table_path);
  table_out << result.table_text;
  return result;
}

void cmd_replay(const RunConfig& cfg, run::ControllerKind controller,
                const std::string& checkpoint, const std::string& scene_source,
                const std::string& out_path) {
  auto scenes = resolve_scenes(cfg, scene_source, true);
  if (scenes.empty()) throw DataError("replay: no scene found");
  const data::Scene& scene = scenes.front();

  std::unique_ptr<policy::Policy> policy;
  run::Controller ctl;
  ctl.kind = controller;
  ctl.force = cfg.force;
  ctl.mode = policy::ActMode::deterministic;
  if (controller == run::ControllerKind::rl) {
    if (checkpoint.empty())
      throw UsageError("replay: the rl controller requires --checkpoint");
    policy = std::make_unique<policy::Policy>(
        policy::load_checkpoint(checkpoint, policy_config(cfg)));
    ctl.policy = policy.get();
  }

  auto result = run::run_scene(scene, cfg.env(), ctl, nullptr, true);

  std::ofstream out(out_path);
  if (!out) throw DataError("cannot write '" + out_path + "'");
  for (const auto& rec : result.replay) {
    json objects = json::array();
    for (size_t i = 0; i < rec.object_pos.size(); ++i)
      objects.push_back({{"id", scene.tracks[i].id},
                         {"pos", {rec.object_pos[i].x, rec.object_pos[i].y,
                                  rec.object_pos[i].z}},
                         {"active", static_cast<bool>(rec.object_active[i])}});
    json labels = json::array();
    for (size_t i = 0; i < rec.offsets.size(); ++i) {
      json l = {{"target", scene.tracks[i].id},
                {"offset", {rec.offsets[i].x, rec.offsets[i].y}},
                {"world_pos", {rec.label_pos[i].x, rec.label_pos[i].y,
                               rec.label_pos[i].z}},
                {"n_occ", rec.counts[i].n_occ},
                {"n_int", rec.counts[i].n_int}};
      if (rec.has_actions) {
        l["reward"] = rec.rewards[i];
        l["action"] = {rec.actions[i].x, rec.actions[i].y};
      }
      labels.push_back(std::move(l));
    }
    json line = {{"step", rec.step},
                 {"time", rec.time},
                 {"objects", std::move(objects)},
                 {"labels", std::move(labels)}};
    out << line.dump() << "\n";
  }
}

HeatmapResult cmd_heatmap(const RunConfig& cfg, const std::string& checkpoint,
                          const std::string& scene_source, int step,
                          int label_index, const std::string& out_csv,
                          policy::HeatmapMode mode) {
  auto scenes = resolve_scenes(cfg, scene_source, true);
  if (scenes.empty()) throw DataError("heatmap: no scene found");
  const data::Scene& scene = scenes.front();
  if (step < 0 || step > scene.num_steps)
    throw UsageError("heatmap: step " + std::to_string(step) +
                     " outside [0, " + std::to_string(scene.num_steps) + "]");

  policy::Policy policy =
      policy::load_checkpoint(checkpoint, policy_config(cfg));

  std::vector<std::string> labeled;
  for (const auto& t : scene.tracks) labeled.push_back(t.id);
  sim::World world(scene, cfg.sim, cfg.camera, labeled);
  if (label_index < 0 ||
      static_cast<size_t>(label_index) >= world.state().labels.size())
    throw UsageError("heatmap: label index out of range");

  // Replay deterministically up to the probe step.
  Rng rng(0);
  policy::Policy::Scratch scratch;
  std::vector<sim::Action> actions(world.state().labels.size());
  for (int t = 0; t < step; ++t) {
    for (size_t i = 0; i < actions.size(); ++i) {
      actions[i] = sim::Action{{0.0, 0.0}};
      if (!world.state().labels[i].active) continue;
      auto obs = enc::encode_observation(world.state(), cfg.sim,
                                         world.projector(), cfg.encoder, i);
      if (obs.valid)
        actions[i] =
            policy.act(obs, policy::ActMode::deterministic, rng, scratch).action;
    }
    world.step(actions);
  }

  HeatmapResult result;
  result.hash_before = world.state_hash();
  result.values = policy.value_heatmap(world, static_cast<size_t>(label_index),
                                       result.grid, mode);
  result.hash_after = world.state_hash();

  std::ofstream out(out_csv);
  if (!out) throw DataError("cannot write '" + out_csv + "'");
  char buf[32];
  for (int r = 0; r < result.grid; ++r) {
    for (int c = 0; c < result.grid; ++c) {
      std::snprintf(buf, sizeof(buf), "%.9g",
                    result.values[static_cast<size_t>(r) * result.grid + c]);
      out << buf << (c + 1 == result.grid ? "\n" : ",");
    }
  }
  return result;
}

}  // namespace dynlabel::cli
