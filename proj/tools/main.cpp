#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dynlabel/errors.hpp"
#include "dynlabel/harness.hpp"

namespace {

using namespace dynlabel;

cli::RunConfig make_config(const std::string& config_path, uint64_t seed,
                           bool seed_set, bool single_thread) {
  cli::RunConfig cfg = cli::load_config(config_path);
  if (seed_set) cfg.seed = seed;
  if (single_thread) {
    cfg.ppo.threads = 1;
    cfg.ppo.num_worlds = 1;
  }
  return cfg;
}

std::vector<run::ControllerKind> parse_controllers(
    const std::vector<std::string>& names) {
  std::vector<run::ControllerKind> out;
  for (const auto& n : names) out.push_back(run::controller_from_string(n));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"View management for labels on moving objects: simulate, "
               "train, and evaluate label-placement controllers"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  uint64_t seed = 0;
  bool single_thread = false;
  app.add_option("--config", config_path, "TOML config file");
  auto* seed_opt = app.add_option("--seed", seed, "override the run seed");
  app.add_flag("--single-thread", single_thread,
               "single-threaded, bit-reproducible mode");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "split a trajectory CSV into scenes");
  std::string csv_path, out_dir = "out";
  ingest->add_option("csv", csv_path, "trajectory CSV (t,id,x,z)")->required();
  ingest->add_option("--out", out_dir, "output directory");

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic trajectory CSV");
  std::string synth_kind = "crossing_pair", synth_out = "corpus.csv";
  double synth_duration = 400.0;
  uint64_t synth_seed = 1;
  synth->add_option("--kind", synth_kind,
                    "crossing_pair|roundabout|lane_drill|random_walk");
  synth->add_option("--duration", synth_duration, "seconds of data");
  synth->add_option("--gen-seed", synth_seed, "generator seed");
  synth->add_option("--out", synth_out, "output CSV path");

  // train
  auto* train = app.add_subcommand("train", "train the label-placement policy");
  std::string train_data = "crossing_pair", train_out = "out";
  train->add_option("--data", train_data,
                    "scene source: manifest dir, glob, or scenario name");
  train->add_option("--out", train_out, "output directory");

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate controllers on scenes");
  std::vector<std::string> controllers{"none", "force"};
  std::string checkpoint, eval_scenes = "crossing_pair", eval_out = "out";
  eval->add_option("--controller", controllers,
                   "controllers to run (none force rl)");
  eval->add_option("--checkpoint", checkpoint, "policy checkpoint (rl)");
  eval->add_option("--scenes", eval_scenes, "scene source");
  eval->add_option("--out", eval_out, "output directory");

  // replay
  auto* replay = app.add_subcommand("replay", "export a per-step replay (JSONL)");
  std::string replay_controller = "none", replay_scene, replay_out = "replay.jsonl";
  std::string replay_checkpoint;
  replay->add_option("--controller", replay_controller, "none|force|rl");
  replay->add_option("--checkpoint", replay_checkpoint, "policy checkpoint (rl)");
  replay->add_option("--scene", replay_scene, "scene source")->required();
  replay->add_option("--out", replay_out, "output JSONL path");

  // heatmap
  auto* heatmap = app.add_subcommand("heatmap", "export the critic value grid");
  std::string hm_checkpoint, hm_scene, hm_out = "heatmap.csv", hm_mode = "offset";
  int hm_step = 0, hm_label = 0;
  heatmap->add_option("--checkpoint", hm_checkpoint, "policy checkpoint")
      ->required();
  heatmap->add_option("--scene", hm_scene, "scene source")->required();
  heatmap->add_option("--step", hm_step, "probe step");
  heatmap->add_option("--label", hm_label, "label index");
  heatmap->add_option("--out", hm_out, "output CSV path");
  heatmap->add_option("--mode", hm_mode, "offset|accel grid");

  CLI11_PARSE(app, argc, argv);

  try {
    cli::RunConfig cfg = make_config(config_path, seed, seed_opt->count() > 0,
                                     single_thread);
    if (*ingest) {
      auto r = cli::cmd_ingest(cfg, csv_path, out_dir);
      std::printf("ingested %zu scenes -> %s\n", r.scene_count,
                  r.manifest_path.c_str());
    } else if (*synth) {
      cli::cmd_synth(cfg, synth_kind, synth_duration, synth_seed, synth_out);
      std::printf("wrote %s\n", synth_out.c_str());
    } else if (*train) {
      auto r = cli::cmd_train(cfg, train_data, train_out);
      std::printf("trained %zu updates -> %s\n", r.log.size(),
                  r.final_checkpoint.c_str());
    } else if (*eval) {
      auto r = cli::cmd_eval(cfg, parse_controllers(controllers), checkpoint,
                             eval_scenes, eval_out, single_thread);
      std::fputs(r.table_text.c_str(), stdout);
      std::printf("metrics -> %s\n", r.metrics_path.c_str());
    } else if (*replay) {
      cli::cmd_replay(cfg, run::controller_from_string(replay_controller),
                      replay_checkpoint, replay_scene, replay_out);
      std::printf("wrote %s\n", replay_out.c_str());
    } else if (*heatmap) {
      policy::HeatmapMode mode;
      if (hm_mode == "offset") {
        mode = policy::HeatmapMode::offset;
      } else if (hm_mode == "accel") {
        mode = policy::HeatmapMode::accel;
      } else {
        throw UsageError("heatmap: --mode must be offset or accel");
      }
      cli::cmd_heatmap(cfg, hm_checkpoint, hm_scene, hm_step, hm_label, hm_out,
                       mode);
      std::printf("wrote %s\n", hm_out.c_str());
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
