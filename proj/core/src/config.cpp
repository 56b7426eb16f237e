#include "dynlabel/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dynlabel/errors.hpp"

namespace dynlabel::cli {

namespace {

const tomlmini::Value* find(const tomlmini::Table& t, const std::string& section,
                            const std::string& key) {
  auto s = t.find(section);
  if (s == t.end()) return nullptr;
  auto k = s->second.find(key);
  if (k == s->second.end()) return nullptr;
  return &k->second;
}

void get(const tomlmini::Table& t, const std::string& sec,
         const std::string& key, double& out) {
  if (const auto* v = find(t, sec, key)) out = v->as_double();
}
void get(const tomlmini::Table& t, const std::string& sec,
         const std::string& key, int& out) {
  if (const auto* v = find(t, sec, key)) out = static_cast<int>(v->as_int());
}
void get(const tomlmini::Table& t, const std::string& sec,
         const std::string& key, uint64_t& out) {
  if (const auto* v = find(t, sec, key)) out = static_cast<uint64_t>(v->as_int());
}
void get(const tomlmini::Table& t, const std::string& sec,
         const std::string& key, std::string& out) {
  if (const auto* v = find(t, sec, key)) out = v->as_string();
}
void get(const tomlmini::Table& t, const std::string& sec,
         const std::string& key, Vec3& out) {
  if (const auto* v = find(t, sec, key)) {
    if (v->kind != tomlmini::Value::Kind::array || v->arr.size() != 3)
      throw DataError("config: " + sec + "." + key + " must be [x, y, z]");
    out = Vec3{v->arr[0].as_double(), v->arr[1].as_double(),
               v->arr[2].as_double()};
  }
}

}  // namespace

data::SynthParams RunConfig::synth_params() const {
  data::SynthParams p;
  p.count = data.count;
  p.speed_min = data.speed_min;
  p.speed_max = data.speed_max;
  p.arena_half = data.arena_half;
  p.radius = data.radius;
  p.duration = data.scene_len;
  return p;
}

RunConfig config_from_toml(const tomlmini::Table& t) {
  RunConfig c;
  get(t, "sim", "dt", c.sim.dt);
  get(t, "sim", "max_acc", c.sim.max_acc);
  get(t, "sim", "plane_side", c.sim.plane_side);
  get(t, "sim", "plane_height", c.sim.plane_height);
  get(t, "sim", "label_width", c.sim.label_width);
  get(t, "sim", "label_height", c.sim.label_height);
  get(t, "sim", "object_extent", c.sim.object_extent);

  get(t, "reward", "occ_unit", c.reward.occ_unit);
  get(t, "reward", "int_unit", c.reward.int_unit);
  get(t, "reward", "acc_unit", c.reward.acc_unit);

  get(t, "ppo", "gamma", c.ppo.gamma);
  get(t, "ppo", "lambda", c.ppo.lambda);
  get(t, "ppo", "clip_eps", c.ppo.clip_eps);
  get(t, "ppo", "entropy_coef", c.ppo.entropy_coef);
  get(t, "ppo", "value_coef", c.ppo.value_coef);
  get(t, "ppo", "epochs", c.ppo.epochs);
  get(t, "ppo", "buffer_size", c.ppo.buffer_size);
  get(t, "ppo", "batch_size", c.ppo.batch_size);
  get(t, "ppo", "lr0", c.ppo.lr0);
  get(t, "ppo", "total_steps", c.ppo.total_steps);
  get(t, "ppo", "episode_len", c.ppo.episode_len);
  get(t, "ppo", "eval_interval", c.ppo.eval_interval);
  get(t, "ppo", "checkpoint_interval", c.ppo.checkpoint_interval);
  get(t, "ppo", "num_worlds", c.ppo.num_worlds);
  get(t, "ppo", "threads", c.ppo.threads);
  get(t, "ppo", "grad_clip", c.ppo.grad_clip);
  get(t, "ppo", "abort_penalty", c.ppo.abort_penalty);

  get(t, "curriculum", "start", c.curriculum.start);
  get(t, "curriculum", "end", c.curriculum.end);
  get(t, "curriculum", "step", c.curriculum.step_size);

  get(t, "data", "scene_len", c.data.scene_len);
  get(t, "data", "ratio", c.data.ratio);
  get(t, "data", "split_seed", c.data.split_seed);
  get(t, "data", "scenario", c.data.scenario);
  get(t, "data", "count", c.data.count);
  get(t, "data", "speed_min", c.data.speed_min);
  get(t, "data", "speed_max", c.data.speed_max);
  get(t, "data", "arena_half", c.data.arena_half);
  get(t, "data", "radius", c.data.radius);
  get(t, "data", "train_scenes", c.data.train_scenes);
  get(t, "data", "test_scenes", c.data.test_scenes);
  if (const auto* v = find(t, "data", "excluded_windows")) {
    if (v->kind != tomlmini::Value::Kind::array)
      throw DataError("config: data.excluded_windows must be an array");
    for (const auto& e : v->arr)
      c.data.excluded_windows.push_back(static_cast<int>(e.as_int()));
  }

  get(t, "camera", "eye", c.camera.eye);
  get(t, "camera", "target", c.camera.target);
  get(t, "camera", "up", c.camera.up);
  get(t, "camera", "fov", c.camera.vertical_fov_deg);
  get(t, "camera", "aspect", c.camera.aspect);
  get(t, "camera", "near", c.camera.near);
  get(t, "camera", "far", c.camera.far);

  get(t, "force", "k_repel", c.force.k_repel);
  get(t, "force", "repel_radius", c.force.repel_radius);
  get(t, "force", "k_spring", c.force.k_spring);
  get(t, "force", "damping", c.force.damping);
  get(t, "force", "gain", c.force.gain);

  get(t, "encoder", "ref_speed", c.encoder.ref_speed);
  get(t, "encoder", "rel_scale", c.encoder.rel_scale);

  get(t, "run", "seed", c.seed);
  return c;
}

RunConfig load_config(const std::string& path) {
  if (path.empty()) return RunConfig{};
  return config_from_toml(tomlmini::parse_file(path));
}

std::string to_toml(const RunConfig& c) {
  std::ostringstream out;
  char buf[256];
  auto put = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof(buf), fmt, args...);
    out << buf;
  };
  put("[run]\nseed = %llu\n\n", static_cast<unsigned long long>(c.seed));
  put("[sim]\ndt = %.9g\nmax_acc = %.9g\nplane_side = %.9g\nplane_height = %.9g\n",
      c.sim.dt, c.sim.max_acc, c.sim.plane_side, c.sim.plane_height);
  put("label_width = %.9g\nlabel_height = %.9g\n", c.sim.label_width,
      c.sim.label_height);
  put("object_extent = [%.9g, %.9g, %.9g]\n\n", c.sim.object_extent.x,
      c.sim.object_extent.y, c.sim.object_extent.z);
  put("[reward]\nocc_unit = %.9g\nint_unit = %.9g\nacc_unit = %.9g\n\n",
      c.reward.occ_unit, c.reward.int_unit, c.reward.acc_unit);
  put("[ppo]\ngamma = %.9g\nlambda = %.9g\nclip_eps = %.9g\nentropy_coef = %.9g\n",
      c.ppo.gamma, c.ppo.lambda, c.ppo.clip_eps, c.ppo.entropy_coef);
  put("value_coef = %.9g\nepochs = %d\nbuffer_size = %zu\nbatch_size = %zu\n",
      c.ppo.value_coef, c.ppo.epochs, c.ppo.buffer_size, c.ppo.batch_size);
  put("lr0 = %.9g\ntotal_steps = %llu\nepisode_len = %d\n", c.ppo.lr0,
      static_cast<unsigned long long>(c.ppo.total_steps), c.ppo.episode_len);
  put("eval_interval = %llu\ncheckpoint_interval = %llu\nnum_worlds = %d\n",
      static_cast<unsigned long long>(c.ppo.eval_interval),
      static_cast<unsigned long long>(c.ppo.checkpoint_interval),
      c.ppo.num_worlds);
  put("threads = %d\ngrad_clip = %.9g\nabort_penalty = %.9g\n\n", c.ppo.threads,
      c.ppo.grad_clip, c.ppo.abort_penalty);
  put("[curriculum]\nstart = %d\nend = %d\nstep = %d\n\n", c.curriculum.start,
      c.curriculum.end, c.curriculum.step_size);
  put("[data]\nscene_len = %.9g\nratio = %.9g\nsplit_seed = %llu\n",
      c.data.scene_len, c.data.ratio,
      static_cast<unsigned long long>(c.data.split_seed));
  put("scenario = \"%s\"\ncount = %d\nspeed_min = %.9g\nspeed_max = %.9g\n",
      c.data.scenario.c_str(), c.data.count, c.data.speed_min, c.data.speed_max);
  put("arena_half = %.9g\nradius = %.9g\ntrain_scenes = %d\ntest_scenes = %d\n",
      c.data.arena_half, c.data.radius, c.data.train_scenes, c.data.test_scenes);
  out << "excluded_windows = [";
  for (size_t i = 0; i < c.data.excluded_windows.size(); ++i) {
    if (i) out << ", ";
    out << c.data.excluded_windows[i];
  }
  out << "]\n\n";
  put("[camera]\neye = [%.9g, %.9g, %.9g]\ntarget = [%.9g, %.9g, %.9g]\n",
      c.camera.eye.x, c.camera.eye.y, c.camera.eye.z, c.camera.target.x,
      c.camera.target.y, c.camera.target.z);
  put("up = [%.9g, %.9g, %.9g]\nfov = %.9g\naspect = %.9g\nnear = %.9g\nfar = %.9g\n\n",
      c.camera.up.x, c.camera.up.y, c.camera.up.z, c.camera.vertical_fov_deg,
      c.camera.aspect, c.camera.near, c.camera.far);
  put("[force]\nk_repel = %.9g\nrepel_radius = %.9g\nk_spring = %.9g\n",
      c.force.k_repel, c.force.repel_radius, c.force.k_spring);
  put("damping = %.9g\ngain = %.9g\n\n", c.force.damping, c.force.gain);
  put("[encoder]\nref_speed = %.9g\nrel_scale = %.9g\n",
      c.encoder.ref_speed, c.encoder.rel_scale);
  return out.str();
}

void save_config(const RunConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write config snapshot '" + path + "'");
  out << to_toml(cfg);
}

}  // namespace dynlabel::cli
