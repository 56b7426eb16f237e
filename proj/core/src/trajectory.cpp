#include "dynlabel/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "dynlabel/errors.hpp"
#include "dynlabel/rng.hpp"

namespace dynlabel::data {

namespace {

constexpr double kStepEps = 1e-9;

int step_floor(double x) { return static_cast<int>(std::floor(x + kStepEps)); }
int step_ceil(double x) { return static_cast<int>(std::ceil(x - kStepEps)); }

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  size_t b = s.find_last_not_of(" \t");
  return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

double parse_double(const std::string& s, int line_no, const char* what) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    if (!std::isfinite(v))
      throw DataError("line " + std::to_string(line_no) + ": non-finite " + what);
    return v;
  } catch (const DataError&) {
    throw;
  } catch (const std::exception&) {
    throw DataError("line " + std::to_string(line_no) + ": cannot parse " +
                    what + " from '" + s + "'");
  }
}

}  // namespace

const ResampledTrack* Scene::find_track(const std::string& id) const {
  for (const auto& t : tracks)
    if (t.id == id) return &t;
  return nullptr;
}

std::vector<RawTrack> ingest_csv(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) return {};  // empty stream: zero tracks
  ++line_no;
  {
    auto fields = split_fields(line);
    for (auto& f : fields) f = trim(f);
    if (fields != std::vector<std::string>{"t", "id", "x", "z"})
      throw DataError("line 1: expected header 't,id,x,z'");
  }

  std::map<std::string, std::vector<TrajectorySample>> by_id;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != 4)
      throw DataError("line " + std::to_string(line_no) + ": expected 4 fields, got " +
                      std::to_string(fields.size()));
    double t = parse_double(trim(fields[0]), line_no, "t");
    if (t < 0.0)
      throw DataError("line " + std::to_string(line_no) + ": negative timestamp");
    std::string id = trim(fields[1]);
    if (id.empty())
      throw DataError("line " + std::to_string(line_no) + ": empty id");
    double x = parse_double(trim(fields[2]), line_no, "x");
    double z = parse_double(trim(fields[3]), line_no, "z");
    by_id[id].push_back({t, {x, z}});
  }

  std::vector<RawTrack> tracks;
  tracks.reserve(by_id.size());
  for (auto& [id, samples] : by_id) {
    std::stable_sort(samples.begin(), samples.end(),
                     [](const TrajectorySample& a, const TrajectorySample& b) {
                       return a.t < b.t;
                     });
    for (size_t i = 1; i < samples.size(); ++i)
      if (samples[i].t == samples[i - 1].t)
        throw DataError("duplicate timestamp " + std::to_string(samples[i].t) +
                        " for id '" + id + "'");
    if (samples.size() < 2)
      throw DataError("track '" + id + "' has fewer than 2 samples");
    tracks.push_back({id, std::move(samples)});
  }
  return tracks;
}

void emit_csv(const std::vector<RawTrack>& tracks, std::ostream& out) {
  out << "t,id,x,z\n";
  char buf[96];
  for (const auto& track : tracks)
    for (const auto& s : track.samples) {
      std::snprintf(buf, sizeof(buf), "%.17g,%s,%.17g,%.17g\n", s.t,
                    track.id.c_str(), s.pos.x, s.pos.y);
      out << buf;
    }
}

ResampledTrack resample(const RawTrack& track, double dt, double t_start,
                        int num_steps) {
  if (dt <= 0.0) throw DataError("resample: dt must be positive");
  if (track.samples.size() < 2)
    throw DataError("resample: track '" + track.id + "' has fewer than 2 samples");
  double t_end = t_start + num_steps * dt;
  if (t_start < track.t_first() - kStepEps || t_end > track.t_last() + kStepEps)
    throw DataError("resample: query window [" + std::to_string(t_start) + ", " +
                    std::to_string(t_end) + "] outside track '" + track.id +
                    "' range");

  ResampledTrack out;
  out.id = track.id;
  out.entry_step = 0;
  out.exit_step = num_steps;
  out.pos.reserve(static_cast<size_t>(num_steps) + 1);

  const auto& s = track.samples;
  size_t seg = 0;  // current segment [seg, seg+1]
  for (int k = 0; k <= num_steps; ++k) {
    double t = t_start + k * dt;
    while (seg + 2 < s.size() && s[seg + 1].t <= t) ++seg;
    if (t == s[seg].t) {
      out.pos.push_back(s[seg].pos);
      continue;
    }
    if (t == s[seg + 1].t) {
      out.pos.push_back(s[seg + 1].pos);
      continue;
    }
    double alpha = (t - s[seg].t) / (s[seg + 1].t - s[seg].t);
    out.pos.push_back(s[seg].pos + (s[seg + 1].pos - s[seg].pos) * alpha);
  }

  out.vel.resize(out.pos.size());
  for (size_t k = 1; k < out.pos.size(); ++k)
    out.vel[k] = (out.pos[k] - out.pos[k - 1]) * (1.0 / dt);
  out.vel[0] = out.pos.size() > 1 ? out.vel[1] : Vec2{};
  return out;
}

std::vector<Scene> split_scenes(const std::vector<RawTrack>& tracks,
                                double scene_len, double dt,
                                const SplitOptions& opts) {
  if (scene_len <= 0.0) throw DataError("split_scenes: scene_len must be positive");
  if (dt <= 0.0) throw DataError("split_scenes: dt must be positive");
  double steps_f = scene_len / dt;
  int num_steps = step_floor(steps_f);
  if (std::abs(steps_f - num_steps) > 1e-6)
    throw DataError("split_scenes: dt must divide scene_len");
  if (tracks.empty()) return {};

  double t_min = tracks.front().t_first();
  double t_max = tracks.front().t_last();
  for (const auto& tr : tracks) {
    t_min = std::min(t_min, tr.t_first());
    t_max = std::max(t_max, tr.t_last());
  }
  int num_windows = step_floor((t_max - t_min) / scene_len);

  std::vector<Scene> scenes;
  for (int w = 0; w < num_windows; ++w) {
    if (std::find(opts.excluded_windows.begin(), opts.excluded_windows.end(), w) !=
        opts.excluded_windows.end())
      continue;
    double w_start = t_min + w * scene_len;

    Scene scene;
    scene.duration = scene_len;
    scene.dt = dt;
    scene.num_steps = num_steps;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s_%03d", opts.id_prefix.c_str(), w);
    scene.scene_id = buf;

    bool required_ok = true;
    for (const auto& tr : tracks) {
      int entry = std::max(0, step_ceil((tr.t_first() - w_start) / dt));
      int exit = std::min(num_steps, step_floor((tr.t_last() - w_start) / dt));
      bool full = entry == 0 && exit == num_steps;
      bool required =
          std::find(opts.required_ids.begin(), opts.required_ids.end(), tr.id) !=
          opts.required_ids.end();
      if (required && !full) {
        required_ok = false;
        break;
      }
      if (exit - entry < 1) continue;  // needs at least two steps in-window
      ResampledTrack rt =
          resample(tr, dt, w_start + entry * dt, exit - entry);
      rt.entry_step = entry;
      rt.exit_step = exit;
      scene.tracks.push_back(std::move(rt));
    }
    if (!required_ok || scene.tracks.empty()) continue;
    scenes.push_back(std::move(scene));
  }
  return scenes;
}

DatasetSplit train_test_split(const std::vector<Scene>& scenes, double ratio,
                              uint64_t seed) {
  if (scenes.empty()) throw DataError("train_test_split: no scenes");
  if (ratio <= 0.0 || ratio >= 1.0)
    throw DataError("train_test_split: ratio must be in (0, 1)");

  std::vector<size_t> order(scenes.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  size_t n_train = static_cast<size_t>(std::floor(ratio * scenes.size()));
  n_train = std::max<size_t>(1, std::min(n_train, scenes.size()));

  DatasetSplit split;
  split.seed = seed;
  for (size_t i = 0; i < order.size(); ++i)
    (i < n_train ? split.train : split.test).push_back(scenes[order[i]]);
  return split;
}

SceneStats scene_stats(const Scene& scene) {
  SceneStats st;
  for (int k = 0; k <= scene.num_steps; ++k) {
    int active = 0;
    for (const auto& tr : scene.tracks)
      if (tr.covers(k)) ++active;
    st.max_concurrent = std::max(st.max_concurrent, active);
  }
  if (scene.tracks.empty()) return st;
  for (const auto& tr : scene.tracks) {
    double speed_sum = 0.0;
    double dist = 0.0;
    for (size_t k = 0; k < tr.vel.size(); ++k) speed_sum += tr.vel[k].norm();
    for (size_t k = 1; k < tr.pos.size(); ++k)
      dist += (tr.pos[k] - tr.pos[k - 1]).norm();
    st.mean_speed += speed_sum / static_cast<double>(tr.vel.size());
    st.mean_moving_distance += dist;
  }
  st.mean_speed /= static_cast<double>(scene.tracks.size());
  st.mean_moving_distance /= static_cast<double>(scene.tracks.size());
  return st;
}

}  // namespace dynlabel::data
