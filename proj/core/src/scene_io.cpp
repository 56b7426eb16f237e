#include "dynlabel/scene_io.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "dynlabel/errors.hpp"

namespace dynlabel::data {

using nlohmann::json;

namespace {

json vec2_list(const std::vector<Vec2>& v) {
  json arr = json::array();
  for (const auto& p : v) arr.push_back({p.x, p.y});
  return arr;
}

std::vector<Vec2> vec2_list_from(const json& arr) {
  std::vector<Vec2> out;
  out.reserve(arr.size());
  for (const auto& p : arr) out.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return out;
}

}  // namespace

void save_scene(const Scene& scene, const std::string& path) {
  json tracks = json::array();
  for (const auto& t : scene.tracks) {
    tracks.push_back({{"id", t.id},
                      {"entry_step", t.entry_step},
                      {"exit_step", t.exit_step},
                      {"pos", vec2_list(t.pos)},
                      {"vel", vec2_list(t.vel)}});
  }
  json doc = {{"scene_id", scene.scene_id},
              {"duration", scene.duration},
              {"dt", scene.dt},
              {"num_steps", scene.num_steps},
              {"tracks", tracks}};
  std::ofstream out(path);
  if (!out) throw DataError("cannot write scene file '" + path + "'");
  out << doc.dump(2) << "\n";
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open scene file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw DataError("scene file '" + path + "': " + e.what());
  }
  try {
    Scene scene;
    scene.scene_id = doc.at("scene_id").get<std::string>();
    scene.duration = doc.at("duration").get<double>();
    scene.dt = doc.at("dt").get<double>();
    scene.num_steps = doc.at("num_steps").get<int>();
    for (const auto& t : doc.at("tracks")) {
      ResampledTrack track;
      track.id = t.at("id").get<std::string>();
      track.entry_step = t.at("entry_step").get<int>();
      track.exit_step = t.at("exit_step").get<int>();
      track.pos = vec2_list_from(t.at("pos"));
      track.vel = vec2_list_from(t.at("vel"));
      if (track.pos.size() !=
          static_cast<size_t>(track.exit_step - track.entry_step + 1))
        throw DataError("scene file '" + path + "': track '" + track.id +
                        "' has inconsistent step range");
      if (track.vel.size() != track.pos.size())
        throw DataError("scene file '" + path + "': track '" + track.id +
                        "' velocity count mismatch");
      scene.tracks.push_back(std::move(track));
    }
    return scene;
  } catch (const json::exception& e) {
    throw DataError("scene file '" + path + "': " + e.what());
  }
}

void write_manifest(const std::vector<ManifestEntry>& entries,
                    const std::string& path) {
  json scenes = json::array();
  double mean_max_objects = 0.0, mean_speed = 0.0, mean_dist = 0.0;
  for (const auto& e : entries) {
    scenes.push_back({{"id", e.scene_id},
                      {"file", e.file},
                      {"steps", e.steps},
                      {"tracks", e.track_ids},
                      {"max_concurrent", e.stats.max_concurrent},
                      {"mean_speed", e.stats.mean_speed},
                      {"mean_moving_distance", e.stats.mean_moving_distance}});
    mean_max_objects += e.stats.max_concurrent;
    mean_speed += e.stats.mean_speed;
    mean_dist += e.stats.mean_moving_distance;
  }
  json doc = {{"count", entries.size()}, {"scenes", scenes}};
  if (!entries.empty()) {
    double n = static_cast<double>(entries.size());
    doc["avg_max_objects"] = mean_max_objects / n;
    doc["avg_speed"] = mean_speed / n;
    doc["avg_moving_distance"] = mean_dist / n;
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write manifest '" + path + "'");
  out << doc.dump(2) << "\n";
}

std::vector<std::string> manifest_scene_files(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw DataError("cannot open manifest '" + manifest_path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw DataError("manifest '" + manifest_path + "': " + e.what());
  }
  std::vector<std::string> files;
  std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();
  for (const auto& s : doc.at("scenes"))
    files.push_back((base / s.at("file").get<std::string>()).string());
  return files;
}

}  // namespace dynlabel::data
