#include "dynlabel/sim.hpp"

#include <algorithm>
#include <cstring>

#include "dynlabel/errors.hpp"

namespace dynlabel::sim {

World::World(const data::Scene& scene, const SimConfig& config,
             const geom::CameraSpec& camera,
             const std::vector<std::string>& labeled_ids)
    : scene_(&scene), config_(config), camera_(camera), projector_(camera) {
  state_.objects.reserve(scene.tracks.size());
  for (const auto& track : scene.tracks) {
    ObjectState obj;
    obj.id = track.id;
    state_.objects.push_back(obj);
  }
  for (size_t i = 0; i < state_.objects.size(); ++i) refresh_object(i, 0);

  for (const auto& id : labeled_ids) {
    size_t target = state_.objects.size();
    for (size_t i = 0; i < state_.objects.size(); ++i)
      if (state_.objects[i].id == id) target = i;
    if (target == state_.objects.size())
      throw UsageError("init_world: no track with id '" + id + "'");
    LabelState label;
    label.target_index = target;
    label.target_id = id;
    state_.labels.push_back(label);
  }
  for (size_t i = 0; i < state_.labels.size(); ++i) refresh_label(i);
}

void World::refresh_object(size_t i, int step) {
  ObjectState& obj = state_.objects[i];
  const data::ResampledTrack& track = scene_->tracks[i];
  obj.active = track.covers(step);
  if (!obj.active) {
    // Frozen at the nearest covered pose (entry pose before entry, exit pose
    // after exit); excluded from encoding, reward, and metrics.
    int held = std::max(track.entry_step, std::min(step, track.exit_step));
    Vec2 p = track.pos_at(held);
    obj.pos = Vec3{p.x, config_.object_extent.y, p.y};
    obj.vel = Vec3{};
    return;
  }
  Vec2 p = track.pos_at(step);
  Vec2 v = track.vel_at(step);
  obj.pos = Vec3{p.x, config_.object_extent.y, p.y};
  obj.vel = Vec3{v.x, 0.0, v.y};
  Vec3 planar{v.x, 0.0, v.y};
  if (planar.norm() > 1e-9) obj.normal = planar.normalized();
}

void World::refresh_label(size_t i) {
  LabelState& label = state_.labels[i];
  const ObjectState& obj = state_.objects[label.target_index];
  label.active = obj.active;
  if (!label.active) return;
  double top = obj.pos.y + config_.object_extent.y;
  label.world_pos =
      Vec3{obj.pos.x + label.offset.x, top + config_.plane_height,
           obj.pos.z + label.offset.y};
  label.world_vel = obj.vel + Vec3{label.offset_vel.x, 0.0, label.offset_vel.y};
  label.anchor = Vec3{obj.pos.x, top, obj.pos.z};
  label.normal = (camera_.eye - label.world_pos).normalized();
}

void World::step(const std::vector<Action>& actions,
                 const std::vector<bool>* pinned) {
  if (finished()) throw UsageError("step: episode already finished");
  if (actions.size() != state_.labels.size())
    throw UsageError("step: need one action per label");

  double half = config_.plane_side / 2.0;
  for (size_t i = 0; i < state_.labels.size(); ++i) {
    LabelState& label = state_.labels[i];
    if (!label.active) continue;
    if (pinned && (*pinned)[i]) {
      label.offset = Vec2{0.0, 0.0};
      label.offset_vel = Vec2{0.0, 0.0};
      continue;
    }
    Vec2 a{clamp(actions[i].a.x, -config_.max_acc, config_.max_acc),
           clamp(actions[i].a.y, -config_.max_acc, config_.max_acc)};
    label.offset_vel += a * config_.dt;
    label.offset += label.offset_vel * config_.dt;
    if (label.offset.x > half) {
      label.offset.x = half;
      label.offset_vel.x = 0.0;
    } else if (label.offset.x < -half) {
      label.offset.x = -half;
      label.offset_vel.x = 0.0;
    }
    if (label.offset.y > half) {
      label.offset.y = half;
      label.offset_vel.y = 0.0;
    } else if (label.offset.y < -half) {
      label.offset.y = -half;
      label.offset_vel.y = 0.0;
    }
  }

  state_.step += 1;
  state_.time = state_.step * config_.dt;
  for (size_t i = 0; i < state_.objects.size(); ++i)
    refresh_object(i, state_.step);
  for (size_t i = 0; i < state_.labels.size(); ++i) refresh_label(i);
}

void World::place_label(size_t label_index, const Vec2& offset) {
  LabelState& label = state_.labels.at(label_index);
  double half = config_.plane_side / 2.0;
  label.offset =
      Vec2{clamp(offset.x, -half, half), clamp(offset.y, -half, half)};
  refresh_label(label_index);
}

uint64_t World::state_hash() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* data, size_t n) {
    const unsigned char* b = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 0x100000001b3ULL;
    }
  };
  mix(&state_.step, sizeof(state_.step));
  mix(&state_.time, sizeof(state_.time));
  for (const auto& o : state_.objects) {
    mix(o.id.data(), o.id.size());
    mix(&o.pos, sizeof(o.pos));
    mix(&o.vel, sizeof(o.vel));
    mix(&o.normal, sizeof(o.normal));
    mix(&o.active, sizeof(o.active));
  }
  for (const auto& l : state_.labels) {
    mix(&l.target_index, sizeof(l.target_index));
    mix(&l.offset, sizeof(l.offset));
    mix(&l.offset_vel, sizeof(l.offset_vel));
    mix(&l.world_pos, sizeof(l.world_pos));
    mix(&l.world_vel, sizeof(l.world_vel));
    mix(&l.normal, sizeof(l.normal));
    mix(&l.anchor, sizeof(l.anchor));
    mix(&l.active, sizeof(l.active));
  }
  return h;
}

}  // namespace dynlabel::sim
