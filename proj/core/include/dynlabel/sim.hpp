#pragma once

#include <string>
#include <vector>

#include "dynlabel/camera.hpp"
#include "dynlabel/math.hpp"
#include "dynlabel/trajectory.hpp"

namespace dynlabel::sim {

struct SimConfig {
  double dt = 0.1;          // decision interval, seconds
  double max_acc = 3.0;     // per-axis acceleration bound, m/s^2
  double plane_side = 3.0;  // S: label plane is [-S/2, S/2]^2 in local x-z
  double plane_height = 1.0;  // h: plane sits this far above the object top
  double label_width = 0.8;
  double label_height = 0.5;
  Vec3 object_extent{0.3, 1.0, 0.3};  // cube half-extents
};

// Raw requested acceleration; the physics clamp happens inside step() while
// the unclamped value feeds the bound penalty.
struct Action {
  Vec2 a;  // (a_x, a_z)
};

struct ObjectState {
  std::string id;
  Vec3 pos;                // cube center, world space
  Vec3 vel;                // vel.y == 0
  Vec3 normal{0.0, 0.0, 1.0};  // facing, derived from motion
  bool active = true;
};

struct LabelState {
  size_t target_index = 0;
  std::string target_id;
  Vec2 offset;      // local plane coordinates, each axis in [-S/2, S/2]
  Vec2 offset_vel;  // m/s in plane coordinates
  Vec3 world_pos;   // derived: object pos + (offset.x, top + h, offset.y)
  Vec3 world_vel;   // derived: object vel + (offset_vel.x, 0, offset_vel.y)
  Vec3 normal;      // unit, points at the camera eye
  Vec3 anchor;      // leader-line endpoint on the object (top center)
  bool active = true;
};

struct WorldState {
  int step = 0;
  double time = 0.0;
  std::vector<ObjectState> objects;
  std::vector<LabelState> labels;
};

// The action that keeps a label at its home pose on top of the object.
inline Vec2 default_home(const LabelState&) { return {0.0, 0.0}; }

// Replays a scene while integrating label offsets from acceleration actions
// (semi-implicit Euler: velocity first, then position). One World is owned by
// one rollout; distinct instances are independent.
class World {
 public:
  World(const data::Scene& scene, const SimConfig& config,
        const geom::CameraSpec& camera,
        const std::vector<std::string>& labeled_ids);

  const WorldState& state() const { return state_; }
  const SimConfig& config() const { return config_; }
  const geom::CameraSpec& camera() const { return camera_; }
  const geom::Projector& projector() const { return projector_; }
  const data::Scene& scene() const { return *scene_; }

  bool finished() const { return state_.step >= scene_->num_steps; }

  // Advances one decision step. `actions` must hold one entry per label;
  // labels with `pinned` set ignore dynamics and stay at the home offset.
  void step(const std::vector<Action>& actions,
            const std::vector<bool>* pinned = nullptr);

  // Recomputes a label's derived pose for a hypothetical plane offset.
  // Used by the value-heatmap probe on a copy of the world.
  void place_label(size_t label_index, const Vec2& offset);

  // FNV-1a over the raw state; used to prove probes have no side effects.
  uint64_t state_hash() const;

 private:
  void refresh_object(size_t i, int step);
  void refresh_label(size_t i);

  const data::Scene* scene_;
  SimConfig config_;
  geom::CameraSpec camera_;
  geom::Projector projector_;
  WorldState state_;
};

}  // namespace dynlabel::sim
