#include "dynlabel/baselines.hpp"

#include <cmath>

namespace dynlabel::baseline {

sim::Action none_controller(const sim::WorldState& world, size_t label_index) {
  (void)world;
  (void)label_index;
  return sim::Action{{0.0, 0.0}};
}

namespace {

// x-z footprint of a world direction, normalized; used to carry screen-space
// pushes back onto the label plane.
Vec2 plane_dir(const Vec3& v, const Vec2& fallback) {
  Vec2 d{v.x, v.z};
  double n = d.norm();
  if (n < 1e-9) return fallback;
  return d * (1.0 / n);
}

}  // namespace

sim::Action force_controller(const sim::WorldState& world,
                             const sim::SimConfig& config,
                             const geom::Projector& proj, size_t label_index,
                             const ForceConfig& fc) {
  const sim::LabelState& label = world.labels[label_index];
  if (!label.active) return sim::Action{{0.0, 0.0}};

  double fu = 0.0, fv = 0.0;
  geom::Projected mine = proj.project(label.world_pos);
  if (!mine.behind) {
    auto add_repulsion = [&](const Vec3& p) {
      geom::Projected other = proj.project(p);
      if (other.behind) return;
      double du = mine.u - other.u;
      double dv = mine.v - other.v;
      double d = std::sqrt(du * du + dv * dv);
      if (d >= fc.repel_radius) return;
      d = std::max(d, 1e-4);
      double f = fc.k_repel * (1.0 / d - 1.0 / fc.repel_radius);
      fu += f * du / d;
      fv += f * dv / d;
    };
    for (size_t j = 0; j < world.objects.size(); ++j)
      if (world.objects[j].active && j != label.target_index)
        add_repulsion(world.objects[j].pos);
    for (size_t j = 0; j < world.labels.size(); ++j)
      if (j != label_index && world.labels[j].active)
        add_repulsion(world.labels[j].world_pos);
  }

  Vec2 e_u = plane_dir(proj.right(), Vec2{1.0, 0.0});
  Vec2 e_v = plane_dir(proj.up(), plane_dir(proj.forward(), Vec2{0.0, 1.0}));

  Vec2 a = (e_u * fu + e_v * fv) * fc.gain;
  a += label.offset * -fc.k_spring;
  a += label.offset_vel * -fc.damping;
  a.x = clamp(a.x, -config.max_acc, config.max_acc);
  a.y = clamp(a.y, -config.max_acc, config.max_acc);
  return sim::Action{a};
}

}  // namespace dynlabel::baseline
