#include "dynlabel/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dynlabel::geom {

namespace {

ScreenRect rect_from_corners(const Vec3* corners, size_t n, const Vec3& center,
                             const Projector& proj) {
  ScreenRect rect;
  rect.u_min = rect.v_min = std::numeric_limits<double>::infinity();
  rect.u_max = rect.v_max = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n; ++i) {
    Projected p = proj.project(corners[i]);
    if (p.behind) return {};  // valid = false
    rect.u_min = std::min(rect.u_min, p.u);
    rect.u_max = std::max(rect.u_max, p.u);
    rect.v_min = std::min(rect.v_min, p.v);
    rect.v_max = std::max(rect.v_max, p.v);
  }
  rect.depth = (center - proj.camera().eye).norm();
  rect.valid = true;
  return rect;
}

double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

}  // namespace

void label_axes(const Vec3& normal, const Vec3& camera_up, Vec3& right,
                Vec3& up) {
  right = camera_up.cross(normal);
  if (right.norm() < 1e-12) right = Vec3{1.0, 0.0, 0.0};
  right = right.normalized();
  up = normal.cross(right);
}

double rect_overlap_area(const ScreenRect& a, const ScreenRect& b) {
  double du = std::min(a.u_max, b.u_max) - std::max(a.u_min, b.u_min);
  double dv = std::min(a.v_max, b.v_max) - std::max(a.v_min, b.v_min);
  if (du <= 0.0 || dv <= 0.0) return 0.0;
  return du * dv;
}

bool occludes(const ScreenRect& a, const ScreenRect& b) {
  if (!a.valid || !b.valid) return false;
  return rect_overlap_area(a, b) > kOcclusionAreaEps && a.depth < b.depth;
}

bool segments_intersect(const Segment2& s1, const Segment2& s2) {
  double d1 = orient(s2.a, s2.b, s1.a);
  double d2 = orient(s2.a, s2.b, s1.b);
  double d3 = orient(s1.a, s1.b, s2.a);
  double d4 = orient(s1.a, s1.b, s2.b);
  return ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) &&
         ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0));
}

ScreenRect project_label(const sim::LabelState& label,
                         const sim::SimConfig& config, const Projector& proj) {
  Vec3 right, up;
  label_axes(label.normal, proj.camera().up, right, up);
  Vec3 du = right * (config.label_width / 2.0);
  Vec3 dv = up * (config.label_height / 2.0);
  Vec3 corners[4] = {label.world_pos + du + dv, label.world_pos + du - dv,
                     label.world_pos - du + dv, label.world_pos - du - dv};
  return rect_from_corners(corners, 4, label.world_pos, proj);
}

ScreenRect project_object(const sim::ObjectState& object,
                          const sim::SimConfig& config, const Projector& proj) {
  const Vec3& e = config.object_extent;
  Vec3 corners[8];
  int n = 0;
  for (int sx : {-1, 1})
    for (int sy : {-1, 1})
      for (int sz : {-1, 1})
        corners[n++] = object.pos + Vec3{sx * e.x, sy * e.y, sz * e.z};
  return rect_from_corners(corners, 8, object.pos, proj);
}

Segment2 leader_segment(const sim::LabelState& label,
                        const sim::SimConfig& config, const Projector& proj) {
  Vec3 right, up;
  label_axes(label.normal, proj.camera().up, right, up);
  Vec3 bottom = label.world_pos - up * (config.label_height / 2.0);
  Projected a = proj.project(bottom);
  Projected b = proj.project(label.anchor);
  if (a.behind || b.behind) return {};
  return {{a.u, a.v}, {b.u, b.v}, true};
}

int count_occlusions(const sim::WorldState& world, const sim::SimConfig& config,
                     const Projector& proj, size_t label_index) {
  const sim::LabelState& label = world.labels[label_index];
  if (!label.active) return 0;
  ScreenRect mine = project_label(label, config, proj);
  if (!mine.valid) return 0;
  int n = 0;
  for (const auto& obj : world.objects)
    if (obj.active && occludes(mine, project_object(obj, config, proj))) ++n;
  for (size_t j = 0; j < world.labels.size(); ++j) {
    if (j == label_index || !world.labels[j].active) continue;
    if (occludes(mine, project_label(world.labels[j], config, proj))) ++n;
  }
  return n;
}

int count_intersections(const sim::WorldState& world,
                        const sim::SimConfig& config, const Projector& proj,
                        size_t label_index) {
  const sim::LabelState& label = world.labels[label_index];
  if (!label.active) return 0;
  Segment2 mine = leader_segment(label, config, proj);
  if (!mine.valid) return 0;
  int n = 0;
  for (size_t j = 0; j < world.labels.size(); ++j) {
    if (j == label_index || !world.labels[j].active) continue;
    Segment2 other = leader_segment(world.labels[j], config, proj);
    if (other.valid && segments_intersect(mine, other)) ++n;
  }
  return n;
}

std::vector<StepCounts> measure_step(const sim::WorldState& world,
                                     const sim::SimConfig& config,
                                     const Projector& proj) {
  std::vector<ScreenRect> object_rects(world.objects.size());
  for (size_t i = 0; i < world.objects.size(); ++i)
    if (world.objects[i].active)
      object_rects[i] = project_object(world.objects[i], config, proj);

  std::vector<ScreenRect> label_rects(world.labels.size());
  std::vector<Segment2> leaders(world.labels.size());
  for (size_t i = 0; i < world.labels.size(); ++i)
    if (world.labels[i].active) {
      label_rects[i] = project_label(world.labels[i], config, proj);
      leaders[i] = leader_segment(world.labels[i], config, proj);
    }

  std::vector<StepCounts> counts(world.labels.size());
  for (size_t i = 0; i < world.labels.size(); ++i) {
    if (!world.labels[i].active) continue;
    for (size_t j = 0; j < world.objects.size(); ++j)
      if (world.objects[j].active && occludes(label_rects[i], object_rects[j]))
        ++counts[i].n_occ;
    for (size_t j = 0; j < world.labels.size(); ++j) {
      if (j == i || !world.labels[j].active) continue;
      if (occludes(label_rects[i], label_rects[j])) ++counts[i].n_occ;
      if (leaders[i].valid && leaders[j].valid &&
          segments_intersect(leaders[i], leaders[j]))
        ++counts[i].n_int;
    }
  }
  return counts;
}

}  // namespace dynlabel::geom
