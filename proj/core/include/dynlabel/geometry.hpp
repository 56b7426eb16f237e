#pragma once

#include <vector>

#include "dynlabel/camera.hpp"
#include "dynlabel/sim.hpp"

namespace dynlabel::geom {

// Area threshold below which a projected-rect overlap does not count as
// occlusion, in normalized screen-area units. Suppresses floating-point
// grazing contacts.
constexpr double kOcclusionAreaEps = 1e-6;

// Axis-aligned bound of an entity's projected corners. `depth` is the
// camera-eye distance of the entity center; `valid` is false when any corner
// sits behind the camera (the entity is then excluded from all counts).
struct ScreenRect {
  double u_min = 0.0, u_max = 0.0;
  double v_min = 0.0, v_max = 0.0;
  double depth = 0.0;
  bool valid = false;
};

struct Segment2 {
  Vec2 a, b;
  bool valid = false;
};

double rect_overlap_area(const ScreenRect& a, const ScreenRect& b);

// True iff the rects overlap by more than kOcclusionAreaEps and a is nearer.
bool occludes(const ScreenRect& a, const ScreenRect& b);

// Proper crossing in the open interior of both segments; shared endpoints and
// collinear touching do not count. Orientation-predicate implementation.
bool segments_intersect(const Segment2& s1, const Segment2& s2);

// Projected footprint of the billboard label (4 corners).
ScreenRect project_label(const sim::LabelState& label,
                         const sim::SimConfig& config, const Projector& proj);

// Projected footprint of the object's cube (8 corners).
ScreenRect project_object(const sim::ObjectState& object,
                          const sim::SimConfig& config, const Projector& proj);

// 2D projection of the leader line: label bottom center to object top center.
Segment2 leader_segment(const sim::LabelState& label,
                        const sim::SimConfig& config, const Projector& proj);

struct StepCounts {
  int n_occ = 0;
  int n_int = 0;
};

// Entities (objects and other labels, including the label's own target)
// occluded by label i.
int count_occlusions(const sim::WorldState& world, const sim::SimConfig& config,
                     const Projector& proj, size_t label_index);

// Other labels' leader segments properly crossed by label i's leader segment.
int count_intersections(const sim::WorldState& world,
                        const sim::SimConfig& config, const Projector& proj,
                        size_t label_index);

// Both counts for every active label, sharing one projection pass.
std::vector<StepCounts> measure_step(const sim::WorldState& world,
                                     const sim::SimConfig& config,
                                     const Projector& proj);

// Billboard frame for a camera-facing label (right and up in world space).
void label_axes(const Vec3& normal, const Vec3& camera_up, Vec3& right,
                Vec3& up);

}  // namespace dynlabel::geom
