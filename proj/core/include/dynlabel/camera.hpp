#pragma once

#include "dynlabel/math.hpp"

namespace dynlabel::geom {

struct CameraSpec {
  Vec3 eye{0.0, 6.0, 14.0};
  Vec3 target{0.0, 1.0, 0.0};
  Vec3 up{0.0, 1.0, 0.0};
  double vertical_fov_deg = 60.0;
  double aspect = 16.0 / 9.0;
  double near = 0.1;
  double far = 100.0;
};

// Combined look-at view + perspective projection (right-handed, normalized
// device coordinates mapped to u,v in [0,1] with origin bottom-left).
struct ProjMatrix {
  Mat4 m;
};

ProjMatrix build_projection(const CameraSpec& camera);

// Screen position of a world point. u,v are unclamped (off-screen points land
// outside [0,1]); `behind` is set for points at or behind the near plane,
// where u,v are meaningless.
struct Projected {
  double u = 0.0;
  double v = 0.0;
  double z_view = 0.0;  // view-space depth along the optical axis (positive in front)
  bool behind = false;
};

// Ray-space encoding of a point: screen coordinates plus Euclidean distance
// from the camera eye. u,v are clamped into [0,1] with `clamped` flagged;
// `behind` marks unrepresentable points.
struct RayPoint {
  double u = 0.5;
  double v = 0.5;
  double z_cam = 0.0;
  bool behind = false;
  bool clamped = false;
};

// Precomputed projector for a camera; cheap to copy, pure to use.
class Projector {
 public:
  explicit Projector(const CameraSpec& camera);

  Projected project(const Vec3& p) const;
  RayPoint ray(const Vec3& p) const;

  const CameraSpec& camera() const { return camera_; }
  // Unit basis of screen directions in world space (+u, +v, forward).
  const Vec3& right() const { return right_; }
  const Vec3& up() const { return up_; }
  const Vec3& forward() const { return forward_; }

 private:
  CameraSpec camera_;
  Mat4 view_proj_;
  Vec3 right_, up_, forward_;
};

inline RayPoint to_ray_space(const Vec3& p, const CameraSpec& camera) {
  return Projector(camera).ray(p);
}

}  // namespace dynlabel::geom
