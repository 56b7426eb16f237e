#include "dynlabel/camera.hpp"

#include <cmath>

#include "dynlabel/errors.hpp"

namespace dynlabel::geom {

namespace {

Mat4 look_at(const Vec3& eye, const Vec3& target, const Vec3& up) {
  Vec3 f = (target - eye).normalized();
  Vec3 s = f.cross(up);
  if (s.norm() < 1e-12)
    throw UsageError("camera: up vector parallel to view direction");
  s = s.normalized();
  Vec3 u = s.cross(f);

  Mat4 m = Mat4::identity();
  m.m[0] = s.x;  m.m[1] = s.y;  m.m[2] = s.z;  m.m[3] = -s.dot(eye);
  m.m[4] = u.x;  m.m[5] = u.y;  m.m[6] = u.z;  m.m[7] = -u.dot(eye);
  m.m[8] = -f.x; m.m[9] = -f.y; m.m[10] = -f.z; m.m[11] = f.dot(eye);
  return m;
}

Mat4 perspective(double fov_deg, double aspect, double near, double far) {
  double t = 1.0 / std::tan(fov_deg * M_PI / 360.0);
  Mat4 m;
  m.m[0] = t / aspect;
  m.m[5] = t;
  m.m[10] = (far + near) / (near - far);
  m.m[11] = 2.0 * far * near / (near - far);
  m.m[14] = -1.0;
  return m;
}

}  // namespace

ProjMatrix build_projection(const CameraSpec& camera) {
  if (camera.near <= 0.0 || camera.far <= camera.near)
    throw UsageError("camera: requires 0 < near < far");
  if ((camera.target - camera.eye).norm() < 1e-12)
    throw UsageError("camera: eye coincides with target");
  Mat4 view = look_at(camera.eye, camera.target, camera.up);
  Mat4 proj = perspective(camera.vertical_fov_deg, camera.aspect, camera.near,
                          camera.far);
  return {proj * view};
}

Projector::Projector(const CameraSpec& camera)
    : camera_(camera), view_proj_(build_projection(camera).m) {
  forward_ = (camera.target - camera.eye).normalized();
  right_ = forward_.cross(camera.up).normalized();
  up_ = right_.cross(forward_);
}

Projected Projector::project(const Vec3& p) const {
  Vec4 clip = view_proj_ * Vec4{p.x, p.y, p.z, 1.0};
  Projected out;
  out.z_view = clip.w;  // for this projection, w = -z_view = distance along axis
  if (clip.w <= camera_.near * (1.0 - 1e-12)) {
    out.behind = true;
    return out;
  }
  out.u = (clip.x / clip.w + 1.0) * 0.5;
  out.v = (clip.y / clip.w + 1.0) * 0.5;
  return out;
}

RayPoint Projector::ray(const Vec3& p) const {
  Projected pr = project(p);
  RayPoint out;
  out.z_cam = (p - camera_.eye).norm();
  if (pr.behind) {
    out.behind = true;
    return out;
  }
  out.u = pr.u;
  out.v = pr.v;
  if (out.u < 0.0 || out.u > 1.0 || out.v < 0.0 || out.v > 1.0) {
    out.clamped = true;
    out.u = clamp(out.u, 0.0, 1.0);
    out.v = clamp(out.v, 0.0, 1.0);
  }
  return out;
}

}  // namespace dynlabel::geom
