#include "dynlabel/encoder.hpp"

namespace dynlabel::enc {

namespace {

struct Ray3 {
  double u, v, z;
  bool behind;
};

Ray3 scaled_ray(const Vec3& p, const geom::Projector& proj) {
  geom::RayPoint r = proj.ray(p);
  return {r.u, r.v, r.z_cam / proj.camera().far, r.behind};
}

void put3(float* dst, double a, double b, double c) {
  dst[0] = static_cast<float>(a);
  dst[1] = static_cast<float>(b);
  dst[2] = static_cast<float>(c);
}

}  // namespace

SelfFeature encode_self(const sim::WorldState& world,
                        const sim::SimConfig& /*config*/,
                        const geom::Projector& proj,
                        const EncoderConfig& enc_cfg, size_t label_index,
                        bool* ok) {
  const sim::LabelState& label = world.labels[label_index];
  const sim::ObjectState& target = world.objects[label.target_index];

  Ray3 pl = scaled_ray(label.world_pos, proj);
  Ray3 pa = scaled_ray(label.anchor, proj);
  Ray3 po = scaled_ray(target.pos, proj);
  *ok = !(pl.behind || pa.behind || po.behind);

  double inv_v = 1.0 / enc_cfg.ref_speed;
  double rel = enc_cfg.rel_scale;
  SelfFeature f{};
  // l_ray: own position, velocity, normal, leader offset.
  put3(&f[0], pl.u, pl.v, pl.z);
  put3(&f[3], label.world_vel.x * inv_v, label.world_vel.y * inv_v,
       label.world_vel.z * inv_v);
  put3(&f[6], label.normal.x, label.normal.y, label.normal.z);
  put3(&f[9], rel * (pa.u - pl.u), rel * (pa.v - pl.v), rel * (pa.z - pl.z));
  // o_ray of the target: relative position, relative velocity, normal, w = 1.
  put3(&f[12], rel * (po.u - pl.u), rel * (po.v - pl.v), rel * (po.z - pl.z));
  Vec3 dv = target.vel - label.world_vel;
  put3(&f[15], dv.x * inv_v, dv.y * inv_v, dv.z * inv_v);
  put3(&f[18], target.normal.x, target.normal.y, target.normal.z);
  f[21] = 1.0f;
  return f;
}

NeighborFeature encode_neighbor(const sim::WorldState& world,
                                const sim::SimConfig& /*config*/,
                                const geom::Projector& proj,
                                const EncoderConfig& enc_cfg,
                                size_t label_index, size_t neighbor_index,
                                NeighborKind kind, bool* ok) {
  const sim::LabelState& label = world.labels[label_index];
  Ray3 pl = scaled_ray(label.world_pos, proj);

  Vec3 n_pos, n_vel, n_normal;
  bool behind = pl.behind;
  double w = 0.0;
  NeighborFeature f{};

  if (kind == NeighborKind::object) {
    const sim::ObjectState& obj = world.objects[neighbor_index];
    n_pos = obj.pos;
    n_vel = obj.vel;
    n_normal = obj.normal;
    w = 1.0;
    // leader-offset slots stay zero for objects
  } else {
    const sim::LabelState& other = world.labels[neighbor_index];
    n_pos = other.world_pos;
    n_vel = other.world_vel;
    n_normal = other.normal;
    Ray3 pa = scaled_ray(other.anchor, proj);
    behind = behind || pa.behind;
    double rel = enc_cfg.rel_scale;
    put3(&f[9], rel * (pa.u - pl.u), rel * (pa.v - pl.v), rel * (pa.z - pl.z));
  }

  Ray3 pn = scaled_ray(n_pos, proj);
  behind = behind || pn.behind;
  *ok = !behind;

  double inv_v = 1.0 / enc_cfg.ref_speed;
  double rel = enc_cfg.rel_scale;
  put3(&f[0], rel * (pn.u - pl.u), rel * (pn.v - pl.v), rel * (pn.z - pl.z));
  Vec3 dv = n_vel - label.world_vel;
  put3(&f[3], dv.x * inv_v, dv.y * inv_v, dv.z * inv_v);
  put3(&f[6], n_normal.x, n_normal.y, n_normal.z);
  f[12] = static_cast<float>(w);
  return f;
}

EncodedObservation encode_observation(const sim::WorldState& world,
                                      const sim::SimConfig& config,
                                      const geom::Projector& proj,
                                      const EncoderConfig& enc_cfg,
                                      size_t label_index) {
  EncodedObservation obs;
  const sim::LabelState& label = world.labels[label_index];
  if (!label.active) return obs;

  bool ok = true;
  obs.self = encode_self(world, config, proj, enc_cfg, label_index, &ok);
  if (!ok) return obs;

  obs.neighbors.reserve(world.objects.size() + world.labels.size());
  for (size_t j = 0; j < world.objects.size(); ++j) {
    if (j == label.target_index || !world.objects[j].active) continue;
    bool n_ok = true;
    obs.neighbors.push_back(encode_neighbor(
        world, config, proj, enc_cfg, label_index, j, NeighborKind::object, &n_ok));
    if (!n_ok) return obs;
  }
  for (size_t j = 0; j < world.labels.size(); ++j) {
    if (j == label_index || !world.labels[j].active) continue;
    bool n_ok = true;
    obs.neighbors.push_back(encode_neighbor(
        world, config, proj, enc_cfg, label_index, j, NeighborKind::label, &n_ok));
    if (!n_ok) return obs;
  }
  obs.valid = true;
  return obs;
}

}  // namespace dynlabel::enc
