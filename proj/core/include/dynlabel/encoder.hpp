#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "dynlabel/camera.hpp"
#include "dynlabel/sim.hpp"

namespace dynlabel::enc {

// Self feature: the label's own ray-space state (12) concatenated with its
// target object's state relative to the label (10).
constexpr size_t kSelfDim = 22;
// Unified neighbor layout so one embedding network serves both kinds:
// relative ray position 3, relative world velocity 3, normal 3, leader offset
// 3 (zero for objects), w flag 1 (1 = object, 0 = label).
constexpr size_t kNeighborDim = 13;

struct EncoderConfig {
  double ref_speed = 5.0;  // m/s; divides every velocity slot
  // Relative ray-space offsets between nearby entities are hundredths of a
  // screen; this gain lifts them to unit scale for the networks.
  double rel_scale = 8.0;
};

using SelfFeature = std::array<float, kSelfDim>;
using NeighborFeature = std::array<float, kNeighborDim>;

struct EncodedObservation {
  bool valid = false;  // false when any required point is behind the camera
  SelfFeature self{};
  std::vector<NeighborFeature> neighbors;
};

// Feature formulas; positions go through ray space (u, v, distance/far),
// velocities stay in world coordinates divided by ref_speed, normals are raw.
SelfFeature encode_self(const sim::WorldState& world,
                        const sim::SimConfig& config,
                        const geom::Projector& proj,
                        const EncoderConfig& enc_cfg, size_t label_index,
                        bool* ok);

enum class NeighborKind { object, label };

NeighborFeature encode_neighbor(const sim::WorldState& world,
                                const sim::SimConfig& config,
                                const geom::Projector& proj,
                                const EncoderConfig& enc_cfg,
                                size_t label_index, size_t neighbor_index,
                                NeighborKind kind, bool* ok);

// Self plus every active neighbor except label i and its target object.
// Neighbor order is deterministic (objects by index, then labels) but the
// downstream attention pooling is permutation-invariant.
EncodedObservation encode_observation(const sim::WorldState& world,
                                      const sim::SimConfig& config,
                                      const geom::Projector& proj,
                                      const EncoderConfig& enc_cfg,
                                      size_t label_index);

}  // namespace dynlabel::enc
