#pragma once

#include "dynlabel/camera.hpp"
#include "dynlabel/sim.hpp"

namespace dynlabel::baseline {

// Screen-space repulsion gains for the force controller. Defaults are tuned
// on the crossing-pair scenario to reduce occlusion versus the pinned
// baseline at a visible movement cost.
struct ForceConfig {
  double k_repel = 0.12;
  double repel_radius = 0.3;
  double k_spring = 2.5;
  double damping = 3.1;
  double gain = 60.0;         // screen force -> m/s^2
};

// Keeps the label at its home pose; runners pin the label's dynamics so the
// pose holds exactly.
sim::Action none_controller(const sim::WorldState& world, size_t label_index);

// Memoryless screen-space controller: inverse-distance repulsion from every
// other entity's projected center (own target excluded), mapped back onto the
// plane axes through the camera's screen directions, plus a damped spring to
// home. Reacts to the present state only.
sim::Action force_controller(const sim::WorldState& world,
                             const sim::SimConfig& config,
                             const geom::Projector& proj, size_t label_index,
                             const ForceConfig& fc);

}  // namespace dynlabel::baseline
