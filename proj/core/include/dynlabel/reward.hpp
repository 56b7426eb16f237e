#pragma once

#include <string>
#include <vector>

#include "dynlabel/geometry.hpp"
#include "dynlabel/sim.hpp"

namespace dynlabel::metrics {

using geom::StepCounts;

// Per-step reward constants. The defaults are the paper-tuned values this
// design ships with; overriding them is for experimentation only.
struct RewardConfig {
  double occ_unit = 0.1;
  double int_unit = 0.1;
  double acc_unit = 0.001;
};

struct RewardBreakdown {
  double r_occ = 0.0;
  double r_int = 0.0;
  double r_acc = 0.0;
  double total = 0.0;
};

// r_occ = -0.1*n_occ if n_occ > 0 else +0.1 (r_int likewise); r_acc tests the
// raw requested acceleration against the per-axis bound, so the penalty stays
// learnable even though the physics clamps.
RewardBreakdown reward(const StepCounts& counts, const sim::Action& raw_action,
                       double max_acc, const RewardConfig& cfg = {});

// OCC: mean entities occluded per label per step. INT: mean leader lines
// crossed per label per step. DIST: mean extra world path length of a label
// over its target object, meters.
struct EpisodeMetrics {
  double occ = 0.0;
  double int_ = 0.0;
  double dist = 0.0;
};

// Keeps per-label sums so DIST stays exact per label even when entities enter
// or leave mid-scene. One accumulator per rollout; merge() combines results
// from *disjoint* label streams (e.g. different scenes evaluated in
// parallel), while sequential accumulate() calls extend the same streams.
class MetricsAccumulator {
 public:
  void accumulate(const sim::WorldState& before, const sim::WorldState& after,
                  const std::vector<StepCounts>& counts);

  void merge(const MetricsAccumulator& other);

  EpisodeMetrics finalize() const;

  long steps() const { return steps_; }

 private:
  std::vector<double> occ_by_label_;
  std::vector<double> int_by_label_;
  std::vector<double> label_path_;
  std::vector<double> object_path_;
  std::vector<long> steps_by_label_;
  long steps_ = 0;
};

}  // namespace dynlabel::metrics
