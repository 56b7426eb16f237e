#include "dynlabel/reward.hpp"

#include <cmath>

#include "dynlabel/errors.hpp"

namespace dynlabel::metrics {

RewardBreakdown reward(const StepCounts& counts, const sim::Action& raw_action,
                       double max_acc, const RewardConfig& cfg) {
  RewardBreakdown r;
  r.r_occ = counts.n_occ > 0 ? -cfg.occ_unit * counts.n_occ : cfg.occ_unit;
  r.r_int = counts.n_int > 0 ? -cfg.int_unit * counts.n_int : cfg.int_unit;
  bool in_bounds = std::abs(raw_action.a.x) <= max_acc &&
                   std::abs(raw_action.a.y) <= max_acc;
  r.r_acc = in_bounds ? cfg.acc_unit : -cfg.acc_unit;
  r.total = r.r_occ + r.r_int + r.r_acc;
  return r;
}

void MetricsAccumulator::accumulate(const sim::WorldState& before,
                                    const sim::WorldState& after,
                                    const std::vector<StepCounts>& counts) {
  size_t n = after.labels.size();
  if (occ_by_label_.size() < n) {
    occ_by_label_.resize(n, 0.0);
    int_by_label_.resize(n, 0.0);
    label_path_.resize(n, 0.0);
    object_path_.resize(n, 0.0);
    steps_by_label_.resize(n, 0);
  }
  for (size_t i = 0; i < n; ++i) {
    if (!after.labels[i].active || !before.labels[i].active) continue;
    occ_by_label_[i] += counts[i].n_occ;
    int_by_label_[i] += counts[i].n_int;
    label_path_[i] +=
        (after.labels[i].world_pos - before.labels[i].world_pos).norm();
    size_t o = after.labels[i].target_index;
    object_path_[i] += (after.objects[o].pos - before.objects[o].pos).norm();
    steps_by_label_[i] += 1;
  }
  steps_ += 1;
}

void MetricsAccumulator::merge(const MetricsAccumulator& other) {
  occ_by_label_.insert(occ_by_label_.end(), other.occ_by_label_.begin(),
                       other.occ_by_label_.end());
  int_by_label_.insert(int_by_label_.end(), other.int_by_label_.begin(),
                       other.int_by_label_.end());
  label_path_.insert(label_path_.end(), other.label_path_.begin(),
                     other.label_path_.end());
  object_path_.insert(object_path_.end(), other.object_path_.begin(),
                      other.object_path_.end());
  steps_by_label_.insert(steps_by_label_.end(), other.steps_by_label_.begin(),
                         other.steps_by_label_.end());
  steps_ += other.steps_;
}

EpisodeMetrics MetricsAccumulator::finalize() const {
  if (steps_ == 0) throw DataError("metrics: no steps accumulated");
  long label_steps = 0;
  for (long s : steps_by_label_) label_steps += s;
  EpisodeMetrics m;
  if (label_steps == 0) return m;
  double occ = 0.0, intr = 0.0, extra = 0.0;
  for (size_t i = 0; i < occ_by_label_.size(); ++i) {
    occ += occ_by_label_[i];
    intr += int_by_label_[i];
    extra += label_path_[i] - object_path_[i];
  }
  m.occ = occ / static_cast<double>(label_steps);
  m.int_ = intr / static_cast<double>(label_steps);
  m.dist = extra / static_cast<double>(occ_by_label_.size());
  return m;
}

}  // namespace dynlabel::metrics
