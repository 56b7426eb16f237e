#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dynlabel/trajectory.hpp"

namespace dynlabel::data {

enum class SynthKind { crossing_pair, roundabout, lane_drill, random_walk };

SynthKind synth_kind_from_string(const std::string& s);
std::string to_string(SynthKind k);

struct SynthParams {
  int count = 2;             // objects
  double speed_min = 1.2;    // m/s
  double speed_max = 2.0;    // m/s
  double arena_half = 16.0;  // positions stay within [-arena_half, arena_half]^2
  double radius = 3.0;       // roundabout circle radius
  double duration = 15.0;    // seconds of raw data
  double sample_dt = 0.04;   // raw sampling interval
};

// Raw tracks sampled at sample_dt, mimicking an ingested corpus. Stand-in for
// the proprietary trajectory datasets; the CSV schema is identical.
std::vector<RawTrack> synth_tracks(SynthKind kind, const SynthParams& params,
                                   uint64_t seed);

// Convenience: one scene of params.duration seconds at decision interval dt.
Scene synth_generate(SynthKind kind, const SynthParams& params, uint64_t seed,
                     double dt = 0.1);

}  // namespace dynlabel::data
