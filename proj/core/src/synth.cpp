#include "dynlabel/synth.hpp"

#include <cmath>
#include <cstdio>

#include "dynlabel/errors.hpp"
#include "dynlabel/rng.hpp"

namespace dynlabel::data {

namespace {

void validate(const SynthParams& p) {
  if (p.count <= 0) throw UsageError("synth: count must be positive");
  if (p.speed_min < 0.0 || p.speed_max < p.speed_min)
    throw UsageError("synth: invalid speed range");
  if (p.arena_half <= 0.0) throw UsageError("synth: arena_half must be positive");
  if (p.duration <= 0.0) throw UsageError("synth: duration must be positive");
  if (p.sample_dt <= 0.0) throw UsageError("synth: sample_dt must be positive");
  if (p.radius <= 0.0) throw UsageError("synth: radius must be positive");
}

std::string object_id(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "o%d", i);
  return buf;
}

int sample_count(const SynthParams& p) {
  return static_cast<int>(std::llround(p.duration / p.sample_dt));
}

// Two entities on converging lines with distinct speeds, passing within half
// a meter of each other at mid-corpus: the canonical faster-object-overtaking
// configuration. Motion along each line is sinusoidal so trajectories stay in
// the arena for any duration while crossing at full speed; over a 15-second
// scene the middle of the sweep is close to linear. Extra entities (count >
// 2) run the same pattern on outer lanes.
std::vector<RawTrack> gen_crossing(const SynthParams& p, Rng& rng) {
  int n = sample_count(p);
  double half_t = p.duration / 2.0;

  double angle = rng.uniform(10.0, 20.0) * M_PI / 180.0;  // between the two paths
  double lateral = rng.uniform(0.3, 0.7);                 // closest-approach gap
  double yaw = rng.uniform(-15.0, 15.0) * M_PI / 180.0;   // whole-plan rotation
  double s_fast = p.speed_max * rng.uniform(0.9, 1.1);
  double s_slow = p.speed_min * rng.uniform(0.9, 1.1);
  bool mirrored = (rng.next_u64() & 1) != 0;

  auto rot = [&](Vec2 v) -> Vec2 {
    double c = std::cos(yaw), s = std::sin(yaw);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
  };

  std::vector<RawTrack> tracks;
  for (int i = 0; i < p.count; ++i) {
    bool fast = (i % 2 == 0) != mirrored;
    double speed = (i < 2) ? (fast ? s_fast : s_slow)
                           : rng.uniform(std::max(p.speed_min, 0.1), p.speed_max);
    double a = (i % 2 == 0) ? -angle / 2.0 : angle / 2.0;
    Vec2 dir{std::cos(a), std::sin(a)};
    double off = (i % 2 == 0) ? -lateral / 2.0 : lateral / 2.0;
    if (i >= 2) off += (i / 2) * 2.5 * ((i % 2 == 0) ? -1.0 : 1.0);
    Vec2 meet{0.0, off};

    double amp = std::min(0.85 * p.arena_half, speed * half_t);
    double omega = speed / amp;  // peak speed = amp * omega = speed

    RawTrack track;
    track.id = object_id(i);
    for (int k = 0; k <= n; ++k) {
      double t = k * p.sample_dt;
      Vec2 pos = meet + dir * (amp * std::sin(omega * (t - half_t)));
      track.samples.push_back({t, rot(pos)});
    }
    tracks.push_back(std::move(track));
  }
  return tracks;
}

// Entities evenly spaced on a circle, orbiting at constant angular speed.
std::vector<RawTrack> gen_roundabout(const SynthParams& p, Rng& rng) {
  int n = sample_count(p);
  double speed = 0.5 * (p.speed_min + p.speed_max);
  double omega = speed / p.radius;
  double phase0 = rng.uniform(0.0, 2.0 * M_PI);

  std::vector<RawTrack> tracks;
  for (int i = 0; i < p.count; ++i) {
    double phase = phase0 + 2.0 * M_PI * i / p.count;
    RawTrack track;
    track.id = object_id(i);
    for (int k = 0; k <= n; ++k) {
      double t = k * p.sample_dt;
      double a = phase + omega * t;
      track.samples.push_back({t, {p.radius * std::cos(a), p.radius * std::sin(a)}});
    }
    tracks.push_back(std::move(track));
  }
  return tracks;
}

// Parallel lanes with sinusoidal shuttling; adjacent lanes run out of phase
// so entities keep passing one another.
std::vector<RawTrack> gen_lane_drill(const SynthParams& p, Rng& rng) {
  int n = sample_count(p);
  double lane_gap = 1.2;
  double span = std::min(p.arena_half * 0.8, 8.0);

  std::vector<RawTrack> tracks;
  for (int i = 0; i < p.count; ++i) {
    double speed = rng.uniform(std::max(p.speed_min, 0.1), p.speed_max);
    double omega = speed / span;  // peak |velocity| = span * omega = speed
    double phase = rng.uniform(0.0, 2.0 * M_PI) + (i % 2 == 0 ? 0.0 : M_PI);
    double lane = (i - (p.count - 1) / 2.0) * lane_gap;
    RawTrack track;
    track.id = object_id(i);
    for (int k = 0; k <= n; ++k) {
      double t = k * p.sample_dt;
      track.samples.push_back({t, {span * std::sin(omega * t + phase), lane}});
    }
    tracks.push_back(std::move(track));
  }
  return tracks;
}

// Constant-speed headings doing a Brownian turn walk, reflected at the arena
// bounds. speed_max = 0 produces stationary tracks.
std::vector<RawTrack> gen_random_walk(const SynthParams& p, Rng& rng) {
  int n = sample_count(p);
  double turn_sigma = 1.2;  // rad / sqrt(s)

  std::vector<RawTrack> tracks;
  for (int i = 0; i < p.count; ++i) {
    double speed = p.speed_max <= 0.0
                       ? 0.0
                       : rng.uniform(std::max(p.speed_min, 0.0), p.speed_max);
    Vec2 pos{rng.uniform(-p.arena_half * 0.6, p.arena_half * 0.6),
             rng.uniform(-p.arena_half * 0.6, p.arena_half * 0.6)};
    double heading = rng.uniform(0.0, 2.0 * M_PI);
    RawTrack track;
    track.id = object_id(i);
    track.samples.push_back({0.0, pos});
    for (int k = 1; k <= n; ++k) {
      heading += turn_sigma * std::sqrt(p.sample_dt) * rng.normal();
      pos += Vec2{std::cos(heading), std::sin(heading)} * (speed * p.sample_dt);
      if (pos.x > p.arena_half) pos.x = 2.0 * p.arena_half - pos.x;
      if (pos.x < -p.arena_half) pos.x = -2.0 * p.arena_half - pos.x;
      if (pos.y > p.arena_half) pos.y = 2.0 * p.arena_half - pos.y;
      if (pos.y < -p.arena_half) pos.y = -2.0 * p.arena_half - pos.y;
      track.samples.push_back({k * p.sample_dt, pos});
    }
    tracks.push_back(std::move(track));
  }
  return tracks;
}

}  // namespace

SynthKind synth_kind_from_string(const std::string& s) {
  if (s == "crossing_pair") return SynthKind::crossing_pair;
  if (s == "roundabout") return SynthKind::roundabout;
  if (s == "lane_drill") return SynthKind::lane_drill;
  if (s == "random_walk") return SynthKind::random_walk;
  throw UsageError("unknown scenario kind '" + s + "'");
}

std::string to_string(SynthKind k) {
  switch (k) {
    case SynthKind::crossing_pair: return "crossing_pair";
    case SynthKind::roundabout: return "roundabout";
    case SynthKind::lane_drill: return "lane_drill";
    case SynthKind::random_walk: return "random_walk";
  }
  return "?";
}

std::vector<RawTrack> synth_tracks(SynthKind kind, const SynthParams& params,
                                   uint64_t seed) {
  validate(params);
  Rng rng(seed);
  switch (kind) {
    case SynthKind::crossing_pair: return gen_crossing(params, rng);
    case SynthKind::roundabout: return gen_roundabout(params, rng);
    case SynthKind::lane_drill: return gen_lane_drill(params, rng);
    case SynthKind::random_walk: return gen_random_walk(params, rng);
  }
  throw UsageError("synth: unknown kind");
}

Scene synth_generate(SynthKind kind, const SynthParams& params, uint64_t seed,
                     double dt) {
  auto tracks = synth_tracks(kind, params, seed);
  SplitOptions opts;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%s_%llu", to_string(kind).c_str(),
                static_cast<unsigned long long>(seed));
  opts.id_prefix = buf;
  auto scenes = split_scenes(tracks, params.duration, dt, opts);
  if (scenes.empty()) throw DataError("synth_generate: produced no full scene");
  return scenes.front();
}

}  // namespace dynlabel::data
