#include <doctest.h>

#include <cmath>
#include <functional>
#include <sstream>

#include "dynlabel/errors.hpp"
#include "dynlabel/rng.hpp"
#include "dynlabel/trajectory.hpp"

using namespace dynlabel;
using namespace dynlabel::data;

namespace {

RawTrack make_track(const std::string& id, double t0, double t1, double dt,
                    const std::function<Vec2(double)>& f) {
  RawTrack tr;
  tr.id = id;
  for (int i = 0;; ++i) {
    double t = t0 + i * dt;
    if (t > t1 + 1e-9) break;
    tr.samples.push_back({t, f(t)});
  }
  return tr;
}

}  // namespace

TEST_CASE("ingest groups rows by id and sorts by time") {
  std::istringstream in(
      "t,id,x,z\n"
      "0.04,a,1.0,2.0\n"
      "0.0,a,0.0,0.0\n");
  auto tracks = ingest_csv(in);
  REQUIRE(tracks.size() == 1);
  CHECK(tracks[0].id == "a");
  REQUIRE(tracks[0].samples.size() == 2);
  CHECK(tracks[0].samples[0].t == 0.0);
  CHECK(tracks[0].samples[1].t == 0.04);
  CHECK(tracks[0].samples[1].pos.x == 1.0);
}

TEST_CASE("ingest rejects a row with missing columns, naming the line") {
  std::istringstream in(
      "t,id,x,z\n"
      "0.0,a,1.0\n");
  CHECK_THROWS_WITH_AS(ingest_csv(in), doctest::Contains("line 2"), DataError);
}

TEST_CASE("ingest rejects duplicate timestamps and bad values") {
  std::istringstream dup(
      "t,id,x,z\n"
      "0.0,a,1.0,1.0\n"
      "0.0,a,2.0,2.0\n");
  CHECK_THROWS_AS(ingest_csv(dup), DataError);

  std::istringstream neg(
      "t,id,x,z\n"
      "-1.0,a,1.0,1.0\n"
      "0.0,a,2.0,2.0\n");
  CHECK_THROWS_AS(ingest_csv(neg), DataError);

  std::istringstream garbled(
      "t,id,x,z\n"
      "0.0,a,one,1.0\n");
  CHECK_THROWS_AS(ingest_csv(garbled), DataError);

  std::istringstream bad_header("time,id,x,z\n0,a,0,0\n");
  CHECK_THROWS_AS(ingest_csv(bad_header), DataError);
}

TEST_CASE("a 400 s stream at 0.04 s spacing has 10001 samples") {
  std::ostringstream csv;
  csv << "t,id,x,z\n";
  for (int i = 0; i <= 10000; ++i) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g,a,%.17g,0\n", i * 0.04, i * 0.001);
    csv << buf;
  }
  std::istringstream in(csv.str());
  auto tracks = ingest_csv(in);
  REQUIRE(tracks.size() == 1);
  CHECK(tracks[0].samples.size() == 10001);
}

TEST_CASE("emit/ingest round-trips tracks exactly") {
  Rng rng(42);
  std::vector<RawTrack> tracks;
  for (int k = 0; k < 3; ++k) {
    RawTrack tr;
    tr.id = "id" + std::to_string(k);
    double t = rng.uniform(0.0, 0.01);
    for (int i = 0; i < 50; ++i) {
      tr.samples.push_back(
          {t, {rng.uniform(-100.0, 100.0), rng.uniform(-100.0, 100.0)}});
      t += rng.uniform(0.01, 0.1);
    }
    tracks.push_back(std::move(tr));
  }
  std::ostringstream out;
  emit_csv(tracks, out);
  std::istringstream in(out.str());
  auto back = ingest_csv(in);
  REQUIRE(back.size() == tracks.size());
  for (size_t k = 0; k < tracks.size(); ++k) {
    REQUIRE(back[k].samples.size() == tracks[k].samples.size());
    for (size_t i = 0; i < tracks[k].samples.size(); ++i) {
      CHECK(back[k].samples[i].t == tracks[k].samples[i].t);
      CHECK(back[k].samples[i].pos.x == tracks[k].samples[i].pos.x);
      CHECK(back[k].samples[i].pos.y == tracks[k].samples[i].pos.y);
    }
  }
}

TEST_CASE("resample interpolates linearly") {
  RawTrack tr;
  tr.id = "a";
  tr.samples = {{0.0, {0.0, 0.0}}, {1.0, {2.0, 0.0}}};
  auto rt = resample(tr, 0.5, 0.0, 2);
  REQUIRE(rt.pos.size() == 3);
  CHECK(rt.pos[1].x == doctest::Approx(1.0));  // midpoint of linear motion
  CHECK(rt.pos[1].y == doctest::Approx(0.0));
}

TEST_CASE("resample of uniform motion gives constant velocity") {
  auto tr = make_track("a", 0.0, 2.0, 0.04, [](double t) { return Vec2{t, 0.0}; });
  auto rt = resample(tr, 0.1, 0.0, 20);
  for (size_t k = 0; k < rt.vel.size(); ++k) {
    CHECK(rt.vel[k].x == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rt.vel[k].y == doctest::Approx(0.0));
  }
  // step 0 copies step 1
  CHECK(rt.vel[0].x == rt.vel[1].x);
}

TEST_CASE("resample of a piecewise path matches hand interpolation") {
  RawTrack tr;
  tr.id = "a";
  tr.samples = {{0.0, {0.0, 0.0}}, {1.0, {1.0, 0.0}}, {2.0, {1.0, 1.0}}};
  auto rt = resample(tr, 0.5, 0.0, 4);
  CHECK(rt.pos[3].x == doctest::Approx(1.0));  // t = 1.5
  CHECK(rt.pos[3].y == doctest::Approx(0.5));
}

TEST_CASE("resample outside the track range errors") {
  RawTrack tr;
  tr.id = "a";
  tr.samples = {{0.0, {0.0, 0.0}}, {1.0, {1.0, 0.0}}};
  CHECK_THROWS_AS(resample(tr, 0.5, 0.0, 4), DataError);
  CHECK_THROWS_AS(resample(tr, 0.5, -0.5, 2), DataError);
}

TEST_CASE("resampling at the native rate reproduces positions bit-exactly") {
  Rng rng(7);
  RawTrack tr;
  tr.id = "a";
  double dt = 0.1;
  for (int i = 0; i <= 100; ++i)
    tr.samples.push_back(
        {i * dt, {rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)}});
  auto rt = resample(tr, dt, 0.0, 100);
  for (int k = 0; k <= 100; ++k) {
    CHECK(rt.pos[k].x == tr.samples[k].pos.x);
    CHECK(rt.pos[k].y == tr.samples[k].pos.y);
  }
}

TEST_CASE("split_scenes cuts a 400 s corpus into 26 scenes of 150 steps") {
  auto tr = make_track("a", 0.0, 400.0, 0.04,
                       [](double t) { return Vec2{std::sin(t), std::cos(t)}; });
  auto scenes = split_scenes({tr}, 15.0, 0.1);
  CHECK(scenes.size() == 26);
  for (const auto& s : scenes) {
    CHECK(s.num_steps == 150);
    REQUIRE(s.tracks.size() == 1);
    CHECK(s.tracks[0].pos.size() == 151);
  }
}

TEST_CASE("split_scenes drops sub-window corpora") {
  auto tr = make_track("a", 0.0, 14.0, 0.04, [](double t) { return Vec2{t, 0}; });
  CHECK(split_scenes({tr}, 15.0, 0.1).empty());
  CHECK(split_scenes({}, 15.0, 0.1).empty());
}

TEST_CASE("a 30 s corpus yields two scenes; the boundary sample starts scene 2") {
  auto tr = make_track("a", 0.0, 30.0, 0.04, [](double t) { return Vec2{t, 0}; });
  auto scenes = split_scenes({tr}, 15.0, 0.1);
  REQUIRE(scenes.size() == 2);
  CHECK(scenes[1].tracks[0].pos[0].x == doctest::Approx(15.0).epsilon(1e-12));
  CHECK(scenes[0].tracks[0].pos.back().x == doctest::Approx(15.0).epsilon(1e-12));
  CHECK(scenes[1].tracks[0].pos.back().x == doctest::Approx(30.0).epsilon(1e-12));
}

TEST_CASE("split_scenes honors the exclusion list") {
  auto tr = make_track("a", 0.0, 60.0, 0.04, [](double t) { return Vec2{t, 0}; });
  SplitOptions opts;
  opts.excluded_windows = {1, 3};
  auto scenes = split_scenes({tr}, 15.0, 0.1, opts);
  REQUIRE(scenes.size() == 2);
  CHECK(scenes[0].scene_id == "scene_000");
  CHECK(scenes[1].scene_id == "scene_002");
}

TEST_CASE("split_scenes marks partial tracks with entry and exit steps") {
  auto full = make_track("a", 0.0, 15.0, 0.04, [](double t) { return Vec2{t, 0}; });
  auto late = make_track("b", 5.0, 15.0, 0.04, [](double t) { return Vec2{0, t}; });
  auto scenes = split_scenes({full, late}, 15.0, 0.1);
  REQUIRE(scenes.size() == 1);
  REQUIRE(scenes[0].tracks.size() == 2);
  const auto& b = scenes[0].tracks[1];
  CHECK(b.entry_step == 50);
  CHECK(b.exit_step == 150);
  CHECK(b.pos.size() == 101);

  SUBCASE("requiring the partial track discards the window") {
    SplitOptions opts;
    opts.required_ids = {"b"};
    CHECK(split_scenes({full, late}, 15.0, 0.1, opts).empty());
  }
}

TEST_CASE("train_test_split reproduces the 26 -> 20/6 split") {
  std::vector<Scene> scenes(26);
  for (int i = 0; i < 26; ++i) scenes[i].scene_id = "s" + std::to_string(i);
  auto split = train_test_split(scenes, 0.8, 3);
  CHECK(split.train.size() == 20);
  CHECK(split.test.size() == 6);

  for (const auto& a : split.train)
    for (const auto& b : split.test) CHECK(a.scene_id != b.scene_id);

  auto again = train_test_split(scenes, 0.8, 3);
  for (size_t i = 0; i < split.train.size(); ++i)
    CHECK(split.train[i].scene_id == again.train[i].scene_id);
}

TEST_CASE("train_test_split keeps at least one training scene") {
  std::vector<Scene> one(1);
  auto split = train_test_split(one, 0.8, 0);
  CHECK(split.train.size() == 1);
  CHECK(split.test.empty());
  CHECK_THROWS_AS(train_test_split({}, 0.8, 0), DataError);
}
