#include <doctest.h>

#include <cmath>

#include "dynlabel/errors.hpp"
#include "dynlabel/rng.hpp"
#include "dynlabel/sim.hpp"
#include "support/fixtures.hpp"

using namespace dynlabel;
using namespace dynlabel::sim;

TEST_CASE("init places labels at the home pose above the object top") {
  auto scene = fixtures::static_scene({{0.0, 0.0}});
  SimConfig cfg;  // object half-height 1.0 -> top at 2.0
  cfg.plane_height = 0.5;
  World world(scene, cfg, fixtures::test_camera(), {"o0"});
  const auto& label = world.state().labels[0];
  CHECK(label.offset.x == 0.0);
  CHECK(label.offset.y == 0.0);
  CHECK(label.world_pos.x == doctest::Approx(0.0));
  CHECK(label.world_pos.y == doctest::Approx(2.5));
  CHECK(label.world_pos.z == doctest::Approx(0.0));
  CHECK(label.anchor.y == doctest::Approx(2.0));
  // billboard normal points at the eye
  Vec3 to_eye = (fixtures::test_camera().eye - label.world_pos).normalized();
  CHECK(label.normal.dot(to_eye) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(world.state().step == 0);
}

TEST_CASE("unknown labeled ids are rejected") {
  auto scene = fixtures::static_scene({{0.0, 0.0}});
  CHECK_THROWS_AS(World(scene, SimConfig{}, fixtures::test_camera(), {"zz"}),
                  UsageError);
}

TEST_CASE("labeling all of a 10-object scene yields 10 labels") {
  std::vector<Vec2> pos(10);
  for (int i = 0; i < 10; ++i) pos[i] = Vec2{static_cast<double>(i), 0.0};
  auto scene = fixtures::static_scene(pos);
  World world(scene, SimConfig{}, fixtures::test_camera(),
              fixtures::all_ids(scene));
  CHECK(world.state().labels.size() == 10);
  CHECK(world.state().step == 0);
}

TEST_CASE("semi-implicit Euler: one step from rest") {
  auto scene = fixtures::static_scene({{0.0, 0.0}});
  SimConfig cfg;
  World world(scene, cfg, fixtures::test_camera(), {"o0"});
  world.step({Action{{1.0, 0.0}}});
  const auto& label = world.state().labels[0];
  CHECK(label.offset_vel.x == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(label.offset.x == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(label.offset.y == 0.0);
}

TEST_CASE("zero actions leave the offset untouched") {
  auto scene = fixtures::static_scene({{1.0, 2.0}});
  World world(scene, SimConfig{}, fixtures::test_camera(), {"o0"});
  Vec3 start = world.state().labels[0].world_pos;
  for (int i = 0; i < 10; ++i) world.step({Action{{0.0, 0.0}}});
  CHECK(world.state().labels[0].offset.x == 0.0);
  CHECK(world.state().labels[0].offset.y == 0.0);
  CHECK((world.state().labels[0].world_pos - start).norm() == 0.0);
}

TEST_CASE("the plane boundary clamps position and zeroes that axis velocity") {
  auto scene = fixtures::static_scene({{0.0, 0.0}}, 100);
  SimConfig cfg;
  World world(scene, cfg, fixtures::test_camera(), {"o0"});
  for (int i = 0; i < 60 && !world.finished(); ++i)
    world.step({Action{{cfg.max_acc, 0.0}}});
  const auto& label = world.state().labels[0];
  CHECK(label.offset.x == cfg.plane_side / 2.0);  // exactly at the wall
  CHECK(label.offset_vel.x == 0.0);

  // pushing further outward keeps it pinned
  world.step({Action{{cfg.max_acc, 0.0}}});
  CHECK(world.state().labels[0].offset.x == cfg.plane_side / 2.0);
  CHECK(world.state().labels[0].offset_vel.x == 0.0);
}

TEST_CASE("plane containment holds under random action sequences") {
  auto scene = fixtures::static_scene({{0.0, 0.0}, {1.0, 1.0}}, 150);
  SimConfig cfg;
  World world(scene, cfg, fixtures::test_camera(), fixtures::all_ids(scene));
  Rng rng(5);
  double half = cfg.plane_side / 2.0;
  while (!world.finished()) {
    std::vector<Action> acts;
    for (size_t i = 0; i < 2; ++i)
      acts.push_back(Action{{rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)}});
    world.step(acts);
    for (const auto& l : world.state().labels) {
      CHECK(std::abs(l.offset.x) <= half);
      CHECK(std::abs(l.offset.y) <= half);
    }
  }
}

TEST_CASE("rigid follow: zero actions track the object exactly") {
  auto scene = fixtures::scripted_scene(
      {[](int k) { return Vec2{0.2 * k, -0.1 * k}; }}, 50);
  World world(scene, SimConfig{}, fixtures::test_camera(), {"o0"});
  while (!world.finished()) {
    Vec3 label_before = world.state().labels[0].world_pos;
    Vec3 obj_before = world.state().objects[0].pos;
    world.step({Action{{0.0, 0.0}}});
    Vec3 dl = world.state().labels[0].world_pos - label_before;
    Vec3 dobj = world.state().objects[0].pos - obj_before;
    CHECK(dl.x == dobj.x);
    CHECK(dl.y == dobj.y);
    CHECK(dl.z == dobj.z);
  }
}

TEST_CASE("offset speed is bounded by max_acc * t") {
  auto scene = fixtures::static_scene({{0.0, 0.0}}, 150);
  SimConfig cfg;
  World world(scene, cfg, fixtures::test_camera(), {"o0"});
  Rng rng(17);
  int k = 0;
  while (!world.finished()) {
    world.step({Action{{rng.uniform(-20.0, 20.0), rng.uniform(-20.0, 20.0)}}});
    ++k;
    const Vec2& v = world.state().labels[0].offset_vel;
    double bound = cfg.max_acc * cfg.dt * k + 1e-9;
    CHECK(std::abs(v.x) <= bound);
    CHECK(std::abs(v.y) <= bound);
  }
}

TEST_CASE("stepping is deterministic and finishes on the scene clock") {
  auto scene = fixtures::static_scene({{0.0, 0.0}}, 5);
  auto run = [&]() {
    World world(scene, SimConfig{}, fixtures::test_camera(), {"o0"});
    Rng rng(3);
    while (!world.finished())
      world.step({Action{{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)}}});
    return world.state_hash();
  };
  CHECK(run() == run());

  World world(scene, SimConfig{}, fixtures::test_camera(), {"o0"});
  for (int i = 0; i < 5; ++i) world.step({Action{{0.0, 0.0}}});
  CHECK(world.finished());
  CHECK(world.state().time == doctest::Approx(0.5));
  CHECK_THROWS_AS(world.step({Action{{0.0, 0.0}}}), UsageError);
}

TEST_CASE("an action per label is required") {
  auto scene = fixtures::static_scene({{0.0, 0.0}, {1.0, 0.0}});
  World world(scene, SimConfig{}, fixtures::test_camera(),
              fixtures::all_ids(scene));
  CHECK_THROWS_AS(world.step({Action{{0.0, 0.0}}}), UsageError);
}

TEST_CASE("entities outside their coverage window freeze and deactivate") {
  data::Scene scene = fixtures::static_scene({{0.0, 0.0}}, 10);
  data::ResampledTrack late;
  late.id = "late";
  late.entry_step = 4;
  late.exit_step = 8;
  late.pos.assign(5, Vec2{3.0, 3.0});
  late.vel.assign(5, Vec2{});
  scene.tracks.push_back(late);

  World world(scene, SimConfig{}, fixtures::test_camera(), {"o0", "late"});
  CHECK_FALSE(world.state().objects[1].active);
  CHECK_FALSE(world.state().labels[1].active);
  for (int i = 0; i < 4; ++i) world.step({Action{{0, 0}}, Action{{0, 0}}});
  CHECK(world.state().objects[1].active);
  CHECK(world.state().labels[1].active);
  for (int i = 0; i < 5; ++i) world.step({Action{{0, 0}}, Action{{0, 0}}});
  CHECK_FALSE(world.state().objects[1].active);
  CHECK(world.state().objects[1].pos.x == doctest::Approx(3.0));
}

TEST_CASE("default_home is the origin offset") {
  LabelState label;
  label.offset = Vec2{1.0, -0.5};
  Vec2 home = default_home(label);
  CHECK(home.x == 0.0);
  CHECK(home.y == 0.0);
}
