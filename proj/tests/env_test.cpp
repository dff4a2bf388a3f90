#include "grasplite/env/grasp_env.hpp"

#include <cmath>
#include <random>

#include <doctest.h>

#include "grasplite/errors.hpp"

using namespace grasplite;
using env::EnvConfig;
using env::GraspEnv;

namespace {

EnvConfig pickplace_cfg() {
  EnvConfig cfg;
  cfg.task = env::Task::pickplace;
  return cfg;
}

std::vector<double> zero_action(const GraspEnv& e) {
  return std::vector<double>(e.action_dim(), 0.0);
}

// Moves the gripper by (dx, dy, dz) in units of the per-step limit while
// holding orientation (degenerate command) and grip.
std::vector<double> move_action(const GraspEnv& e, double dx, double dy, double dz,
                                double grip) {
  std::vector<double> a(e.action_dim(), 0.0);
  a[0] = dx;
  a[1] = dy;
  a[2] = dz;
  for (std::size_t i = e.action_layout().grip_offset(); i < e.action_dim(); ++i) a[i] = grip;
  return a;
}

double dist3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

// Drives the gripper onto the object and closes the grip; returns steps used.
std::size_t grasp_object(GraspEnv& e) {
  std::size_t steps = 0;
  while (steps < 40) {
    const auto& st = e.state();
    const double dx = st.object_pos[0] - st.gripper_pos[0];
    const double dy = st.object_pos[1] - st.gripper_pos[1];
    const double dz = st.object_pos[2] - st.gripper_pos[2];
    const bool near = std::hypot(dx, dy, dz) < 0.03;
    const double k = 1.0 / env::kMaxTranslation;
    e.step(move_action(e, std::clamp(dx * k, -1.0, 1.0), std::clamp(dy * k, -1.0, 1.0),
                       std::clamp(dz * k, -1.0, 1.0), near ? 1.0 : -1.0));
    ++steps;
    if (e.state().attached) return steps;
  }
  return steps;
}

}  // namespace

TEST_CASE("reset samples half of the goals at table height") {
  GraspEnv e(pickplace_cfg());
  std::mt19937_64 rng(1);
  const double rest = env::resting_height(env::ObjectKind::sphere);
  std::size_t surface = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    e.reset(rng);
    if (e.goal_spec().position[2] == rest) ++surface;
    CHECK(std::abs(e.goal_spec().position[0]) <= env::kSpawnHalf);
    CHECK(std::abs(e.goal_spec().position[1]) <= env::kSpawnHalf);
    // Object spawns inside the workspace box, resting on the table.
    CHECK(std::abs(e.state().object_pos[0]) <= env::kSpawnHalf);
    CHECK(std::abs(e.state().object_pos[1]) <= env::kSpawnHalf);
    CHECK(e.state().object_pos[2] == rest);
  }
  const double fraction = static_cast<double>(surface) / n;
  CHECK(std::abs(fraction - 0.5) < 0.02);
}

TEST_CASE("reset is deterministic for a fixed seed") {
  GraspEnv a(pickplace_cfg()), b(pickplace_cfg());
  std::mt19937_64 r1(99), r2(99);
  a.reset(r1);
  b.reset(r2);
  CHECK(a.state().gripper_pos == b.state().gripper_pos);
  CHECK(a.state().object_pos == b.state().object_pos);
  CHECK(a.state().gripper_rot.m == b.state().gripper_rot.m);
  CHECK(a.goal_spec().position == b.goal_spec().position);
}

TEST_CASE("gripper starts above the table facing down") {
  GraspEnv e(pickplace_cfg());
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    e.reset(rng);
    CHECK(e.state().gripper_pos[2] >= env::kGripperSpawnZMin);
    CHECK(e.state().gripper_pos[2] <= env::kGripperSpawnZMax);
    // Palm axis (third column) points down regardless of yaw.
    CHECK(e.state().gripper_rot.at(2, 2) == doctest::Approx(-1.0));
    CHECK(e.state().gripper_rot.is_valid(1e-9));
  }
}

TEST_CASE("zero action leaves a resting scene unchanged except the clock") {
  GraspEnv e(pickplace_cfg());
  std::mt19937_64 rng(3);
  e.reset(rng);
  const auto before = e.state();
  e.step(zero_action(e));
  const auto& after = e.state();
  CHECK(after.t == 1);
  CHECK(after.gripper_pos == before.gripper_pos);
  CHECK(after.gripper_rot.m == before.gripper_rot.m);
  CHECK(after.object_pos == before.object_pos);
  CHECK(after.joints == before.joints);
  CHECK_FALSE(after.attached);
}

TEST_CASE("episodes run exactly the fixed horizon") {
  GraspEnv e(pickplace_cfg());
  std::mt19937_64 rng(4);
  e.reset(rng);
  for (std::size_t t = 0; t < env::kHorizon; ++t) {
    CHECK_FALSE(e.done());
    e.step(zero_action(e));
  }
  CHECK(e.done());
  CHECK_THROWS_AS(e.step(zero_action(e)), EpisodeOver);
}

TEST_CASE("closing the grip near the object attaches it") {
  GraspEnv e(pickplace_cfg());
  std::mt19937_64 rng(6);
  e.reset(rng);
  // Teleport-free setup: walk the gripper to the object with the scripted
  // grasp routine.
  const std::size_t steps = grasp_object(e);
  CHECK(e.state().attached);
  CHECK(steps < 40);
}

TEST_CASE("an attached object follows rigidly and rises with the gripper") {
  GraspEnv e(pickplace_cfg());
  std::mt19937_64 rng(7);
  e.reset(rng);
  grasp_object(e);
  REQUIRE(e.state().attached);

  const double z0 = e.state().object_pos[2];
  const std::array<double, 3> offset{
      e.state().object_pos[0] - e.state().gripper_pos[0],
      e.state().object_pos[1] - e.state().gripper_pos[1],
      e.state().object_pos[2] - e.state().gripper_pos[2]};
  for (int i = 0; i < 5; ++i) e.step(move_action(e, 0, 0, 1.0, 1.0));
  CHECK(e.state().attached);
  CHECK(e.state().object_pos[2] ==
        doctest::Approx(z0 + 5 * env::kMaxTranslation).epsilon(1e-12));
  // Rigid attachment: the offset is unchanged (orientation was held).
  CHECK(e.state().object_pos[0] - e.state().gripper_pos[0] == doctest::Approx(offset[0]));
  CHECK(e.state().object_pos[2] - e.state().gripper_pos[2] == doctest::Approx(offset[2]));
}

TEST_CASE("opening the grip releases the object and it falls to rest") {
  GraspEnv e(pickplace_cfg());
  std::mt19937_64 rng(8);
  e.reset(rng);
  grasp_object(e);
  REQUIRE(e.state().attached);
  for (int i = 0; i < 6 && e.state().t < env::kHorizon; ++i) {
    e.step(move_action(e, 0, 0, 1.0, 1.0));
  }
  // Open the grip: detaches and the object descends to its resting height.
  const double rest = env::resting_height(env::ObjectKind::sphere);
  while (e.state().t < env::kHorizon && (e.state().attached || e.state().object_pos[2] > rest)) {
    const double z_before = e.state().object_pos[2];
    e.step(move_action(e, 0, 0, 0, -1.0));
    if (!e.state().attached && z_before > rest) {
      CHECK(e.state().object_pos[2] >= rest);
      CHECK(z_before - e.state().object_pos[2] <= env::kFallRate + 1e-12);
    }
  }
  CHECK_FALSE(e.state().attached);
  CHECK(e.state().object_pos[2] == doctest::Approx(rest));
}

TEST_CASE("object never penetrates the table under random play") {
  GraspEnv e(pickplace_cfg());
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const double rest = env::resting_height(env::ObjectKind::sphere);
  for (int ep = 0; ep < 30; ++ep) {
    e.reset(rng);
    for (std::size_t t = 0; t < env::kHorizon; ++t) {
      std::vector<double> a(e.action_dim());
      for (double& v : a) v = uni(rng);
      e.step(a);
      CHECK(e.state().object_pos[2] >= rest - 1e-12);
    }
  }
}

TEST_CASE("step is deterministic for identical states and actions") {
  GraspEnv a(pickplace_cfg()), b(pickplace_cfg());
  std::mt19937_64 r1(10), r2(10);
  a.reset(r1);
  b.reset(r2);
  std::mt19937_64 act_rng(11);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> act(a.action_dim());
    for (double& v : act) v = uni(act_rng);
    a.step(act);
    b.step(act);
    CHECK(a.state().gripper_pos == b.state().gripper_pos);
    CHECK(a.state().object_pos == b.state().object_pos);
    CHECK(a.state().gripper_rot.m == b.state().gripper_rot.m);
  }
}

TEST_CASE("sparse reward honors both thresholds") {
  EnvConfig cfg;
  cfg.task = env::Task::pickplace_orient;
  GraspEnv e(cfg);
  e.set_orient_threshold(0.2);

  const auto encode = [](const rotation::RotationMatrix& r) {
    const auto rep = rotation::encode_rotation(r);
    return std::vector<double>(rep.x.begin(), rep.x.end());
  };

  auto make_goal = [&](double x, const rotation::RotationMatrix& r) {
    std::vector<double> g{x, 0.0, 0.1};
    const auto o = encode(r);
    g.insert(g.end(), o.begin(), o.end());
    return g;
  };

  const auto id = rotation::RotationMatrix::identity();
  const std::vector<double> at_goal = make_goal(0.0, id);

  // Position boundary at 0.05 (strict).
  CHECK(e.reward(make_goal(0.04, id), at_goal) == 0.0);
  CHECK(e.reward(make_goal(0.06, id), at_goal) == -1.0);
  CHECK(e.reward(make_goal(0.05, id), at_goal) == -1.0);
  CHECK(e.reward(at_goal, at_goal) == 0.0);

  // Orientation boundary at the current threshold (strict).
  CHECK(e.reward(make_goal(0.01, rotation::rotation_about_z(0.3)), at_goal) == -1.0);
  CHECK(e.reward(make_goal(0.01, rotation::rotation_about_z(0.19)), at_goal) == 0.0);
  CHECK(e.reward(make_goal(0.01, rotation::rotation_about_z(0.21)), at_goal) == -1.0);

  // Widening the tolerance flips the verdict.
  e.set_orient_threshold(0.5);
  CHECK(e.reward(make_goal(0.01, rotation::rotation_about_z(0.3)), at_goal) == 0.0);
}

TEST_CASE("reach goals are gripper positions") {
  EnvConfig cfg;  // task = reach
  GraspEnv e(cfg);
  std::mt19937_64 rng(12);
  e.reset(rng);
  CHECK(e.goal_dim() == 3);
  const auto ag = e.achieved_goal();
  CHECK(ag[0] == e.state().gripper_pos[0]);
  CHECK(ag[2] == e.state().gripper_pos[2]);
}

TEST_CASE("observation layout and relative pose") {
  GraspEnv e(pickplace_cfg());
  std::mt19937_64 rng(13);
  e.reset(rng);
  const auto obs = e.observe();
  REQUIRE(obs.size() == e.state_dim());
  CHECK(e.state_dim() == 34);  // 33 + one jaw joint

  // Orientation entries are exactly the mask's pass-through dims.
  const auto mask = e.state_mask();
  REQUIRE(mask.size() == obs.size());
  std::size_t pass = 0;
  for (bool b : mask) {
    if (!b) ++pass;
  }
  CHECK(pass == 18);  // three 6-number orientations

  CHECK(e.observe() == obs);  // deterministic for a fixed state

  // An object placed exactly at the gripper pose with the same orientation
  // reads as zero offset + identity encoding.
  GraspEnv f(pickplace_cfg());
  f.reset(rng);
  // Drive the gripper onto the object, then inspect the relative block.
  while (dist3(f.state().gripper_pos, f.state().object_pos) > 1e-9 &&
         f.state().t + 1 < env::kHorizon) {
    const auto& st = f.state();
    const double k = 1.0 / env::kMaxTranslation;
    f.step(move_action(f,
                       std::clamp((st.object_pos[0] - st.gripper_pos[0]) * k, -1.0, 1.0),
                       std::clamp((st.object_pos[1] - st.gripper_pos[1]) * k, -1.0, 1.0),
                       std::clamp((st.object_pos[2] - st.gripper_pos[2]) * k, -1.0, 1.0),
                       -1.0));
  }
  if (dist3(f.state().gripper_pos, f.state().object_pos) < 1e-9) {
    const auto o = f.observe();
    const std::size_t rel = 3 + 6 + 1 + 3 + 3 + 6;  // relative-position offset
    CHECK(o[rel + 0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(o[rel + 1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(o[rel + 2] == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("synergy-controlled grippers project weights onto joint targets") {
  std::mt19937_64 rng(14);
  const synergy::Matrix data = synergy::make_synthetic_dataset(rng, 120, 20, 7, 0.05);
  synergy::SynergyBasis basis = synergy::fit_pca(data);

  EnvConfig cfg;
  cfg.task = env::Task::pickplace;
  cfg.gripper = env::GripperKind::shadow_like;
  cfg.synergy_dim = 7;
  GraspEnv e(cfg, basis);
  CHECK(e.action_layout().grip == 7);
  CHECK(e.state_dim() == 33 + 20);

  const std::vector<double> w(7, 0.0);
  const auto q = e.joint_targets(w);
  REQUIRE(q.size() == 20);
  for (std::size_t d = 0; d < 20; ++d) {
    CHECK(q[d] == std::clamp(basis.mean[d], -1.0, 1.0));
  }

  // Mismatched basis is rejected.
  EnvConfig bad = cfg;
  bad.gripper = env::GripperKind::barrett_like;  // 4 joints vs 20-wide basis
  CHECK_THROWS_AS(GraspEnv(bad, basis), DimensionMismatch);
}

TEST_CASE("euler head variant uses a 3-wide orientation action") {
  EnvConfig cfg;
  cfg.task = env::Task::pickplace_orient;
  cfg.orientation_head = env::OrientationHead::euler;
  GraspEnv e(cfg);
  CHECK(e.action_layout().orientation == 3);
  CHECK(e.action_dim() == 3 + 3 + 1);
  std::mt19937_64 rng(15);
  e.reset(rng);
  // A yaw command turns the gripper about z.
  const auto before = e.state().gripper_rot;
  std::vector<double> a(e.action_dim(), 0.0);
  a[3] = 0.5;  // z euler angle pi/2
  e.step(a);
  CHECK(rotation::angular_distance(before, e.state().gripper_rot) ==
        doctest::Approx(env::kMaxRotation).epsilon(1e-6));
}
