#include "grasplite/env/grasp_env.hpp"

#include <algorithm>
#include <cmath>

#include "grasplite/errors.hpp"

namespace grasplite::env {
namespace {

using rotation::RotationMatrix;

double clamp(double v, double lo, double hi) { return std::clamp(v, lo, hi); }

double distance(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

void append(std::vector<double>& out, const std::array<double, 3>& v) {
  out.insert(out.end(), v.begin(), v.end());
}

void append_rep6d(std::vector<double>& out, const RotationMatrix& r) {
  const auto rep = rotation::encode_rotation(r);
  out.insert(out.end(), rep.x.begin(), rep.x.end());
}

RotationMatrix decode_rep6d(std::span<const double> x) {
  rotation::Rep6D rep;
  std::copy_n(x.begin(), 6, rep.x.begin());
  return rotation::recover_rotation(rep);
}

}  // namespace

GripperSpec gripper_spec(GripperKind kind) {
  switch (kind) {
    case GripperKind::jaw:
      return {"jaw", 1, kGraspRadius, kClosureThreshold};
    case GripperKind::barrett_like:
      return {"barrett_like", 4, kGraspRadius, kClosureThreshold};
    case GripperKind::shadow_like:
      return {"shadow_like", 20, kGraspRadius, kClosureThreshold};
  }
  throw ConfigError("unknown gripper kind");
}

std::size_t joint_count(GripperKind kind) { return gripper_spec(kind).joints; }

double resting_height(ObjectKind kind) {
  switch (kind) {
    case ObjectKind::sphere:
      return 0.04;  // 4 cm radius
    case ObjectKind::cube:
      return 0.025;  // 5 cm edge
    case ObjectKind::cylinder:
      return 0.04;
  }
  throw ConfigError("unknown object kind");
}

GraspEnv::GraspEnv(EnvConfig cfg, std::optional<synergy::SynergyBasis> basis)
    : cfg_(cfg),
      gripper_(gripper_spec(cfg.gripper)),
      basis_(std::move(basis)),
      orient_threshold_(cfg.orient_threshold_init) {
  if (cfg_.synergy_dim > 0) {
    if (!basis_) throw ConfigError("synergy control requested without a basis");
    if (basis_->joint_count() != gripper_.joints) {
      throw DimensionMismatch("synergy basis joint count does not match the gripper");
    }
    if (cfg_.synergy_dim > basis_->rank()) {
      throw DimensionMismatch("synergy dimension exceeds the basis rank");
    }
  }
  layout_.translation = 3;
  layout_.orientation = cfg_.orientation_head == OrientationHead::six_d ? 6 : 3;
  layout_.grip = cfg_.synergy_dim > 0 ? cfg_.synergy_dim : gripper_.joints;
  state_.joints.assign(gripper_.joints, 0.0);
  goal_.pos_threshold = cfg_.pos_threshold;
  goal_.orient_threshold = orient_threshold_;
}

std::size_t GraspEnv::state_dim() const {
  // gripper pos/rot/joints/vel, object pos/rot, relative pose, object vel
  return 3 + 6 + gripper_.joints + 3 + 3 + 6 + 3 + 6 + 3;
}

std::vector<bool> GraspEnv::state_mask() const {
  std::vector<bool> mask;
  mask.reserve(state_dim());
  auto push = [&mask](std::size_t n, bool normalized) {
    mask.insert(mask.end(), n, normalized);
  };
  push(3, true);                // gripper position
  push(6, false);               // gripper orientation
  push(gripper_.joints, true);  // joints
  push(3, true);                // gripper velocity
  push(3, true);                // object position
  push(6, false);               // object orientation
  push(3, true);                // relative position
  push(6, false);               // relative orientation
  push(3, true);                // object velocity
  return mask;
}

std::vector<bool> GraspEnv::goal_mask() const {
  std::vector<bool> mask(3, true);
  if (has_orientation_goal()) mask.insert(mask.end(), 6, false);
  return mask;
}

void GraspEnv::sample_goal(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> xy(-kSpawnHalf, kSpawnHalf);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_real_distribution<double> air(kGoalAirMin, kGoalAirMax);
  std::uniform_real_distribution<double> yaw(0.0, 2.0 * M_PI);

  goal_.position[0] = xy(rng);
  goal_.position[1] = xy(rng);
  // Half of the goals lie on the table surface, half in the air above it.
  goal_.position[2] = coin(rng) < 0.5 ? resting_height(cfg_.object) : air(rng);
  goal_.pos_threshold = cfg_.pos_threshold;
  goal_.orient_threshold = orient_threshold_;
  if (has_orientation_goal()) {
    goal_.orientation = rotation::rotation_about_z(yaw(rng));
  } else {
    goal_.orientation.reset();
  }
}

void GraspEnv::reset(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> xy(-kSpawnHalf, kSpawnHalf);
  std::uniform_real_distribution<double> yaw(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> spawn_z(kGripperSpawnZMin, kGripperSpawnZMax);

  state_.object_pos = {xy(rng), xy(rng), resting_height(cfg_.object)};
  if (has_orientation_goal()) {
    state_.object_rot = rotation::random_rotation(rng);
  } else {
    state_.object_rot = rotation::rotation_about_z(yaw(rng));
  }

  state_.gripper_pos = {xy(rng), xy(rng), spawn_z(rng)};
  // Palm facing down onto the table, random yaw.
  state_.gripper_rot =
      rotation::compose(rotation::rotation_about_z(yaw(rng)), rotation::rotation_about_x(M_PI));

  state_.joints.assign(gripper_.joints, 0.0);
  state_.gripper_vel = {0, 0, 0};
  state_.object_vel = {0, 0, 0};
  state_.attached = false;
  state_.attach_offset = {0, 0, 0};
  state_.attach_rot = RotationMatrix::identity();
  state_.t = 0;

  sample_goal(rng);
}

std::vector<double> GraspEnv::joint_targets(std::span<const double> grip_action) const {
  if (grip_action.size() != layout_.grip) {
    throw DimensionMismatch("grip action width does not match the layout");
  }
  if (cfg_.synergy_dim > 0) {
    return synergy::project_synergy(grip_action, *basis_, -1.0, 1.0);
  }
  std::vector<double> q(grip_action.begin(), grip_action.end());
  for (double& v : q) v = clamp(v, -1.0, 1.0);
  return q;
}

void GraspEnv::step(std::span<const double> action) {
  if (state_.t >= kHorizon) throw EpisodeOver("episode horizon reached; reset the env");
  const auto heads = neural::split_action(action, layout_);

  const std::array<double, 3> prev_gripper = state_.gripper_pos;
  const std::array<double, 3> prev_object = state_.object_pos;

  // Translation, clamped per step and to the workspace.
  for (std::size_t i = 0; i < 3; ++i) {
    state_.gripper_pos[i] +=
        clamp(kMaxTranslation * heads.translation[i], -kMaxTranslation, kMaxTranslation);
  }
  state_.gripper_pos[0] = clamp(state_.gripper_pos[0], -kTableHalf, kTableHalf);
  state_.gripper_pos[1] = clamp(state_.gripper_pos[1], -kTableHalf, kTableHalf);
  state_.gripper_pos[2] = clamp(state_.gripper_pos[2], 0.0, kGripperZMax);

  // Orientation: rate-limited motion toward the commanded rotation. An
  // undecodable six-number command holds the current orientation.
  if (cfg_.orientation_head == OrientationHead::six_d) {
    try {
      const RotationMatrix target = decode_rep6d(heads.orientation);
      state_.gripper_rot = rotation::rotate_towards(state_.gripper_rot, target, kMaxRotation);
    } catch (const DegenerateRepresentation&) {
    }
  } else {
    const RotationMatrix target =
        rotation::euler_zyx(M_PI * heads.orientation[0], (M_PI / 2.0) * heads.orientation[1],
                            M_PI * heads.orientation[2]);
    state_.gripper_rot = rotation::rotate_towards(state_.gripper_rot, target, kMaxRotation);
  }

  // Joints: rate-limited motion toward their targets.
  const std::vector<double> q = joint_targets(heads.grip);
  for (std::size_t j = 0; j < state_.joints.size(); ++j) {
    state_.joints[j] += clamp(q[j] - state_.joints[j], -kMaxJointDelta, kMaxJointDelta);
  }

  // Magnetic grasp rule.
  double closure = 0.0;
  for (double v : state_.joints) closure += v;
  closure /= static_cast<double>(state_.joints.size());
  const double gap = distance(state_.gripper_pos, state_.object_pos);
  if (state_.attached && closure < gripper_.closure_threshold) {
    state_.attached = false;
  }
  if (!state_.attached && closure > gripper_.closure_threshold &&
      gap < gripper_.grasp_radius) {
    state_.attached = true;
    const RotationMatrix gt = rotation::transpose(state_.gripper_rot);
    state_.attach_offset = rotation::apply(gt, {state_.object_pos[0] - state_.gripper_pos[0],
                                                state_.object_pos[1] - state_.gripper_pos[1],
                                                state_.object_pos[2] - state_.gripper_pos[2]});
    state_.attach_rot = rotation::compose(gt, state_.object_rot);
  }

  const double rest = resting_height(cfg_.object);
  if (state_.attached) {
    const auto offset = rotation::apply(state_.gripper_rot, state_.attach_offset);
    for (std::size_t i = 0; i < 3; ++i) state_.object_pos[i] = state_.gripper_pos[i] + offset[i];
    state_.object_rot = rotation::compose(state_.gripper_rot, state_.attach_rot);
    // The table is rigid: lift gripper and object together if the grasp
    // would push the object through it.
    if (state_.object_pos[2] < rest) {
      const double lift = rest - state_.object_pos[2];
      state_.object_pos[2] += lift;
      state_.gripper_pos[2] += lift;
    }
  } else {
    if (cfg_.push && gap < gripper_.grasp_radius && state_.object_pos[2] <= rest) {
      state_.object_pos[0] =
          clamp(state_.object_pos[0] + state_.gripper_pos[0] - prev_gripper[0], -kTableHalf,
                kTableHalf);
      state_.object_pos[1] =
          clamp(state_.object_pos[1] + state_.gripper_pos[1] - prev_gripper[1], -kTableHalf,
                kTableHalf);
    }
    if (state_.object_pos[2] > rest) {
      state_.object_pos[2] = std::max(rest, state_.object_pos[2] - kFallRate);
    }
  }

  for (std::size_t i = 0; i < 3; ++i) {
    state_.gripper_vel[i] = state_.gripper_pos[i] - prev_gripper[i];
    state_.object_vel[i] = state_.object_pos[i] - prev_object[i];
  }
  state_.t += 1;
}

std::vector<double> GraspEnv::observe() const {
  std::vector<double> obs;
  obs.reserve(state_dim());
  append(obs, state_.gripper_pos);
  append_rep6d(obs, state_.gripper_rot);
  obs.insert(obs.end(), state_.joints.begin(), state_.joints.end());
  append(obs, state_.gripper_vel);
  append(obs, state_.object_pos);
  append_rep6d(obs, state_.object_rot);
  const RotationMatrix gt = rotation::transpose(state_.gripper_rot);
  append(obs, rotation::apply(gt, {state_.object_pos[0] - state_.gripper_pos[0],
                                   state_.object_pos[1] - state_.gripper_pos[1],
                                   state_.object_pos[2] - state_.gripper_pos[2]}));
  append_rep6d(obs, rotation::compose(gt, state_.object_rot));
  append(obs, state_.object_vel);
  return obs;
}

std::vector<double> GraspEnv::achieved_goal() const {
  std::vector<double> ag;
  ag.reserve(goal_dim());
  if (cfg_.task == Task::reach) {
    append(ag, state_.gripper_pos);
    return ag;
  }
  append(ag, state_.object_pos);
  if (has_orientation_goal()) append_rep6d(ag, state_.object_rot);
  return ag;
}

std::vector<double> GraspEnv::goal_vector() const {
  std::vector<double> g;
  g.reserve(goal_dim());
  append(g, goal_.position);
  if (has_orientation_goal()) append_rep6d(g, *goal_.orientation);
  return g;
}

double GraspEnv::reward(std::span<const double> achieved, std::span<const double> goal) const {
  if (achieved.size() != goal_dim() || goal.size() != goal_dim()) {
    throw DimensionMismatch("goal-space vectors do not match the goal dimension");
  }
  const double dx = achieved[0] - goal[0];
  const double dy = achieved[1] - goal[1];
  const double dz = achieved[2] - goal[2];
  if (std::sqrt(dx * dx + dy * dy + dz * dz) >= cfg_.pos_threshold) return -1.0;
  if (has_orientation_goal()) {
    const RotationMatrix ra = decode_rep6d(achieved.subspan(3, 6));
    const RotationMatrix rg = decode_rep6d(goal.subspan(3, 6));
    if (rotation::angular_distance(ra, rg) >= orient_threshold_) return -1.0;
  }
  return 0.0;
}

double sparse_reward(const std::array<double, 3>& achieved_pos,
                     const std::optional<rotation::RotationMatrix>& achieved_rot,
                     const GoalSpec& goal) {
  if (distance(achieved_pos, goal.position) >= goal.pos_threshold) return -1.0;
  if (goal.orientation) {
    if (!achieved_rot) throw DimensionMismatch("goal has an orientation but achieved pose none");
    if (rotation::angular_distance(*achieved_rot, *goal.orientation) >= goal.orient_threshold) {
      return -1.0;
    }
  }
  return 0.0;
}

Task task_from_string(const std::string& s) {
  if (s == "reach") return Task::reach;
  if (s == "pickplace") return Task::pickplace;
  if (s == "pickplace_orient") return Task::pickplace_orient;
  throw ConfigError("unknown task: " + s);
}

GripperKind gripper_from_string(const std::string& s) {
  if (s == "jaw") return GripperKind::jaw;
  if (s == "barrett_like") return GripperKind::barrett_like;
  if (s == "shadow_like") return GripperKind::shadow_like;
  throw ConfigError("unknown gripper: " + s);
}

ObjectKind object_from_string(const std::string& s) {
  if (s == "sphere") return ObjectKind::sphere;
  if (s == "cube") return ObjectKind::cube;
  if (s == "cylinder") return ObjectKind::cylinder;
  throw ConfigError("unknown object: " + s);
}

OrientationHead orientation_head_from_string(const std::string& s) {
  if (s == "six_d") return OrientationHead::six_d;
  if (s == "euler") return OrientationHead::euler;
  throw ConfigError("unknown orientation head: " + s);
}

std::string to_string(Task t) {
  switch (t) {
    case Task::reach: return "reach";
    case Task::pickplace: return "pickplace";
    case Task::pickplace_orient: return "pickplace_orient";
  }
  return "?";
}
std::string to_string(GripperKind g) {
  switch (g) {
    case GripperKind::jaw: return "jaw";
    case GripperKind::barrett_like: return "barrett_like";
    case GripperKind::shadow_like: return "shadow_like";
  }
  return "?";
}
std::string to_string(ObjectKind o) {
  switch (o) {
    case ObjectKind::sphere: return "sphere";
    case ObjectKind::cube: return "cube";
    case ObjectKind::cylinder: return "cylinder";
  }
  return "?";
}
std::string to_string(OrientationHead h) {
  return h == OrientationHead::six_d ? "six_d" : "euler";
}

}  // namespace grasplite::env
