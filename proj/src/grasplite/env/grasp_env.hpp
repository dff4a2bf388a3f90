#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "grasplite/neural/actor_critic.hpp"
#include "grasplite/rotation/rotation.hpp"
#include "grasplite/synergy/synergy.hpp"

namespace grasplite::env {

enum class Task { reach, pickplace, pickplace_orient };
enum class GripperKind { jaw, barrett_like, shadow_like };
enum class ObjectKind { sphere, cube, cylinder };
enum class OrientationHead { six_d, euler };

// Fixed episode horizon.
inline constexpr std::size_t kHorizon = 50;

// Workspace geometry and motion limits (meters, radians, per step).
inline constexpr double kTableHalf = 0.5;        // 1x1 m table centered at origin, z = 0
inline constexpr double kSpawnHalf = 0.4;        // object/goal/gripper xy spawn box
inline constexpr double kMaxTranslation = 0.05;  // gripper translation per step
inline constexpr double kMaxRotation = 0.5;      // gripper rotation per step
inline constexpr double kMaxJointDelta = 0.5;    // joint motion per step
inline constexpr double kGraspRadius = 0.06;
inline constexpr double kClosureThreshold = 0.5;
inline constexpr double kFallRate = 0.05;  // detached object descent per step
inline constexpr double kGoalAirMin = 0.05, kGoalAirMax = 0.3;
inline constexpr double kGripperZMax = 0.5;
inline constexpr double kGripperSpawnZMin = 0.1, kGripperSpawnZMax = 0.4;

struct EnvConfig {
  Task task = Task::reach;
  GripperKind gripper = GripperKind::jaw;
  ObjectKind object = ObjectKind::sphere;
  OrientationHead orientation_head = OrientationHead::six_d;
  std::size_t synergy_dim = 0;     // 0 = direct joint control
  std::string synergy_basis;       // basis file path (loaded by the caller)
  double pos_threshold = 0.05;
  double orient_threshold_init = M_PI;
  double orient_threshold_min = 0.2;
  bool push = false;  // drag-while-near surrogate for table pushing
};

struct GripperSpec {
  std::string name;
  std::size_t joints = 1;
  double grasp_radius = kGraspRadius;
  double closure_threshold = kClosureThreshold;
};

GripperSpec gripper_spec(GripperKind kind);
std::size_t joint_count(GripperKind kind);
double resting_height(ObjectKind kind);

// Target pose with the thresholds that define success. The orientation
// threshold is fed by the training curriculum.
struct GoalSpec {
  std::array<double, 3> position{};
  std::optional<rotation::RotationMatrix> orientation;
  double pos_threshold = 0.05;
  double orient_threshold = M_PI;
};

struct EnvState {
  std::array<double, 3> gripper_pos{};
  rotation::RotationMatrix gripper_rot;
  std::vector<double> joints;  // normalized to [-1, 1]
  std::array<double, 3> gripper_vel{};
  std::array<double, 3> object_pos{};
  rotation::RotationMatrix object_rot;
  std::array<double, 3> object_vel{};
  bool attached = false;
  // Object pose in the gripper frame, fixed while attached.
  std::array<double, 3> attach_offset{};
  rotation::RotationMatrix attach_rot;
  std::size_t t = 0;
};

// Kinematic multi-goal grasping surrogate. Contact physics is replaced by a
// magnetic-grasp rule: the object rigidly follows the gripper whenever it was
// gripped close-by, and is released (falling straight down to its resting
// height) when the grip opens. Everything the learner consumes -- sparse
// rewards, goal spaces, observation layout, orientation control -- keeps the
// full task structure.
class GraspEnv {
 public:
  explicit GraspEnv(EnvConfig cfg,
                    std::optional<synergy::SynergyBasis> basis = std::nullopt);

  const EnvConfig& config() const { return cfg_; }
  const GripperSpec& gripper() const { return gripper_; }

  std::size_t state_dim() const;
  std::size_t goal_dim() const { return has_orientation_goal() ? 9 : 3; }
  std::size_t action_dim() const { return layout_.total(); }
  const neural::ActionLayout& action_layout() const { return layout_; }
  bool has_orientation_goal() const { return cfg_.task == Task::pickplace_orient; }

  // true = normalize; orientation entries are exempt.
  std::vector<bool> state_mask() const;
  std::vector<bool> goal_mask() const;

  double orient_threshold() const { return orient_threshold_; }
  void set_orient_threshold(double value) { orient_threshold_ = value; }

  // Samples object pose, gripper pose (above the table, palm facing down)
  // and a fresh goal; resets joints, velocities and the step counter.
  void reset(std::mt19937_64& rng);

  // Advances one step. Throws EpisodeOver past the horizon.
  void step(std::span<const double> action);

  bool done() const { return state_.t >= kHorizon; }
  const EnvState& state() const { return state_; }
  const GoalSpec& goal_spec() const { return goal_; }

  std::vector<double> observe() const;
  std::vector<double> achieved_goal() const;
  std::vector<double> goal_vector() const;

  // Sparse reward on goal-space vectors using the current thresholds; used
  // both for live steps and hindsight relabeling.
  double reward(std::span<const double> achieved, std::span<const double> goal) const;

  // Joint targets for a grip action: identity for direct control, synergy
  // superposition otherwise.
  std::vector<double> joint_targets(std::span<const double> grip_action) const;

 private:
  void sample_goal(std::mt19937_64& rng);

  EnvConfig cfg_;
  GripperSpec gripper_;
  std::optional<synergy::SynergyBasis> basis_;
  neural::ActionLayout layout_;
  double orient_threshold_;
  EnvState state_;
  GoalSpec goal_;
};

// Success test on a full goal spec (position and optional orientation).
double sparse_reward(const std::array<double, 3>& achieved_pos,
                     const std::optional<rotation::RotationMatrix>& achieved_rot,
                     const GoalSpec& goal);

Task task_from_string(const std::string& s);
GripperKind gripper_from_string(const std::string& s);
ObjectKind object_from_string(const std::string& s);
OrientationHead orientation_head_from_string(const std::string& s);
std::string to_string(Task t);
std::string to_string(GripperKind g);
std::string to_string(ObjectKind o);
std::string to_string(OrientationHead h);

}  // namespace grasplite::env
