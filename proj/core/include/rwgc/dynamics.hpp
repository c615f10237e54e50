#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace rwgc {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Fixed disc obstacle; links are treated as capsules of the given thickness
// sampled at discretization_points+1 points along each segment.
struct ObstacleSpec {
  Vec2 center{0.5, 0.5};
  double radius = 0.02;
  double link_thickness = 0.05;
  int discretization_points = 50;

  void validate() const;
};

struct RewardSpec {
  enum class Kind { dense, sparse, obstacle_dense };
  Kind kind = Kind::dense;
  double distance_weight = 1.0;    // squared end-effector error
  double control_weight = 1.0;     // squared action
  double collision_weight = 1e3;   // flat collision penalty (obstacle task)
  double proximity_weight = 5.0;   // exp proximity penalty (obstacle task)
  double proximity_falloff = 2.5;  // exponent scale on link-obstacle distance

  static RewardSpec dense(double distance_weight = 1.0, double control_weight = 1.0);
  static RewardSpec sparse();
  static RewardSpec obstacle_dense(double distance_weight = 1.0,
                                   double control_weight = 1.0,
                                   double collision_weight = 1e3,
                                   double proximity_weight = 5.0,
                                   double proximity_falloff = 2.5);
  void validate() const;
};

enum class TerminationCause { none, collision, goal_reached, step_limit };

// Torque-controlled planar arm on a horizontal frictionless plane: no
// gravity, no friction, no end-effector load. Links are uniform thin rods;
// masses default to 1 kg/m of length when left empty.
struct ArmTask {
  std::vector<double> link_lengths;        // meters, 1 or 2 links
  std::vector<double> link_masses;         // kg; empty = density default
  RewardSpec reward;
  int max_steps = 50;
  double goal_threshold = 0.05;            // meters
  double dt = 0.05;                        // seconds
  double torque_limit = 1.0;               // N*m per joint
  double velocity_limit = 8.0;             // rad/s per joint
  std::optional<ObstacleSpec> obstacle;

  int dof() const { return static_cast<int>(link_lengths.size()); }
  double total_length() const;
  double mass(int link) const;             // resolves the density default
  void validate() const;
};

struct ArmState {
  std::array<double, 2> q{};     // joint angles, rad (first dof() entries)
  std::array<double, 2> qdot{};  // joint velocities, rad/s
  Vec2 goal{};
  int steps_taken = 0;
  bool terminated = false;
  TerminationCause cause = TerminationCause::none;
};

// Episode start: q ~ U(-pi, pi)^n, zero velocity, goal uniform over the
// reachable set (circle for 1 link, annulus by area for 2 links). Goals
// closer than goal_threshold to the initial end-effector are redrawn a
// bounded number of times.
ArmState reset(const ArmTask& task, std::uint64_t episode_seed);

Vec2 forward_kinematics(const ArmTask& task, std::span<const double> q);

// Endpoint of link `joint` (1-based); joint 0 is the fixed base.
Vec2 joint_position(const ArmTask& task, std::span<const double> q, int joint);

struct StepResult {
  ArmState state;
  double reward = 0.0;
};

// One control step: torque = action * torque_limit, M(q)qdd + C(q,qd)qd = tau
// solved in closed form and integrated over dt by explicit midpoint (two
// substeps), velocities clamped to the limit afterwards, reward evaluated on
// the post-step state. Throws std::logic_error on a terminated state.
StepResult step(const ArmTask& task, const ArmState& state,
                std::span<const double> action);

double reward_dense(Vec2 ee, Vec2 goal, std::span<const double> action,
                    double distance_weight, double control_weight);
double reward_sparse(Vec2 ee, Vec2 goal, double threshold);

// Clamped distance between link `link_index` (1-based) and the obstacle disc,
// sampled at discretization_points+1 points. 0 means collision.
double link_obstacle_distance(const ArmTask& task, std::span<const double> q,
                              int link_index);

double reward_obstacle(Vec2 ee, Vec2 goal, std::span<const double> action,
                       std::span<const double> q, const ArmTask& task);

// Observation layout: [cos q_i | sin q_i | qdot_i / velocity_limit |
// goal / total_length], length 3n + 2, every component in [-1, 1].
std::vector<double> observe(const ArmTask& task, const ArmState& state);
void observe(const ArmTask& task, const ArmState& state, std::span<double> out);
int observation_dim(const ArmTask& task);

// Exposed for reference integrators and energy checks in tests.
void joint_accelerations(const ArmTask& task, std::span<const double> q,
                         std::span<const double> qdot,
                         std::span<const double> torque,
                         std::span<double> qddot);
double kinetic_energy(const ArmTask& task, std::span<const double> q,
                      std::span<const double> qdot);

const char* to_string(TerminationCause c);
const char* to_string(RewardSpec::Kind k);
RewardSpec::Kind reward_kind_from_string(std::string_view s);

}  // namespace rwgc
