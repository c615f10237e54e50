#include "rwgc/dynamics.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "rwgc/rng.hpp"

namespace rwgc {

namespace {
constexpr double pi = 3.14159265358979323846;
}

void ObstacleSpec::validate() const {
  if (!(radius > 0.0)) throw std::invalid_argument("obstacle: radius must be > 0");
  if (!(link_thickness > 0.0))
    throw std::invalid_argument("obstacle: link_thickness must be > 0");
  if (discretization_points < 2)
    throw std::invalid_argument("obstacle: discretization_points must be >= 2");
}

RewardSpec RewardSpec::dense(double distance_weight, double control_weight) {
  RewardSpec r;
  r.kind = Kind::dense;
  r.distance_weight = distance_weight;
  r.control_weight = control_weight;
  return r;
}

RewardSpec RewardSpec::sparse() {
  RewardSpec r;
  r.kind = Kind::sparse;
  return r;
}

RewardSpec RewardSpec::obstacle_dense(double distance_weight, double control_weight,
                                      double collision_weight, double proximity_weight,
                                      double proximity_falloff) {
  RewardSpec r;
  r.kind = Kind::obstacle_dense;
  r.distance_weight = distance_weight;
  r.control_weight = control_weight;
  r.collision_weight = collision_weight;
  r.proximity_weight = proximity_weight;
  r.proximity_falloff = proximity_falloff;
  return r;
}

void RewardSpec::validate() const {
  if (!(distance_weight > 0.0) || !(control_weight > 0.0))
    throw std::invalid_argument("reward: distance/control weights must be > 0");
  if (kind == Kind::obstacle_dense) {
    if (!(collision_weight > 0.0) || !(proximity_weight > 0.0) ||
        !(proximity_falloff > 0.0))
      throw std::invalid_argument("reward: obstacle weights must be > 0");
  }
}

double ArmTask::total_length() const {
  double sum = 0.0;
  for (double l : link_lengths) sum += l;
  return sum;
}

double ArmTask::mass(int link) const {
  if (!link_masses.empty()) return link_masses[static_cast<std::size_t>(link)];
  return link_lengths[static_cast<std::size_t>(link)];  // 1 kg per meter
}

void ArmTask::validate() const {
  const int n = dof();
  if (n < 1 || n > 2)
    throw std::invalid_argument("task: supports 1- and 2-link arms only");
  if (!link_masses.empty() && link_masses.size() != link_lengths.size())
    throw std::invalid_argument("task: link_masses must match link_lengths");
  for (double l : link_lengths)
    if (!(l > 0.0)) throw std::invalid_argument("task: link lengths must be > 0");
  for (double m : link_masses)
    if (!(m > 0.0)) throw std::invalid_argument("task: link masses must be > 0");
  if (!(goal_threshold > 0.0))
    throw std::invalid_argument("task: goal_threshold must be > 0");
  if (max_steps < 1) throw std::invalid_argument("task: max_steps must be >= 1");
  if (!(dt > 0.0)) throw std::invalid_argument("task: dt must be > 0");
  if (!(torque_limit > 0.0))
    throw std::invalid_argument("task: torque_limit must be > 0");
  if (!(velocity_limit > 0.0))
    throw std::invalid_argument("task: velocity_limit must be > 0");
  reward.validate();
  const bool wants_obstacle = reward.kind == RewardSpec::Kind::obstacle_dense;
  if (wants_obstacle != obstacle.has_value())
    throw std::invalid_argument(
        "task: obstacle present iff reward kind is the obstacle variant");
  if (obstacle) obstacle->validate();
}

Vec2 joint_position(const ArmTask& task, std::span<const double> q, int joint) {
  Vec2 p;
  double angle = 0.0;
  for (int i = 0; i < joint; ++i) {
    angle += q[static_cast<std::size_t>(i)];
    p.x += task.link_lengths[static_cast<std::size_t>(i)] * std::cos(angle);
    p.y += task.link_lengths[static_cast<std::size_t>(i)] * std::sin(angle);
  }
  return p;
}

Vec2 forward_kinematics(const ArmTask& task, std::span<const double> q) {
  return joint_position(task, q, task.dof());
}

namespace {

// Inertia matrix of the rod chain. 1-link: scalar m*l^2/3 about the pivot.
// 2-link: the standard planar 2R closed form with centroidal rod inertias.
void mass_matrix(const ArmTask& task, std::span<const double> q, double m_out[2][2]) {
  const int n = task.dof();
  if (n == 1) {
    const double l = task.link_lengths[0];
    const double m = task.mass(0);
    m_out[0][0] = m * l * l / 3.0;
    return;
  }
  const double l1 = task.link_lengths[0];
  const double l2 = task.link_lengths[1];
  const double m1 = task.mass(0);
  const double m2 = task.mass(1);
  const double lc1 = 0.5 * l1;
  const double lc2 = 0.5 * l2;
  const double i1 = m1 * l1 * l1 / 12.0;
  const double i2 = m2 * l2 * l2 / 12.0;
  const double c2 = std::cos(q[1]);

  m_out[0][0] = i1 + i2 + m1 * lc1 * lc1 +
                m2 * (l1 * l1 + lc2 * lc2 + 2.0 * l1 * lc2 * c2);
  m_out[0][1] = i2 + m2 * (lc2 * lc2 + l1 * lc2 * c2);
  m_out[1][0] = m_out[0][1];
  m_out[1][1] = i2 + m2 * lc2 * lc2;
}

}  // namespace

void joint_accelerations(const ArmTask& task, std::span<const double> q,
                         std::span<const double> qdot,
                         std::span<const double> torque,
                         std::span<double> qddot) {
  const int n = task.dof();
  double m[2][2];
  mass_matrix(task, q, m);
  if (n == 1) {
    qddot[0] = torque[0] / m[0][0];
    return;
  }
  // Coriolis/centrifugal vector for the planar 2R chain.
  const double l1 = task.link_lengths[0];
  const double lc2 = 0.5 * task.link_lengths[1];
  const double h = task.mass(1) * l1 * lc2 * std::sin(q[1]);
  const double c0 = -h * qdot[1] * (2.0 * qdot[0] + qdot[1]);
  const double c1 = h * qdot[0] * qdot[0];

  const double b0 = torque[0] - c0;
  const double b1 = torque[1] - c1;
  const double det = m[0][0] * m[1][1] - m[0][1] * m[0][1];
  qddot[0] = (m[1][1] * b0 - m[0][1] * b1) / det;
  qddot[1] = (m[0][0] * b1 - m[0][1] * b0) / det;
}

double kinetic_energy(const ArmTask& task, std::span<const double> q,
                      std::span<const double> qdot) {
  double m[2][2];
  mass_matrix(task, q, m);
  if (task.dof() == 1) return 0.5 * m[0][0] * qdot[0] * qdot[0];
  return 0.5 * (m[0][0] * qdot[0] * qdot[0] + 2.0 * m[0][1] * qdot[0] * qdot[1] +
                m[1][1] * qdot[1] * qdot[1]);
}

ArmState reset(const ArmTask& task, std::uint64_t episode_seed) {
  const int n = task.dof();
  Rng rng(episode_seed);
  ArmState state;
  for (int i = 0; i < n; ++i) state.q[static_cast<std::size_t>(i)] = rng.next_uniform(-pi, pi);

  const auto sample_goal = [&]() -> Vec2 {
    if (n == 1) {
      const double phi = rng.next_uniform(-pi, pi);
      const double l = task.link_lengths[0];
      return {l * std::cos(phi), l * std::sin(phi)};
    }
    const double r_min = std::abs(task.link_lengths[0] - task.link_lengths[1]);
    const double r_max = task.link_lengths[0] + task.link_lengths[1];
    // Uniform by area over the annulus.
    const double u = rng.next_double();
    const double r = std::sqrt(r_min * r_min + u * (r_max * r_max - r_min * r_min));
    const double phi = rng.next_uniform(-pi, pi);
    return {r * std::cos(phi), r * std::sin(phi)};
  };

  const Vec2 ee = forward_kinematics(task, std::span<const double>(state.q.data(),
                                                                   static_cast<std::size_t>(n)));
  state.goal = sample_goal();
  for (int attempt = 0; attempt < 100 && distance(state.goal, ee) < task.goal_threshold;
       ++attempt) {
    state.goal = sample_goal();
  }
  return state;
}

double reward_dense(Vec2 ee, Vec2 goal, std::span<const double> action,
                    double distance_weight, double control_weight) {
  const double dx = ee.x - goal.x;
  const double dy = ee.y - goal.y;
  double action_sq = 0.0;
  for (double a : action) action_sq += a * a;
  return -distance_weight * (dx * dx + dy * dy) - control_weight * action_sq;
}

double reward_sparse(Vec2 ee, Vec2 goal, double threshold) {
  return distance(ee, goal) < threshold ? 0.0 : -1.0;
}

double link_obstacle_distance(const ArmTask& task, std::span<const double> q,
                              int link_index) {
  if (!task.obstacle) throw std::logic_error("link_obstacle_distance: no obstacle configured");
  if (link_index < 1 || link_index > task.dof())
    throw std::invalid_argument("link_obstacle_distance: link index out of range");
  const ObstacleSpec& obs = *task.obstacle;
  const Vec2 a = joint_position(task, q, link_index - 1);
  const Vec2 b = joint_position(task, q, link_index);
  const double margin = obs.radius + 0.5 * obs.link_thickness;
  const int pts = obs.discretization_points;

  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= pts; ++k) {
    const double t = static_cast<double>(k) / pts;
    const Vec2 p{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
    best = std::min(best, distance(p, obs.center) - margin);
  }
  return std::max(0.0, best);
}

namespace {

struct ObstacleTerms {
  double proximity_sum = 0.0;  // sum of exp(-alpha * d_i)
  bool collision = false;      // some d_i == 0
};

ObstacleTerms obstacle_terms(const ArmTask& task, std::span<const double> q) {
  ObstacleTerms terms;
  for (int i = 1; i <= task.dof(); ++i) {
    const double d = link_obstacle_distance(task, q, i);
    terms.proximity_sum += std::exp(-task.reward.proximity_falloff * d);
    if (d == 0.0) terms.collision = true;
  }
  return terms;
}

}  // namespace

double reward_obstacle(Vec2 ee, Vec2 goal, std::span<const double> action,
                       std::span<const double> q, const ArmTask& task) {
  const ObstacleTerms terms = obstacle_terms(task, q);
  double r = reward_dense(ee, goal, action, task.reward.distance_weight,
                          task.reward.control_weight);
  if (terms.collision) r -= task.reward.collision_weight;
  r -= task.reward.proximity_weight * terms.proximity_sum;
  return r;
}

StepResult step(const ArmTask& task, const ArmState& state,
                std::span<const double> action) {
  if (state.terminated) throw std::logic_error("step: episode already terminated");
  const int n = task.dof();
  if (static_cast<int>(action.size()) != n)
    throw std::invalid_argument("step: action length != dof");

  StepResult result;
  ArmState& next = result.state;
  next = state;

  double torque[2];
  for (int i = 0; i < n; ++i) torque[i] = action[static_cast<std::size_t>(i)] * task.torque_limit;
  const std::span<const double> tau(torque, static_cast<std::size_t>(n));

  // Explicit midpoint over two substeps, torque held across the control
  // interval. Zero-torque kinetic-energy drift must stay under 1% per
  // episode; first-order schemes miss that by several x at this dt.
  constexpr int substeps = 2;
  const double h = task.dt / substeps;
  double q[2], qdot[2], mid_q[2], mid_qdot[2], qddot[2];
  for (int i = 0; i < n; ++i) {
    q[i] = state.q[static_cast<std::size_t>(i)];
    qdot[i] = state.qdot[static_cast<std::size_t>(i)];
  }
  for (int s = 0; s < substeps; ++s) {
    joint_accelerations(task, std::span<const double>(q, static_cast<std::size_t>(n)),
                        std::span<const double>(qdot, static_cast<std::size_t>(n)), tau,
                        std::span<double>(qddot, static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) {
      mid_q[i] = q[i] + 0.5 * h * qdot[i];
      mid_qdot[i] = qdot[i] + 0.5 * h * qddot[i];
    }
    joint_accelerations(task, std::span<const double>(mid_q, static_cast<std::size_t>(n)),
                        std::span<const double>(mid_qdot, static_cast<std::size_t>(n)), tau,
                        std::span<double>(qddot, static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) {
      q[i] += h * mid_qdot[i];
      qdot[i] += h * qddot[i];
    }
  }
  for (int i = 0; i < n; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    next.qdot[k] = std::clamp(qdot[i], -task.velocity_limit, task.velocity_limit);
    next.q[k] = q[i];
  }
  next.steps_taken = state.steps_taken + 1;

  const std::span<const double> q_next(next.q.data(), static_cast<std::size_t>(n));
  const Vec2 ee = forward_kinematics(task, q_next);

  switch (task.reward.kind) {
    case RewardSpec::Kind::dense:
      result.reward = reward_dense(ee, next.goal, action, task.reward.distance_weight,
                                   task.reward.control_weight);
      if (next.steps_taken >= task.max_steps) {
        next.terminated = true;
        next.cause = TerminationCause::step_limit;
      }
      break;
    case RewardSpec::Kind::sparse:
      result.reward = reward_sparse(ee, next.goal, task.goal_threshold);
      if (next.steps_taken >= task.max_steps) {
        next.terminated = true;
        next.cause = TerminationCause::step_limit;
      }
      break;
    case RewardSpec::Kind::obstacle_dense: {
      const ObstacleTerms terms = obstacle_terms(task, q_next);
      result.reward = reward_dense(ee, next.goal, action, task.reward.distance_weight,
                                   task.reward.control_weight) -
                      task.reward.proximity_weight * terms.proximity_sum -
                      (terms.collision ? task.reward.collision_weight : 0.0);
      if (terms.collision) {
        next.terminated = true;
        next.cause = TerminationCause::collision;
      } else if (distance(ee, next.goal) <= task.goal_threshold) {
        next.terminated = true;
        next.cause = TerminationCause::goal_reached;
      } else if (next.steps_taken >= task.max_steps) {
        next.terminated = true;
        next.cause = TerminationCause::step_limit;
      }
      break;
    }
  }
  return result;
}

int observation_dim(const ArmTask& task) { return 3 * task.dof() + 2; }

void observe(const ArmTask& task, const ArmState& state, std::span<double> out) {
  const int n = task.dof();
  if (static_cast<int>(out.size()) != observation_dim(task))
    throw std::invalid_argument("observe: output span has wrong length");
  const double scale = task.total_length();
  for (int i = 0; i < n; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    out[k] = std::cos(state.q[k]);
    out[static_cast<std::size_t>(n) + k] = std::sin(state.q[k]);
    out[2 * static_cast<std::size_t>(n) + k] = state.qdot[k] / task.velocity_limit;
  }
  out[3 * static_cast<std::size_t>(n)] = state.goal.x / scale;
  out[3 * static_cast<std::size_t>(n) + 1] = state.goal.y / scale;
}

std::vector<double> observe(const ArmTask& task, const ArmState& state) {
  std::vector<double> out(static_cast<std::size_t>(observation_dim(task)));
  observe(task, state, out);
  return out;
}

const char* to_string(TerminationCause c) {
  switch (c) {
    case TerminationCause::none: return "none";
    case TerminationCause::collision: return "collision";
    case TerminationCause::goal_reached: return "goal_reached";
    case TerminationCause::step_limit: return "step_limit";
  }
  return "none";
}

const char* to_string(RewardSpec::Kind k) {
  switch (k) {
    case RewardSpec::Kind::dense: return "dense";
    case RewardSpec::Kind::sparse: return "sparse";
    case RewardSpec::Kind::obstacle_dense: return "obstacle";
  }
  return "dense";
}

RewardSpec::Kind reward_kind_from_string(std::string_view s) {
  if (s == "dense") return RewardSpec::Kind::dense;
  if (s == "sparse") return RewardSpec::Kind::sparse;
  if (s == "obstacle") return RewardSpec::Kind::obstacle_dense;
  throw std::invalid_argument("unknown reward kind: " + std::string(s));
}

}  // namespace rwgc
