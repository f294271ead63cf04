#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ra/geometry.hpp"
#include "ra/rng.hpp"
#include "ra/types.hpp"

namespace ra {

enum class Integrator { euler, rk4 };

// A state is terminal when it sits in the target set or the failure set.
inline bool is_terminal(const Margins& m) { return m.l <= 0.0 || m.g > 0.0; }

// Deterministic discrete-action environment with a fixed time step.
// Immutable after construction; step/margins are pure.
class Environment {
 public:
  virtual ~Environment() = default;

  const std::string& name() const { return name_; }
  int state_dim() const { return static_cast<int>(lower_.size()); }
  int action_count() const { return static_cast<int>(actions_.size()); }
  const std::vector<Vec>& actions() const { return actions_; }
  double dt() const { return dt_; }
  int horizon() const { return horizon_; }
  Integrator integrator() const { return integrator_; }
  const Vec& domain_lower() const { return lower_; }
  const Vec& domain_upper() const { return upper_; }
  const std::vector<bool>& periodic() const { return periodic_; }

  // Factorization of the action set for pursuit-evasion games; single-agent
  // environments report all actions as the first player's.
  virtual int attacker_actions() const { return action_count(); }
  virtual int defender_actions() const { return 1; }

  virtual Vec dynamics(const Vec& s, const Vec& u) const = 0;
  virtual Margins margins(const Vec& s) const = 0;

  // One integrator step of length dt.  u must be a member of the control
  // set (throws std::invalid_argument otherwise).
  Vec step(const Vec& s, const Vec& u) const;
  Vec step(const Vec& s, int action_index) const;

  // Uniform sample over the domain box (angles over their declared range).
  virtual Vec sample_state(Rng& rng) const;

  // Index of u in the control set, or -1.
  int action_index_of(const Vec& u) const;

 protected:
  Vec integrate(const Vec& s, const Vec& u) const;

  std::string name_;
  std::vector<Vec> actions_;
  double dt_ = 0.05;
  int horizon_ = 200;
  Integrator integrator_ = Integrator::euler;
  Vec lower_, upper_;
  std::vector<bool> periodic_;
};

// ---------------------------------------------------------------------------
// Point particle with constant upward drift (2-D).
//   x' = u * vx,  y' = vy,  u in {-1, 0, +1}
// Failure: leaving the outer box or entering an obstacle box.  Margins are
// signed L-infinity box distances.
// ---------------------------------------------------------------------------

struct ParticleLayout {
  BoxSpec domain;
  BoxSpec target;
  std::vector<BoxSpec> obstacles;
};

// Default layout: target strip at the top, three obstacle blocks en route.
ParticleLayout particle_three_obstacle_layout();
// Variant with two thin staggered slabs; almost every successful pass skims
// the failure set.
ParticleLayout particle_two_thin_obstacle_layout();

struct ParticleParams {
  double vx = 2.0;
  double vy = 2.0;
  double dt = 0.05;
  int horizon = 150;
  ParticleLayout layout = particle_three_obstacle_layout();
};

class ParticleEnv : public Environment {
 public:
  explicit ParticleEnv(ParticleParams params = {});
  Vec dynamics(const Vec& s, const Vec& u) const override;
  Margins margins(const Vec& s) const override;
  const ParticleParams& params() const { return params_; }

 private:
  ParticleParams params_;
};

// ---------------------------------------------------------------------------
// Dubins car in a disk (3-D: x, y, heading).
//   x' = v cos(th),  y' = v sin(th),  th' = u,  u in {-w, 0, +w}
// Target: inner disk of radius r.  Failure: leaving the disk of radius R.
// ---------------------------------------------------------------------------

struct DubinsParams {
  double v = 0.5;
  double omega = 0.833;  // high-turn-rate set
  double R = 1.0;
  double r = 0.5;
  double dt = 0.12;
  int horizon = 120;
  double margin = 0.1;  // grid box extends to R + margin
};

DubinsParams dubins_high_turn();  // v=0.5, w=0.833, R=1, r=0.5
DubinsParams dubins_low_turn();   // v=0.5, w=0.667, R=1, r=0.4

class DubinsEnv : public Environment {
 public:
  explicit DubinsEnv(DubinsParams params = {});
  Vec dynamics(const Vec& s, const Vec& u) const override;
  Margins margins(const Vec& s) const override;
  const DubinsParams& params() const { return params_; }

 private:
  DubinsParams params_;
};

// ---------------------------------------------------------------------------
// Planar lander (6-D: x, y, th, vx, vy, w), actions {noop, left, right, main}.
// Rigid body under gravity; side engines add lateral thrust and torque, the
// main engine thrusts along the body axis.  Failure: leaving the flyable
// polygon (terrain + screen edges).  Target: a box above the landing pad.
// Margins are signed Euclidean distances in the x-y plane.
// ---------------------------------------------------------------------------

struct LanderParams {
  double gravity = 1.0;
  double main_accel = 2.0;
  double side_accel = 0.4;
  double turn_accel = 4.0;
  double dt = 0.05;
  int horizon = 240;
  double x_half = 1.0;
  double y_top = 2.0;
  double v_bound = 2.0;
  double w_bound = 2.0;
  // Terrain polyline, left edge to right edge.
  std::vector<Eigen::Vector2d> terrain = {
      {-1.0, 0.55}, {-0.55, 0.35}, {-0.15, 0.2},
      {0.45, 0.2},  {0.75, 0.45},  {1.0, 0.4}};
  BoxSpec target{Vec{{0.15, 0.325}}, Vec{{0.5, 0.2}}};
};

class LanderEnv : public Environment {
 public:
  explicit LanderEnv(LanderParams params = {});
  Vec dynamics(const Vec& s, const Vec& u) const override;
  Margins margins(const Vec& s) const override;
  const LanderParams& params() const { return params_; }
  const Polygon& flyable() const { return flyable_; }

 private:
  LanderParams params_;
  Polygon flyable_;
};

// ---------------------------------------------------------------------------
// Attack-defense game (6-D): two identical Dubins cars.  The attacker tries
// to reach the inner disk of radius r while staying in the disk of radius R
// and out of the defender's capture radius beta.  Joint action = (attacker
// turn, defender turn), attacker-major order.
// ---------------------------------------------------------------------------

struct AttackDefenseParams {
  double v = 0.75;
  double omega = 3.0;
  double R = 1.0;
  double r = 0.5;
  double beta = 0.25;
  double dt = 0.05;
  int horizon = 100;
};

class AttackDefenseEnv : public Environment {
 public:
  explicit AttackDefenseEnv(AttackDefenseParams params = {});
  Vec dynamics(const Vec& s, const Vec& u) const override;
  Margins margins(const Vec& s) const override;
  // Attacker position uniform on the ring r <= |p| <= R, defender uniform
  // on the disk |p| <= R, headings uniform.
  Vec sample_state(Rng& rng) const override;
  int attacker_actions() const override { return 3; }
  int defender_actions() const override { return 3; }
  const AttackDefenseParams& params() const { return params_; }

 private:
  AttackDefenseParams params_;
};

}  // namespace ra
