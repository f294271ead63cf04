#include "ra/environment.hpp"

#include <cmath>
#include <stdexcept>

namespace ra {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

// ---------------------------------------------------------------------------
// Base
// ---------------------------------------------------------------------------

Vec Environment::integrate(const Vec& s, const Vec& u) const {
  if (integrator_ == Integrator::euler) return s + dt_ * dynamics(s, u);
  Vec k1 = dynamics(s, u);
  Vec k2 = dynamics(s + 0.5 * dt_ * k1, u);
  Vec k3 = dynamics(s + 0.5 * dt_ * k2, u);
  Vec k4 = dynamics(s + dt_ * k3, u);
  return s + (dt_ / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Vec Environment::step(const Vec& s, const Vec& u) const {
  if (s.size() != state_dim())
    throw std::invalid_argument(name_ + ": step: state has dimension " +
                                std::to_string(s.size()) + ", expected " +
                                std::to_string(state_dim()));
  if (action_index_of(u) < 0)
    throw std::invalid_argument(name_ + ": step: control is not a member of the control set");
  return integrate(s, u);
}

Vec Environment::step(const Vec& s, int action_index) const {
  if (action_index < 0 || action_index >= action_count())
    throw std::invalid_argument(name_ + ": step: action index " +
                                std::to_string(action_index) + " out of range");
  if (s.size() != state_dim())
    throw std::invalid_argument(name_ + ": step: state has dimension " +
                                std::to_string(s.size()) + ", expected " +
                                std::to_string(state_dim()));
  return integrate(s, actions_[action_index]);
}

int Environment::action_index_of(const Vec& u) const {
  for (int i = 0; i < action_count(); ++i) {
    if (actions_[i].size() == u.size() && (actions_[i] - u).lpNorm<Eigen::Infinity>() == 0.0)
      return i;
  }
  return -1;
}

Vec Environment::sample_state(Rng& rng) const {
  Vec s(state_dim());
  for (int i = 0; i < state_dim(); ++i) s[i] = rng.uniform(lower_[i], upper_[i]);
  return s;
}

// ---------------------------------------------------------------------------
// Particle
// ---------------------------------------------------------------------------

ParticleLayout particle_three_obstacle_layout() {
  ParticleLayout layout;
  layout.domain = {Vec{{0.0, 4.0}}, Vec{{4.0, 12.0}}};
  layout.target = {Vec{{0.0, 9.0}}, Vec{{2.0, 2.0}}};
  layout.obstacles = {{Vec{{-1.25, 2.0}}, Vec{{1.5, 1.5}}},
                      {Vec{{1.25, 2.0}}, Vec{{1.5, 1.5}}},
                      {Vec{{0.0, 5.5}}, Vec{{2.0, 1.5}}}};
  return layout;
}

ParticleLayout particle_two_thin_obstacle_layout() {
  ParticleLayout layout;
  layout.domain = {Vec{{0.0, 4.0}}, Vec{{4.0, 12.0}}};
  layout.target = {Vec{{0.0, 9.0}}, Vec{{2.0, 2.0}}};
  layout.obstacles = {{Vec{{-0.85, 3.5}}, Vec{{2.3, 0.3}}},
                      {Vec{{0.85, 6.0}}, Vec{{2.3, 0.3}}}};
  return layout;
}

ParticleEnv::ParticleEnv(ParticleParams params) : params_(std::move(params)) {
  name_ = "particle";
  dt_ = params_.dt;
  horizon_ = params_.horizon;
  integrator_ = Integrator::euler;
  actions_ = {Vec{{-1.0}}, Vec{{0.0}}, Vec{{1.0}}};
  lower_ = params_.layout.domain.lower();
  upper_ = params_.layout.domain.upper();
  periodic_ = {false, false};
}

Vec ParticleEnv::dynamics(const Vec&, const Vec& u) const {
  return Vec{{u[0] * params_.vx, params_.vy}};
}

Margins ParticleEnv::margins(const Vec& s) const {
  if (s.size() != 2) throw std::invalid_argument("particle: margins: state must be 2-D");
  Margins m;
  m.l = box_margin_linf(s, params_.layout.target);
  // Positive outside the outer box, or inside any obstacle.
  double g = box_margin_linf(s, params_.layout.domain);
  for (const auto& box : params_.layout.obstacles)
    g = std::max(g, -box_margin_linf(s, box));
  m.g = g;
  return m;
}

// ---------------------------------------------------------------------------
// Dubins car
// ---------------------------------------------------------------------------

DubinsParams dubins_high_turn() { return DubinsParams{}; }

DubinsParams dubins_low_turn() {
  DubinsParams p;
  p.omega = 0.667;
  p.r = 0.4;
  return p;
}

DubinsEnv::DubinsEnv(DubinsParams params) : params_(params) {
  name_ = "dubins";
  dt_ = params_.dt;
  horizon_ = params_.horizon;
  integrator_ = Integrator::rk4;
  actions_ = {Vec{{-params_.omega}}, Vec{{0.0}}, Vec{{params_.omega}}};
  double ext = params_.R + params_.margin;
  lower_ = Vec{{-ext, -ext, 0.0}};
  upper_ = Vec{{ext, ext, kTwoPi}};
  periodic_ = {false, false, true};
}

Vec DubinsEnv::dynamics(const Vec& s, const Vec& u) const {
  return Vec{{params_.v * std::cos(s[2]), params_.v * std::sin(s[2]), u[0]}};
}

Margins DubinsEnv::margins(const Vec& s) const {
  if (s.size() != 3) throw std::invalid_argument("dubins: margins: state must be 3-D");
  double rho = s.head<2>().norm();
  return {rho - params_.r, rho - params_.R};
}

// ---------------------------------------------------------------------------
// Lander
// ---------------------------------------------------------------------------

LanderEnv::LanderEnv(LanderParams params) : params_(std::move(params)) {
  name_ = "lander";
  dt_ = params_.dt;
  horizon_ = params_.horizon;
  integrator_ = Integrator::rk4;
  // Actions: noop, left engine, right engine, main engine.
  actions_ = {Vec{{0.0}}, Vec{{1.0}}, Vec{{2.0}}, Vec{{3.0}}};
  double pi = kTwoPi / 2.0;
  lower_ = Vec{{-params_.x_half, 0.0, -pi, -params_.v_bound, -params_.v_bound,
                -params_.w_bound}};
  upper_ = Vec{{params_.x_half, params_.y_top, pi, params_.v_bound,
                params_.v_bound, params_.w_bound}};
  periodic_ = {false, false, true, false, false, false};
  // Flyable region: screen edges above the terrain polyline.
  flyable_.vertices.emplace_back(-params_.x_half, params_.y_top);
  for (const auto& v : params_.terrain) flyable_.vertices.emplace_back(v);
  flyable_.vertices.emplace_back(params_.x_half, params_.y_top);
}

Vec LanderEnv::dynamics(const Vec& s, const Vec& u) const {
  double th = s[2];
  Eigen::Vector2d body_up(-std::sin(th), std::cos(th));
  Eigen::Vector2d body_right(std::cos(th), std::sin(th));
  Eigen::Vector2d acc(0.0, -params_.gravity);
  double alpha = 0.0;
  int a = static_cast<int>(u[0]);
  if (a == 1) {  // left engine pushes right, torques counter-clockwise
    acc += params_.side_accel * body_right;
    alpha = params_.turn_accel;
  } else if (a == 2) {
    acc -= params_.side_accel * body_right;
    alpha = -params_.turn_accel;
  } else if (a == 3) {
    acc += params_.main_accel * body_up;
  }
  return Vec{{s[3], s[4], s[5], acc.x(), acc.y(), alpha}};
}

Margins LanderEnv::margins(const Vec& s) const {
  if (s.size() != 6) throw std::invalid_argument("lander: margins: state must be 6-D");
  Eigen::Vector2d p(s[0], s[1]);
  Margins m;
  m.l = box_sdf_l2(Vec{{s[0], s[1]}}, params_.target);
  m.g = polygon_sdf(flyable_, p);
  return m;
}

// ---------------------------------------------------------------------------
// Attack-defense game
// ---------------------------------------------------------------------------

AttackDefenseEnv::AttackDefenseEnv(AttackDefenseParams params) : params_(params) {
  name_ = "attack-defense";
  dt_ = params_.dt;
  horizon_ = params_.horizon;
  integrator_ = Integrator::rk4;
  const double w = params_.omega;
  const double turns[3] = {-w, 0.0, w};
  for (double ta : turns)
    for (double td : turns) actions_.push_back(Vec{{ta, td}});
  double R = params_.R;
  lower_ = Vec{{-R, -R, 0.0, -R, -R, 0.0}};
  upper_ = Vec{{R, R, kTwoPi, R, R, kTwoPi}};
  periodic_ = {false, false, true, false, false, true};
}

Vec AttackDefenseEnv::dynamics(const Vec& s, const Vec& u) const {
  const double v = params_.v;
  return Vec{{v * std::cos(s[2]), v * std::sin(s[2]), u[0],
              v * std::cos(s[5]), v * std::sin(s[5]), u[1]}};
}

Margins AttackDefenseEnv::margins(const Vec& s) const {
  if (s.size() != 6)
    throw std::invalid_argument("attack-defense: margins: state must be 6-D");
  double rho_a = s.head<2>().norm();
  double sep = (s.head<2>() - s.segment<2>(3)).norm();
  Margins m;
  m.l = rho_a - params_.r;
  m.g = std::max(rho_a - params_.R, params_.beta - sep);
  return m;
}

Vec AttackDefenseEnv::sample_state(Rng& rng) const {
  auto disk_point = [&](double r_in, double r_out) {
    double rad = std::sqrt(rng.uniform() * (r_out * r_out - r_in * r_in) + r_in * r_in);
    double ang = rng.uniform(0.0, kTwoPi);
    return Eigen::Vector2d(rad * std::cos(ang), rad * std::sin(ang));
  };
  Eigen::Vector2d pa = disk_point(params_.r, params_.R);
  Eigen::Vector2d pd = disk_point(0.0, params_.R);
  return Vec{{pa.x(), pa.y(), rng.uniform(0.0, kTwoPi),
              pd.x(), pd.y(), rng.uniform(0.0, kTwoPi)}};
}

}  // namespace ra
