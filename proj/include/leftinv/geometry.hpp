#pragma once

#include "leftinv/algebra.hpp"
#include "leftinv/group.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace leftinv {

/// Fixed-step explicit schemes. RK2 is the explicit midpoint rule, RK4 the
/// classical 4-stage scheme; both treat the position through its matrix
/// entries (embedded-space integration). RKMK4 is a Munthe-Kaas variant that
/// updates the position multiplicatively through the group exponential and
/// therefore stays on the group to machine precision. The benchmark uses RK2
/// and RK4 only.
enum class IntegratorScheme { RK2, RK4, RKMK4 };

/// Butcher weights of the underlying tableau; they sum to 1.
inline std::vector<double> scheme_weights(IntegratorScheme scheme) {
  if (scheme == IntegratorScheme::RK2) return {0.0, 1.0};
  return {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0};
}

/// State of the reduced geodesic equation: position on the group and
/// left-angular velocity in algebra coordinates. The metric norm of the
/// velocity is a conserved quantity of the exact flow.
struct GeodesicState {
  GroupElement position;
  AlgebraVector velocity;
};

struct GeodesicDerivative {
  Eigen::MatrixXd position_dot;
  AlgebraVector velocity_dot;
};

/// Joint state for transport along a geodesic: the geodesic state plus the
/// transported vector pulled back to the algebra. <zeta,zeta> and
/// <zeta,velocity> are conserved by the exact flow.
struct TransportState {
  GeodesicState geodesic;
  AlgebraVector zeta;
};

/// One sample of a discretized curve: the point and the left-angular velocity
/// theta(gamma_dot) at that point.
struct CurveSample {
  GroupElement position;
  AlgebraVector omega;
};

/// Raised when the shooting solver exhausts its iteration budget.
class NonConvergenceError : public std::runtime_error {
 public:
  explicit NonConvergenceError(double residual)
      : std::runtime_error("riemannian_log did not converge; final residual " +
                           std::to_string(residual)),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Right-hand side of the reduced geodesic equation:
/// gamma_dot = dL_gamma omega, omega_dot = ad*_omega omega.
inline GeodesicDerivative geodesic_rhs(const LieGroupStructure& s, const GeodesicState& state) {
  return {left_translate(s, state.position, state.velocity),
          ad_star(s, state.velocity, state.velocity)};
}

/// Right-hand side of the reduced parallel transport equation:
/// zeta_dot = -alpha(omega, zeta).
inline AlgebraVector transport_rhs(const LieGroupStructure& s, const AlgebraVector& omega,
                                   const AlgebraVector& zeta) {
  return -connection_alpha(s, omega, zeta);
}

namespace detail {

// Combined integration state; zeta of size 0 means the transport block is absent.
struct FlowState {
  Eigen::MatrixXd position;
  Eigen::VectorXd omega;
  Eigen::VectorXd zeta;

  FlowState plus(double a, const FlowState& k) const {
    FlowState out;
    out.position = position + a * k.position;
    out.omega = omega + a * k.omega;
    out.zeta = zeta.size() > 0 ? Eigen::VectorXd(zeta + a * k.zeta) : zeta;
    return out;
  }
};

inline FlowState flow_rhs(const LieGroupStructure& s, const FlowState& y) {
  FlowState d;
  d.position = y.position * s.coords_to_matrix(y.omega);
  d.omega = ad_star(s, y.omega, y.omega);
  if (y.zeta.size() > 0) d.zeta = -connection_alpha(s, y.omega, y.zeta);
  return d;
}

// Munthe-Kaas step: the position increment is tracked in the algebra through
// u with u(0) = 0, du/dt = dexpinv_u(omega) truncated after the double
// bracket (sufficient for order 4), and applied as position * exp(u).
inline FlowState rkmk4_step(const LieGroupStructure& s, const FlowState& y, double h) {
  struct Vars {
    Eigen::VectorXd u, omega, zeta;
    Vars plus(double a, const Vars& k) const {
      return {u + a * k.u, omega + a * k.omega,
              zeta.size() > 0 ? Eigen::VectorXd(zeta + a * k.zeta) : zeta};
    }
  };
  auto rhs = [&s](const Vars& v) {
    Vars d;
    const Eigen::VectorXd uw = bracket(s, v.u, v.omega);
    d.u = v.omega - 0.5 * uw + (1.0 / 12.0) * bracket(s, v.u, uw);
    d.omega = ad_star(s, v.omega, v.omega);
    if (v.zeta.size() > 0) d.zeta = -connection_alpha(s, v.omega, v.zeta);
    return d;
  };
  const Vars y0{Eigen::VectorXd::Zero(y.omega.size()), y.omega, y.zeta};
  const Vars k1 = rhs(y0);
  const Vars k2 = rhs(y0.plus(0.5 * h, k1));
  const Vars k3 = rhs(y0.plus(0.5 * h, k2));
  const Vars k4 = rhs(y0.plus(h, k3));
  const Vars y1 = y0.plus(h / 6.0, k1).plus(h / 3.0, k2).plus(h / 3.0, k3).plus(h / 6.0, k4);
  return {y.position * group_exp(s, y1.u), y1.omega, y1.zeta};
}

inline FlowState rk_step(const LieGroupStructure& s, const FlowState& y, double h,
                         IntegratorScheme scheme) {
  switch (scheme) {
    case IntegratorScheme::RK2: {
      const FlowState k1 = flow_rhs(s, y);
      const FlowState k2 = flow_rhs(s, y.plus(0.5 * h, k1));
      return y.plus(h, k2);
    }
    case IntegratorScheme::RK4: {
      const FlowState k1 = flow_rhs(s, y);
      const FlowState k2 = flow_rhs(s, y.plus(0.5 * h, k1));
      const FlowState k3 = flow_rhs(s, y.plus(0.5 * h, k2));
      const FlowState k4 = flow_rhs(s, y.plus(h, k3));
      return y.plus(h / 6.0, k1).plus(h / 3.0, k2).plus(h / 3.0, k3).plus(h / 6.0, k4);
    }
    case IntegratorScheme::RKMK4:
      return rkmk4_step(s, y, h);
  }
  throw std::logic_error("rk_step: unreachable");
}

} // namespace detail

/// Integrates the reduced geodesic equation with fixed steps over [0, t_end].
/// A zero initial velocity returns the input unchanged. If project_interval
/// is positive, the rotation block is snapped back to the group every that
/// many steps.
inline GeodesicState integrate_geodesic(const LieGroupStructure& s, const GeodesicState& initial,
                                        double t_end, int n_steps, IntegratorScheme scheme,
                                        int project_interval = 0) {
  s.check_dim(initial.velocity);
  if (n_steps < 1) throw std::invalid_argument("integrate_geodesic: n_steps must be >= 1");
  if (initial.velocity.norm() == 0.0) return initial;
  detail::FlowState y{initial.position, initial.velocity, Eigen::VectorXd()};
  const double h = t_end / n_steps;
  for (int k = 0; k < n_steps; ++k) {
    y = detail::rk_step(s, y, h, scheme);
    if (project_interval > 0 && (k + 1) % project_interval == 0)
      y.position = project_to_group(s, y.position);
  }
  return {y.position, y.omega};
}

/// As integrate_geodesic, but returns all n_steps + 1 states along the way.
inline std::vector<GeodesicState> geodesic_path(const LieGroupStructure& s,
                                                const GeodesicState& initial, double t_end,
                                                int n_steps, IntegratorScheme scheme) {
  s.check_dim(initial.velocity);
  if (n_steps < 1) throw std::invalid_argument("geodesic_path: n_steps must be >= 1");
  std::vector<GeodesicState> path;
  path.reserve(n_steps + 1);
  path.push_back(initial);
  if (initial.velocity.norm() == 0.0) {
    path.insert(path.end(), n_steps, initial);
    return path;
  }
  detail::FlowState y{initial.position, initial.velocity, Eigen::VectorXd()};
  const double h = t_end / n_steps;
  for (int k = 0; k < n_steps; ++k) {
    y = detail::rk_step(s, y, h, scheme);
    path.push_back({y.position, y.omega});
  }
  return path;
}

/// Riemannian exponential: endpoint of the geodesic from base with initial
/// velocity v, integrated over [0, 1].
inline GroupElement riemannian_exp(const LieGroupStructure& s, const GroupElement& base,
                                   const AlgebraVector& v, int n_steps,
                                   IntegratorScheme scheme) {
  return integrate_geodesic(s, {base, v}, 1.0, n_steps, scheme).position;
}

/// Riemannian logarithm by shooting: Gauss-Newton on the initial velocity
/// with a central-difference Jacobian and a halving line search. Succeeds
/// when the Frobenius residual of the endpoint drops to tol. A stationary
/// point of the least-squares problem with a small remaining residual also
/// counts as converged: with a coarse forward integrator the target need not
/// be exactly reachable. Requires the relative rotation angle to be below
/// pi - 0.1.
inline AlgebraVector riemannian_log(const LieGroupStructure& s, const GroupElement& base,
                                    const GroupElement& target, int n_steps,
                                    IntegratorScheme scheme, double tol = 1e-10,
                                    int max_iter = 50) {
  const GroupElement rel = compose(inverse(s, base), target);
  if (rotation_angle(s, rel) >= M_PI - 0.1)
    throw std::domain_error("riemannian_log: relative rotation too close to pi");

  const int n = s.dim();
  const int entries = s.matrix_size() * s.matrix_size();
  auto residual = [&](const AlgebraVector& v) -> Eigen::VectorXd {
    Eigen::MatrixXd diff = riemannian_exp(s, base, v, n_steps, scheme) - target;
    return Eigen::Map<Eigen::VectorXd>(diff.data(), entries);
  };

  AlgebraVector v = group_log(s, rel);
  Eigen::VectorXd r = residual(v);
  double rnorm = r.norm();
  const double stationary_slack = 1e-4 * std::max(1.0, target.norm());
  constexpr double fd_step = 1e-6;

  for (int iter = 0; iter < max_iter; ++iter) {
    if (rnorm <= tol) return v;

    Eigen::MatrixXd jac(entries, n);
    for (int c = 0; c < n; ++c) {
      AlgebraVector vp = v;
      AlgebraVector vm = v;
      vp[c] += fd_step;
      vm[c] -= fd_step;
      jac.col(c) = (residual(vp) - residual(vm)) / (2.0 * fd_step);
    }
    const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-r);

    if (step.norm() <= 1e-11 * (1.0 + v.norm())) {
      v += step;
      r = residual(v);
      rnorm = r.norm();
      if (rnorm <= std::max(tol, stationary_slack)) return v;
      throw NonConvergenceError(rnorm);
    }

    bool accepted = false;
    for (double t = 1.0; t >= 1e-7; t *= 0.5) {
      const AlgebraVector v_try = v + t * step;
      const Eigen::VectorXd r_try = residual(v_try);
      if (r_try.norm() < rnorm) {
        v = v_try;
        r = r_try;
        rnorm = r.norm();
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (rnorm <= std::max(tol, stationary_slack)) return v;
      throw NonConvergenceError(rnorm);
    }
  }
  if (rnorm <= tol) return v;
  throw NonConvergenceError(rnorm);
}

/// Jointly integrates the geodesic and transport equations over [0, 1] with a
/// single scheme applied to the combined state. Returns the endpoint state
/// and zeta(1); the transported ambient vector is
/// left_translate(endpoint, zeta).
inline TransportState parallel_transport_geodesic(const LieGroupStructure& s,
                                                  const GroupElement& base,
                                                  const AlgebraVector& direction,
                                                  const AlgebraVector& zeta0, int n_steps,
                                                  IntegratorScheme scheme) {
  s.check_dim(direction);
  s.check_dim(zeta0);
  if (n_steps < 1)
    throw std::invalid_argument("parallel_transport_geodesic: n_steps must be >= 1");
  if (direction.norm() == 0.0) return {{base, direction}, zeta0};
  detail::FlowState y{base, direction, zeta0};
  const double h = 1.0 / n_steps;
  for (int k = 0; k < n_steps; ++k) y = detail::rk_step(s, y, h, scheme);
  return {{y.position, y.omega}, y.zeta};
}

/// Transports zeta0 along an arbitrary sampled curve (uniform time grid) by
/// integrating zeta_dot = -alpha(omega(t), zeta) with omega interpolated
/// linearly between samples, one scheme step per interval. RKMK4 falls back
/// to the classical RK4 stages here; the state is a plain algebra vector.
inline AlgebraVector parallel_transport_curve(const LieGroupStructure& s,
                                              const std::vector<CurveSample>& samples,
                                              const AlgebraVector& zeta0,
                                              IntegratorScheme scheme) {
  if (samples.size() < 2)
    throw std::invalid_argument("parallel_transport_curve: need at least 2 samples");
  s.check_dim(zeta0);
  const int intervals = static_cast<int>(samples.size()) - 1;
  const double h = 1.0 / intervals;
  AlgebraVector z = zeta0;
  for (int k = 0; k < intervals; ++k) {
    auto omega_at = [&](double c) -> AlgebraVector {
      return (1.0 - c) * samples[k].omega + c * samples[k + 1].omega;
    };
    auto f = [&](double c, const AlgebraVector& zz) {
      return transport_rhs(s, omega_at(c), zz);
    };
    if (scheme == IntegratorScheme::RK2) {
      const AlgebraVector k1 = f(0.0, z);
      const AlgebraVector k2 = f(0.5, z + 0.5 * h * k1);
      z += h * k2;
    } else {
      const AlgebraVector k1 = f(0.0, z);
      const AlgebraVector k2 = f(0.5, z + 0.5 * h * k1);
      const AlgebraVector k3 = f(0.5, z + 0.5 * h * k2);
      const AlgebraVector k4 = f(1.0, z + h * k3);
      z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  return z;
}

/// Pole ladder transport of zeta0 along the geodesic t -> exp_base(t *
/// direction). Each rung advances the footpoint with one RK4 step, reflects
/// the scaled vector through the rung midpoint, and reads the result back
/// with the shooting logarithm; all exponential and logarithm evaluations use
/// a single RK4 step. The per-rung negation makes the result independent of
/// the rung count's parity. Second-order accurate in 1/n_rungs.
inline AlgebraVector pole_ladder(const LieGroupStructure& s, const GroupElement& base,
                                 const AlgebraVector& direction, const AlgebraVector& zeta0,
                                 int n_rungs) {
  s.check_dim(direction);
  s.check_dim(zeta0);
  if (n_rungs < 1) throw std::invalid_argument("pole_ladder: n_rungs must be >= 1");
  const double zeta_norm = zeta0.norm();
  if (zeta_norm == 0.0 || direction.norm() == 0.0) return zeta0;

  // Rung geodesics must stay in a small neighborhood for the midpoint
  // symmetry to be second-order accurate.
  const double sigma = std::clamp(1.0 / (zeta_norm * n_rungs), 1e-3, 1.0);
  const double h = 1.0 / n_rungs;
  const auto rk4 = IntegratorScheme::RK4;

  GeodesicState state{base, direction};
  AlgebraVector v = zeta0;
  for (int i = 0; i < n_rungs; ++i) {
    const GroupElement midpoint = integrate_geodesic(s, state, 0.5 * h, 1, rk4).position;
    const GeodesicState next = integrate_geodesic(s, state, h, 1, rk4);
    const GroupElement q = riemannian_exp(s, state.position, sigma * v, 1, rk4);
    const AlgebraVector u = riemannian_log(s, midpoint, q, 1, rk4);
    const GroupElement reflected = riemannian_exp(s, midpoint, -u, 1, rk4);
    v = -(1.0 / sigma) * riemannian_log(s, next.position, reflected, 1, rk4);
    state = next;
  }
  return v;
}

} // namespace leftinv
