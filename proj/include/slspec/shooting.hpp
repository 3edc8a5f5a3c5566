#pragma once

#include <Eigen/Core>

#include <cmath>
#include <string>

#include "slspec/errors.hpp"
#include "slspec/potential.hpp"

namespace slspec {

/// c, c', s, s' along the integration grid, with c(a) = s'(a) = 1, c'(a) = s(a) = 0.
template <typename Scalar>
struct FundamentalTrajectory {
  Eigen::VectorXd grid;
  Vector<Scalar> c, cp, s, sp;
  double mu = 0.0;
};

/// Fundamental system at the interval midpoint ("half") and right end ("1").
template <typename Scalar>
struct EndpointData {
  Scalar c1{}, cp1{}, s1{}, sp1{};
  Scalar c_half{}, cp_half{}, s_half{}, sp_half{};
  double mu = 0.0;
};

/// Solutions normalized at the midpoint: y1 = 1, y1' = 0, y2 = 0, y2' = 1 there.
template <typename Scalar>
struct MidpointSolutions {
  Eigen::VectorXd grid;
  Vector<Scalar> y1, y1p, y2, y2p;
};

inline constexpr double kOverflowCap = 1e150;

/// Classical RK4 for y'' = (q(x) - mu) y with q linear between potential nodes.
/// The potential is pre-sampled at every half step so repeated solves share it.
template <typename Scalar>
class FundamentalSolver {
 public:
  explicit FundamentalSolver(const BasicPotential<Scalar>& p, int steps = 0)
      : interval_(p.interval()), steps_(steps > 0 ? steps : static_cast<int>(2 * p.nodes())) {
    if (steps_ < 2 || steps_ % 2 != 0) throw InputError("integration step count must be even and >= 2");
    h_ = interval_.length() / steps_;
    q_half_.resize(2 * steps_ + 1);
    for (int j = 0; j <= 2 * steps_; ++j) q_half_[j] = p(interval_.a + 0.5 * h_ * j);
  }

  int steps() const { return steps_; }
  double step_size() const { return h_; }
  const Interval& interval() const { return interval_; }

  EndpointData<Scalar> endpoints(double mu) const {
    EndpointData<Scalar> out;
    out.mu = mu;
    const int mid = steps_ / 2;
    march(mu, [&](int n, const State& y) {
      if (n == mid) {
        out.c_half = y(0, 0);
        out.cp_half = y(1, 0);
        out.s_half = y(0, 1);
        out.sp_half = y(1, 1);
      }
      if (n == steps_) {
        out.c1 = y(0, 0);
        out.cp1 = y(1, 0);
        out.s1 = y(0, 1);
        out.sp1 = y(1, 1);
      }
    });
    return out;
  }

  FundamentalTrajectory<Scalar> trajectory(double mu) const {
    FundamentalTrajectory<Scalar> t;
    t.mu = mu;
    t.grid.resize(steps_ + 1);
    t.c.resize(steps_ + 1);
    t.cp.resize(steps_ + 1);
    t.s.resize(steps_ + 1);
    t.sp.resize(steps_ + 1);
    march(mu, [&](int n, const State& y) {
      t.grid[n] = interval_.a + n * h_;
      t.c[n] = y(0, 0);
      t.cp[n] = y(1, 0);
      t.s[n] = y(0, 1);
      t.sp[n] = y(1, 1);
    });
    t.grid[steps_] = interval_.b;
    return t;
  }

 private:
  // Columns: (c, c') and (s, s').
  using State = Eigen::Matrix<Scalar, 2, 2>;

  static State rhs(const State& y, Scalar coeff) {
    State d;
    d(0, 0) = y(1, 0);
    d(0, 1) = y(1, 1);
    d(1, 0) = coeff * y(0, 0);
    d(1, 1) = coeff * y(0, 1);
    return d;
  }

  template <typename Visitor>
  void march(double mu, Visitor&& visit) const {
    State y = State::Identity();
    visit(0, y);
    for (int n = 0; n < steps_; ++n) {
      const Scalar a0 = q_half_[2 * n] - mu;
      const Scalar am = q_half_[2 * n + 1] - mu;
      const Scalar a1 = q_half_[2 * n + 2] - mu;
      const State k1 = rhs(y, a0);
      const State k2 = rhs(y + (0.5 * h_) * k1, am);
      const State k3 = rhs(y + (0.5 * h_) * k2, am);
      const State k4 = rhs(y + h_ * k3, a1);
      y += (h_ / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      const double mag = y.cwiseAbs().maxCoeff();
      if (!(mag <= kOverflowCap))
        throw NumericalError("integrator overflow at step " + std::to_string(n + 1) + " of " +
                             std::to_string(steps_) + " (mu = " + std::to_string(mu) + ")");
      visit(n + 1, y);
    }
  }

  Interval interval_;
  int steps_;
  double h_ = 0.0;
  Vector<Scalar> q_half_;
};

template <typename Scalar>
FundamentalTrajectory<Scalar> integrate_fundamental(const BasicPotential<Scalar>& p, double mu, int steps = 0) {
  return FundamentalSolver<Scalar>(p, steps).trajectory(mu);
}

template <typename Scalar>
EndpointData<Scalar> endpoint_data(const BasicPotential<Scalar>& p, double mu, int steps = 0) {
  return FundamentalSolver<Scalar>(p, steps).endpoints(mu);
}

/// Midpoint-normalized pair built from the fundamental system:
/// y1 = s'(h) c - c'(h) s,  y2 = c(h) s - s(h) c, with h the interval midpoint.
template <typename Scalar>
MidpointSolutions<Scalar> midpoint_solutions(const FundamentalTrajectory<Scalar>& t) {
  const Index n = t.grid.size() - 1;
  if (n % 2 != 0) throw InputError("midpoint_solutions needs a grid containing the midpoint");
  const Index mid = n / 2;
  const Scalar ch = t.c[mid], cph = t.cp[mid], sh = t.s[mid], sph = t.sp[mid];
  MidpointSolutions<Scalar> m;
  m.grid = t.grid;
  m.y1 = sph * t.c - cph * t.s;
  m.y1p = sph * t.cp - cph * t.sp;
  m.y2 = ch * t.s - sh * t.c;
  m.y2p = ch * t.sp - sh * t.cp;
  return m;
}

template <typename Scalar>
MidpointSolutions<Scalar> midpoint_solutions(const BasicPotential<Scalar>& p, double mu, int steps = 0) {
  return midpoint_solutions(integrate_fundamental(p, mu, steps));
}

/// Inverse map: c = y2'(a) y1 - y1'(a) y2,  s = -y2(a) y1 + y1(a) y2.
template <typename Scalar>
FundamentalTrajectory<Scalar> fundamental_from_midpoint(const MidpointSolutions<Scalar>& m, double mu = 0.0) {
  const Scalar y1a = m.y1[0], y1pa = m.y1p[0], y2a = m.y2[0], y2pa = m.y2p[0];
  FundamentalTrajectory<Scalar> t;
  t.mu = mu;
  t.grid = m.grid;
  t.c = y2pa * m.y1 - y1pa * m.y2;
  t.cp = y2pa * m.y1p - y1pa * m.y2p;
  t.s = -y2a * m.y1 + y1a * m.y2;
  t.sp = -y2a * m.y1p + y1a * m.y2p;
  return t;
}

/// max over nodes of |c s' - c' s - 1|.
template <typename Scalar>
double wronskian_residual(const FundamentalTrajectory<Scalar>& t) {
  const Vector<Scalar> w = t.c.cwiseProduct(t.sp) - t.cp.cwiseProduct(t.s);
  return (w.array() - Scalar(1)).abs().maxCoeff();
}

}  // namespace slspec
