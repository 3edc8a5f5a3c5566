#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <type_traits>
#include <utility>

#include "slspec/errors.hpp"

namespace slspec {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

struct Interval {
  double a = 0.0;
  double b = 1.0;

  double length() const { return b - a; }
  double midpoint() const { return 0.5 * (a + b); }
};

inline bool same_interval(const Interval& lhs, const Interval& rhs, double eps = 1e-12) {
  return std::abs(lhs.a - rhs.a) <= eps && std::abs(lhs.b - rhs.b) <= eps;
}

/// Potential sampled at M+1 uniform nodes x_i = a + i (b - a) / M, with
/// piecewise-linear evaluation in between.
template <typename Scalar>
class BasicPotential {
 public:
  using scalar_type = Scalar;

  BasicPotential(Vector<Scalar> samples, Interval interval, std::string spec = {})
      : samples_(std::move(samples)), interval_(interval), spec_(std::move(spec)) {
    if (!(interval_.a < interval_.b)) throw InputError("potential interval must satisfy a < b");
    if (samples_.size() < 3) throw InputError("potential needs at least M = 2 (three nodes)");
    for (Index i = 0; i < samples_.size(); ++i) {
      if (!std::isfinite(std::abs(samples_[i])))
        throw InputError("potential sample " + std::to_string(i) + " is not finite");
    }
  }

  Index nodes() const { return samples_.size() - 1; }
  double spacing() const { return interval_.length() / static_cast<double>(nodes()); }
  double node(Index i) const {
    return interval_.a + static_cast<double>(i) * interval_.length() / static_cast<double>(nodes());
  }

  const Vector<Scalar>& samples() const { return samples_; }
  const Interval& interval() const { return interval_; }
  const std::string& spec() const { return spec_; }

  Scalar operator[](Index i) const { return samples_[i]; }

  Scalar operator()(double x) const {
    const auto [i, frac] = locate(x);
    return (1.0 - frac) * samples_[i] + frac * samples_[i + 1];
  }

  /// Exact integral of the interpolant from a to x (trapezoid on the nodes).
  Scalar integral(double x) const {
    const auto [i, frac] = locate(x);
    const double h = spacing();
    Scalar acc = Scalar(0);
    for (Index k = 0; k < i; ++k) acc += 0.5 * h * (samples_[k] + samples_[k + 1]);
    const Scalar at_x = (1.0 - frac) * samples_[i] + frac * samples_[i + 1];
    acc += 0.5 * frac * h * (samples_[i] + at_x);
    return acc;
  }

  double sup_abs() const { return samples_.cwiseAbs().maxCoeff(); }

  double max_imag_abs() const {
    if constexpr (std::is_same_v<Scalar, double>) {
      return 0.0;
    } else {
      return samples_.imag().cwiseAbs().maxCoeff();
    }
  }

 private:
  std::pair<Index, double> locate(double x) const {
    const double slack = 1e-12 * std::max(1.0, interval_.length());
    if (x < interval_.a - slack || x > interval_.b + slack)
      throw InputError("evaluation point " + std::to_string(x) + " outside the potential interval");
    const double t = (x - interval_.a) / interval_.length() * static_cast<double>(nodes());
    Index i = static_cast<Index>(std::floor(t));
    i = std::clamp<Index>(i, 0, nodes() - 1);
    const double frac = std::clamp(t - static_cast<double>(i), 0.0, 1.0);
    return {i, frac};
  }

  Vector<Scalar> samples_;
  Interval interval_;
  std::string spec_;
};

using Potential = BasicPotential<double>;
using ComplexPotential = BasicPotential<std::complex<double>>;

template <typename Scalar>
struct SymmetryDecomposition {
  BasicPotential<Scalar> q1;  // symmetric part
  BasicPotential<Scalar> q2;  // antisymmetric part
  BasicPotential<Scalar> g;   // q(x) - q(a + b - x)
};

struct ConditionReport {
  double residual_sup = 0.0;
  double residual_l2 = 0.0;
  bool satisfied = false;
  double tolerance = 0.0;
};

/// Cumulative trapezoid integral on a uniform grid, starting from zero at index 0.
template <typename Derived>
Vector<typename Derived::Scalar> cumulative_trapezoid(const Eigen::MatrixBase<Derived>& f, double h) {
  using S = typename Derived::Scalar;
  Vector<S> out(f.size());
  out[0] = S(0);
  for (Index i = 1; i < f.size(); ++i) out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
  return out;
}

namespace detail {

template <typename Scalar>
Vector<Scalar> reversed(const Vector<Scalar>& v) {
  return v.reverse();
}

/// Sup and interval-normalized L2 norm of a nodal defect (trapezoid weights).
template <typename Derived>
ConditionReport make_condition_report(const Eigen::MatrixBase<Derived>& defect, double tol) {
  const Index m = defect.size() - 1;
  double sq = 0.0;
  for (Index i = 0; i <= m; ++i) {
    const double w = (i == 0 || i == m) ? 0.5 : 1.0;
    sq += w * std::norm(defect[i]);
  }
  ConditionReport r;
  r.residual_sup = defect.cwiseAbs().maxCoeff();
  r.residual_l2 = std::sqrt(sq / static_cast<double>(m));
  r.tolerance = tol;
  r.satisfied = r.residual_sup <= tol;
  return r;
}

/// Defect q1 - (integral_b^x q2)^2 with the reflection x -> a + b - x.
template <typename Scalar>
ConditionReport reflected_square_defect(const BasicPotential<Scalar>& p, double tol) {
  const Vector<Scalar>& q = p.samples();
  const Vector<Scalar> r = reversed(q);
  const Vector<Scalar> q1 = 0.5 * (q + r);
  const Vector<Scalar> q2 = 0.5 * (q - r);
  const Vector<Scalar> from_a = cumulative_trapezoid(q2, p.spacing());
  const Vector<Scalar> from_b = from_a.array() - from_a[from_a.size() - 1];
  const Vector<Scalar> defect = q1 - from_b.cwiseProduct(from_b);
  return make_condition_report(defect, tol);
}

inline void require_interval(const Interval& have, const Interval& want, const char* what) {
  if (!same_interval(have, want))
    throw InputError(std::string(what) + ": potential is defined on [" + std::to_string(have.a) + ", " +
                     std::to_string(have.b) + "], expected [" + std::to_string(want.a) + ", " +
                     std::to_string(want.b) + "]");
}

}  // namespace detail

/// Symmetric / antisymmetric split about 1/2 on [0,1].
template <typename Scalar>
SymmetryDecomposition<Scalar> decompose(const BasicPotential<Scalar>& p) {
  detail::require_interval(p.interval(), Interval{0.0, 1.0}, "decompose");
  const Vector<Scalar>& q = p.samples();
  const Vector<Scalar> r = detail::reversed(q);
  return {BasicPotential<Scalar>(0.5 * (q + r), p.interval(), p.spec()),
          BasicPotential<Scalar>(0.5 * (q - r), p.interval(), p.spec()),
          BasicPotential<Scalar>(q - r, p.interval(), p.spec())};
}

/// Sup-norm defect of q(x) = q(a + b - x); on [0,1] this is q(x) = q(1 - x).
template <typename Scalar>
ConditionReport check_symmetry(const BasicPotential<Scalar>& p, double tol) {
  const Vector<Scalar> defect = p.samples() - detail::reversed(p.samples());
  return detail::make_condition_report(defect, tol);
}

/// q1(x) = (integral_1^x q2)^2 on [0,1].
template <typename Scalar>
ConditionReport check_condition_BB(const BasicPotential<Scalar>& p, double tol) {
  detail::require_interval(p.interval(), Interval{0.0, 1.0}, "check_condition_BB");
  return detail::reflected_square_defect(p, tol);
}

/// Half-interval analogue: reflection about 1/4, integral from 1/2.
template <typename Scalar>
ConditionReport check_condition_B_half(const BasicPotential<Scalar>& p, double tol) {
  detail::require_interval(p.interval(), Interval{0.0, 0.5}, "check_condition_B_half");
  return detail::reflected_square_defect(p, tol);
}

/// Sub-range of samples; both endpoints must land on nodes.
template <typename Scalar>
BasicPotential<Scalar> restrict(const BasicPotential<Scalar>& p, Interval sub) {
  const Interval& full = p.interval();
  const double slack = 1e-12 * std::max(1.0, full.length());
  if (!(sub.a < sub.b) || sub.a < full.a - slack || sub.b > full.b + slack)
    throw InputError("restrict: sub-interval is not inside the potential interval");
  const double m = static_cast<double>(p.nodes());
  const double ta = (sub.a - full.a) / full.length() * m;
  const double tb = (sub.b - full.b) / full.length() * m + m;
  const Index ia = static_cast<Index>(std::llround(ta));
  const Index ib = static_cast<Index>(std::llround(tb));
  if (std::abs(ta - static_cast<double>(ia)) > 1e-9 || std::abs(tb - static_cast<double>(ib)) > 1e-9)
    throw InputError("restrict: sub-interval endpoints do not fall on grid nodes");
  if (ib - ia < 2) throw InputError("restrict: sub-interval holds fewer than three nodes");
  return BasicPotential<Scalar>(p.samples().segment(ia, ib - ia + 1), Interval{p.node(ia), p.node(ib)},
                                p.spec());
}

/// q(a + b - x) on the same interval.
template <typename Scalar>
BasicPotential<Scalar> reflect(const BasicPotential<Scalar>& p) {
  return BasicPotential<Scalar>(detail::reversed(p.samples()), p.interval(), p.spec());
}

template <typename Scalar>
BasicPotential<Scalar> shifted(const BasicPotential<Scalar>& p, Scalar c) {
  return BasicPotential<Scalar>(p.samples().array() + c, p.interval(), p.spec());
}

}  // namespace slspec
