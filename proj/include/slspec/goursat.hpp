#pragma once

#include <Eigen/Core>

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "slspec/errors.hpp"
#include "slspec/potential.hpp"

namespace slspec {

/// Transformation kernel K(x, t) on {0 <= x <= L, |t| <= x}, L the potential's interval
/// length (x measured from its left end). Stored in characteristic indices:
/// u(i, j) = K(x, t) with x = (i + j) d, t = (i - j) d, i + j <= lattice.
template <typename Scalar>
class GoursatKernel {
 public:
  GoursatKernel() = default;
  GoursatKernel(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> u, double spacing)
      : u_(std::move(u)), d_(spacing) {}

  int lattice() const { return static_cast<int>(u_.rows()) - 1; }
  double spacing() const { return d_; }
  double length() const { return d_ * lattice(); }

  /// Characteristic-index access; requires i, j >= 0 and i + j <= lattice().
  Scalar at(int i, int j) const { return u_(i, j); }

  /// K at x = k d, t = (2 m - k) d for m = 0..k.
  Scalar at_xt(int k, int m) const { return u_(m, k - m); }

  double sup_abs() const {
    double s = 0.0;
    for (int i = 0; i <= lattice(); ++i)
      for (int j = 0; i + j <= lattice(); ++j) s = std::max(s, std::abs(u_(i, j)));
    return s;
  }

  int iterations = 0;
  double final_update = 0.0;
  std::vector<double> update_history;

 private:
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> u_;
  double d_ = 0.0;
};

struct KernelOptions {
  double tolerance = 1e-10;  // relative to 1 + sup |boundary data|
  int max_iterations = 200;
};

/// Successive approximations for K_xx - K_tt = q(x) K with K(x, x) = (1/2) int_0^x q and
/// K(x, -x) = 0. In characteristic variables (xi, eta) = ((x+t)/2, (x-t)/2) this reads
/// u(xi, eta) = (1/2) int_0^xi q + int_0^xi int_0^eta q(a + b) u(a, b) db da,
/// with the double integral done cell by cell using corner averages.
template <typename Scalar>
GoursatKernel<Scalar> solve_kernel(const BasicPotential<Scalar>& p, int lattice, const KernelOptions& opts = {}) {
  if (lattice < 2) throw InputError("kernel lattice must be >= 2");
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const double a = p.interval().a;
  const double d = p.interval().length() / lattice;
  const int n = lattice;

  Vector<Scalar> q(n + 1), half_integral(n + 1);
  for (int k = 0; k <= n; ++k) {
    q[k] = p(a + k * d);
    half_integral[k] = 0.5 * p.integral(a + k * d);
  }

  Mat base = Mat::Zero(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; i + j <= n; ++j) base(i, j) = half_integral[i];
  double base_sup = 0.0;
  for (int i = 0; i <= n; ++i) base_sup = std::max(base_sup, std::abs(half_integral[i]));

  GoursatKernel<Scalar> out;
  Mat u = base;
  Mat f = Mat::Zero(n + 1, n + 1);
  Mat acc = Mat::Zero(n + 1, n + 1);
  const double cell = 0.25 * d * d;
  std::vector<double> history;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    for (int i = 0; i <= n; ++i)
      for (int j = 0; i + j <= n; ++j) f(i, j) = q[i + j] * u(i, j);
    double update = 0.0;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; i + j <= n; ++j) {
        if (i == 0 || j == 0) {
          acc(i, j) = Scalar(0);
        } else {
          acc(i, j) = acc(i - 1, j) + acc(i, j - 1) - acc(i - 1, j - 1) +
                      cell * (f(i - 1, j - 1) + f(i, j - 1) + f(i - 1, j) + f(i, j));
        }
        const Scalar next = base(i, j) + acc(i, j);
        update = std::max(update, std::abs(next - u(i, j)));
        u(i, j) = next;
      }
    }
    history.push_back(update);
    if (update <= opts.tolerance * (1.0 + base_sup)) {
      out = GoursatKernel<Scalar>(std::move(u), d);
      out.iterations = it;
      out.final_update = update;
      out.update_history = std::move(history);
      return out;
    }
  }
  throw NumericalError("kernel iteration did not converge in " + std::to_string(opts.max_iterations) +
                       " sweeps (last update " + std::to_string(history.back()) + ")");
}

namespace detail {

/// cos(sqrt(mu) t) and sin(sqrt(mu) t) / sqrt(mu), continued to mu <= 0.
inline std::pair<double, double> trig_pair(double mu, double t) {
  if (mu > 0.0) {
    const double l = std::sqrt(mu);
    return {std::cos(l * t), std::sin(l * t) / l};
  }
  if (mu < 0.0) {
    const double k = std::sqrt(-mu);
    return {std::cosh(k * t), std::sinh(k * t) / k};
  }
  return {1.0, t};
}

inline int lattice_index(double x, double d, int max_index) {
  const double r = x / d;
  const long k = std::lround(r);
  if (std::abs(r - static_cast<double>(k)) > 1e-8 || k < 0 || k > max_index)
    throw InputError("abscissa " + std::to_string(x) + " is not a kernel lattice point");
  return static_cast<int>(k);
}

}  // namespace detail

/// c(x) = cos(lx) + int_{-x}^{x} K(x,t) cos(lt) dt,  s(x) = sin(lx)/l + int K(x,t) sin(lt)/l dt,
/// l = sqrt(mu), trapezoid in t on the lattice. x is measured from the interval's left end.
template <typename Scalar>
std::pair<Scalar, Scalar> reconstruct_solutions(const GoursatKernel<Scalar>& k, double mu, double x) {
  const int kx = detail::lattice_index(x, k.spacing(), k.lattice());
  const auto [c0, s0] = detail::trig_pair(mu, x);
  Scalar c = c0, s = s0;
  const double dt = 2.0 * k.spacing();
  for (int m = 0; m <= kx && kx > 0; ++m) {
    const double w = (m == 0 || m == kx) ? 0.5 : 1.0;
    const double t = (2 * m - kx) * k.spacing();
    const auto [ct, st] = detail::trig_pair(mu, t);
    const Scalar kv = k.at_xt(kx, m);
    c += w * dt * kv * ct;
    s += w * dt * kv * st;
  }
  return {c, s};
}

/// Kernel N(x, t) of the midpoint-normalized solutions on
/// {0 <= x <= 1, |t - 1/2| <= |x - 1/2|}. For x >= 1/2 it is the transformation kernel of
/// q(1/2 + u) shifted by 1/2; for x < 1/2 it is minus the kernel of q(1/2 - u), reflected.
template <typename Scalar>
struct MidpointKernel {
  GoursatKernel<Scalar> right;  // potential q(1/2 + u), u in [0, 1/2]
  GoursatKernel<Scalar> left;   // potential q(1/2 - u), u in [0, 1/2]
  double a = 0.0;
  double b = 1.0;

  double spacing() const { return right.spacing(); }
  int half_lattice() const { return right.lattice(); }
  double midpoint() const { return 0.5 * (a + b); }

  /// (t, N(x, t)) for lattice t running from a + b - x to x.
  std::vector<std::pair<double, Scalar>> slice(double x) const {
    const double mid = midpoint();
    const int m = detail::lattice_index(std::abs(x - mid), spacing(), half_lattice());
    std::vector<std::pair<double, Scalar>> out;
    out.reserve(m + 1);
    const bool upper = x >= mid;
    for (int i = 0; i <= m; ++i) {
      const double tau = (2 * i - m) * spacing();
      if (upper)
        out.emplace_back(mid + tau, right.at_xt(m, i));
      else
        out.emplace_back(mid - tau, -left.at_xt(m, i));
    }
    return out;
  }
};

template <typename Scalar>
MidpointKernel<Scalar> shifted_kernel_view(const BasicPotential<Scalar>& p, int lattice,
                                           const KernelOptions& opts = {}) {
  if (lattice % 2 != 0) throw InputError("midpoint kernel needs an even lattice");
  const Interval& iv = p.interval();
  const double mid = iv.midpoint();
  MidpointKernel<Scalar> mk;
  mk.a = iv.a;
  mk.b = iv.b;
  mk.right = solve_kernel(restrict(p, Interval{mid, iv.b}), lattice / 2, opts);
  mk.left = solve_kernel(reflect(restrict(p, Interval{iv.a, mid})), lattice / 2, opts);
  return mk;
}

/// y1(x) = cos l(x - h) + int_{a+b-x}^{x} N(x,t) cos l(t - h) dt and the sine analogue y2,
/// h the midpoint; the integral is oriented (negative step when x < h).
template <typename Scalar>
std::pair<Scalar, Scalar> reconstruct_midpoint_solutions(const MidpointKernel<Scalar>& mk, double mu, double x) {
  const double mid = mk.midpoint();
  const auto [c0, s0] = detail::trig_pair(mu, x - mid);
  Scalar y1 = c0, y2 = s0;
  const auto pts = mk.slice(x);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double dt = pts[i + 1].first - pts[i].first;
    const auto [ca, sa] = detail::trig_pair(mu, pts[i].first - mid);
    const auto [cb, sb] = detail::trig_pair(mu, pts[i + 1].first - mid);
    y1 += 0.5 * dt * (pts[i].second * ca + pts[i + 1].second * cb);
    y2 += 0.5 * dt * (pts[i].second * sa + pts[i + 1].second * sb);
  }
  return {y1, y2};
}

}  // namespace slspec
