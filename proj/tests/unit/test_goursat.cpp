#include "doctest.h"

#include "slspec/errors.hpp"
#include "slspec/goursat.hpp"
#include "slspec/shooting.hpp"
#include "support.hpp"

using namespace slspec;
using namespace slspec::test;

TEST_CASE("zero potential gives a zero kernel") {
  const auto k = solve_kernel(make(constant(0.0)), 100);
  CHECK(k.sup_abs() == 0.0);
  CHECK(k.iterations == 1);
  for (double mu : {0.0, 3.0, pi2, -4.0}) {
    const auto [c, s] = reconstruct_solutions(k, mu, 1.0);
    const auto [c0, s0] = detail::trig_pair(mu, 1.0);
    CHECK(c == c0);
    CHECK(s == s0);
  }
  const auto mk = shifted_kernel_view(make(constant(0.0)), 100);
  CHECK(mk.right.sup_abs() == 0.0);
  CHECK(mk.left.sup_abs() == 0.0);
}

TEST_CASE("constant potential diagonal") {
  const auto k = solve_kernel(make(constant(3.0)), 200);
  for (int i = 0; i <= 200; i += 20) {
    CHECK(k.at_xt(i, i) == doctest::Approx(1.5 * i * k.spacing()).epsilon(1e-13));
    CHECK(k.at_xt(i, 0) == 0.0);
  }
}

TEST_CASE("diagonal reproduces half the running integral") {
  const Potential p = make(cosine(1.0));
  const auto k = solve_kernel(p, 400);
  for (int i = 0; i <= 400; i += 40) CHECK(k.at_xt(i, i) == doctest::Approx(0.5 * p.integral(i * k.spacing())).epsilon(1e-12));
}

TEST_CASE("update norms contract") {
  const auto k = solve_kernel(make(cosine(1.0, 5.0)), 200);
  const auto& h = k.update_history;
  REQUIRE(h.size() >= 5);
  for (std::size_t i = 3; i + 1 < h.size(); ++i) CHECK(h[i + 1] <= h[i]);
}

TEST_CASE("reconstruction matches shooting") {
  const Potential p = make(cosine(1.0));
  const FundamentalSolver<double> solver(p);
  const auto k4 = solve_kernel(p, 400);
  const auto k8 = solve_kernel(p, 800);
  for (double mu : {0.0, pi2, 4 * pi2, 9 * pi2}) {
    const auto e = solver.endpoints(mu);
    const auto [c4, s4] = reconstruct_solutions(k4, mu, 1.0);
    const auto [c8, s8] = reconstruct_solutions(k8, mu, 1.0);
    CHECK(std::abs(c4 - e.c1) <= 1e-3);
    CHECK(std::abs(s4 - e.s1) <= 1e-4);
    CHECK(std::abs(c4 - e.c1) / std::abs(c8 - e.c1) >= 3.0);
  }
  const auto [c, s] = reconstruct_solutions(k8, pi2, 1.0);
  CHECK(std::abs(c - solver.endpoints(pi2).c1) <= 1e-4);
  CHECK(std::abs(s - solver.endpoints(pi2).s1) <= 1e-4);

  const Potential q = make(constant(2.0));
  const auto kq = solve_kernel(q, 400);
  CHECK(std::abs(reconstruct_solutions(kq, 0.0, 1.0).second - endpoint_data(q, 0.0).s1) <= 1e-4);
}

TEST_CASE("negative mu uses the hyperbolic continuation") {
  const Potential p = make(cosine(1.0));
  const auto k = solve_kernel(p, 400);
  const auto e = endpoint_data(p, -20.0);
  const auto [c, s] = reconstruct_solutions(k, -20.0, 1.0);
  CHECK(std::abs(c - e.c1) <= 1e-3);
  CHECK(std::abs(s - e.s1) <= 1e-3);
}

TEST_CASE("midpoint kernel") {
  const Potential p = make(cosine(1.0, 1.0, 0.3));
  const auto mk = shifted_kernel_view(p, 400);
  const double h = mk.spacing();
  for (int i = 0; i <= 400; i += 25) {
    const double x = i * h;
    const auto sl = mk.slice(x);
    // N(x, x) = (1/2) int_{1/2}^x q; N(x, 1 - x) = 0
    CHECK(sl.back().first == doctest::Approx(x));
    CHECK(sl.back().second == doctest::Approx(0.5 * (p.integral(x) - p.integral(0.5))).epsilon(1e-10));
    CHECK(std::abs(sl.front().second) <= 1e-14);
  }
  const auto t = integrate_fundamental(p, pi2);
  const auto m = midpoint_solutions(t);
  const Index stride = (t.grid.size() - 1) / 400;
  for (int i : {0, 100, 200, 300, 400}) {
    const auto [y1, y2] = reconstruct_midpoint_solutions(mk, pi2, i * h);
    CHECK(std::abs(y1 - m.y1[stride * i]) <= 2e-3);
    CHECK(std::abs(y2 - m.y2[stride * i]) <= 2e-3);
  }
}

TEST_CASE("kernel input errors") {
  const Potential p = make(constant(1.0));
  CHECK_THROWS_AS(solve_kernel(p, 1), InputError);
  CHECK_THROWS_AS(shifted_kernel_view(p, 101), InputError);
  const auto k = solve_kernel(p, 10);
  CHECK_THROWS_AS(reconstruct_solutions(k, 1.0, 0.55), InputError);
  KernelOptions o;
  o.max_iterations = 2;
  CHECK_THROWS_AS(solve_kernel(make(cosine(1.0, 40.0)), 50, o), NumericalError);
}
