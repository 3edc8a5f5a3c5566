// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "slspec/errors.hpp"
#include "slspec/goursat.hpp"
#include "slspec/potential_spec.hpp"
#include "slspec/shooting.hpp"
#include "slspec/spectra.hpp"
#include "slspec/verify.hpp"

using namespace slspec;
using BC = BoundaryCondition;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double pi2 = pi * pi;
const std::vector<BC> kAllBC = {BC::D, BC::N, BC::DN, BC::ND, BC::P, BC::AP};

struct Named {
  std::string name;
  Potential p;
  bool symmetric;
};

PotentialSpec spec_const(double c) {
  PotentialSpec s;
  s.kind = PotentialSpec::Kind::Const;
  s.constant = c;
  return s;
}

PotentialSpec spec_poly(std::vector<double> coefficients) {
  PotentialSpec s;
  s.kind = PotentialSpec::Kind::Poly;
  s.coefficients = std::move(coefficients);
  return s;
}

PotentialSpec spec_cos(double frequency) {
  PotentialSpec s;
  s.kind = PotentialSpec::Kind::Trig;
  s.terms.push_back({TrigTerm::Fn::Cos, 1.0, frequency, 0.0});
  return s;
}

PotentialSpec spec_exp() {
  PotentialSpec s;
  s.kind = PotentialSpec::Kind::Exp;
  s.amplitude = 1.0;
  s.rate = 1.0;
  return s;
}

Potential bb_potential() { return build_BB_potential(spec_poly({-2.0, 4.0}), 4000); }

const std::vector<Named>& acceptance_potentials() {
  static const std::vector<Named> all = {
      {"q=0", make_potential(spec_const(0.0)), true},
      {"q=5", make_potential(spec_const(5.0)), true},
      {"q=-3", make_potential(spec_const(-3.0)), true},
      {"cos2pix", make_potential(spec_cos(1.0)), true},
      {"cos4pix", make_potential(spec_cos(2.0)), true},
      {"3x(1-x)", make_potential(spec_poly({0.0, 3.0, -3.0})), true},
      {"x", make_potential(spec_poly({0.0, 1.0})), false},
      {"e^x", make_potential(spec_exp()), false},
      {"bb(4(x-1/2))", bb_potential(), false},
  };
  return all;
}

// shooting spectra, shared by the oracle and integrator criteria
const EigenvalueList& shooting(std::size_t potential, BC bc) {
  static std::map<std::pair<std::size_t, int>, EigenvalueList> cache;
  const auto key = std::make_pair(potential, static_cast<int>(bc));
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, eigenvalues(acceptance_potentials()[potential].p, bc, 8)).first;
  return it->second;
}

std::vector<double> first(const EigenvalueList& l, std::size_t n) {
  auto v = l.expanded();
  v.resize(std::min(n, v.size()));
  return v;
}

class Criterion {
 public:
  explicit Criterion(int id) : id_(id) {}
  void check(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void note(const std::string& s) { notes_.push_back(s); }
  bool passed() const { return failures_.empty(); }
  void print(const std::string& title, double seconds) const {
    std::printf("%s criterion %d: %s (%.1f s)", passed() ? "PASS" : "FAIL", id_, title.c_str(), seconds);
    for (const auto& n : notes_) std::printf("; %s", n.c_str());
    for (const auto& f : failures_) std::printf("; failed: %s", f.c_str());
    std::printf("\n");
    std::fflush(stdout);
  }

 private:
  int id_;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void free_closed_forms(Criterion& c) {
  const Potential& z = acceptance_potentials()[0].p;
  std::map<BC, std::vector<double>> exact;
  for (int n = 1; n <= 6; ++n) {
    exact[BC::D].push_back(n * n * pi2);
    exact[BC::N].push_back((n - 1) * (n - 1) * pi2);
    exact[BC::DN].push_back(std::pow((n - 0.5) * pi, 2));
    exact[BC::ND].push_back(std::pow((n - 0.5) * pi, 2));
  }
  exact[BC::P] = {0.0, 4 * pi2, 4 * pi2, 16 * pi2, 16 * pi2, 36 * pi2};
  exact[BC::AP] = {pi2, pi2, 9 * pi2, 9 * pi2, 25 * pi2, 25 * pi2};
  double worst = 0.0;
  for (BC bc : kAllBC) {
    const auto got = first(eigenvalues(z, bc, 6), 6);
    c.check(got.size() == 6, std::string(to_string(bc)) + " count");
    for (std::size_t k = 0; k < got.size(); ++k) {
      const double e = exact[bc][k];
      const double rel = std::abs(got[k] - e) / std::max(1.0, std::abs(e));
      worst = std::max(worst, rel);
      c.check(rel <= 1e-7, std::string(to_string(bc)) + " entry " + std::to_string(k));
    }
  }
  c.note("worst relative error " + fmt(worst));
}

void constant_potentials(Criterion& c) {
  Tolerances tol;
  tol.spectral = 1e-7;
  for (double v : {-3.0, 0.0, 5.0}) {
    const auto r = verify_remark54(v, 6, tol);
    c.check(r.comparison && r.comparison->coincide, "D/N coincidence for c=" + fmt(v));
    c.check(std::abs(r.evidence.at("lowest_neumann") - v) <= 1e-7 * (1.0 + std::abs(v)), "c in N spectrum for c=" + fmt(v));
    c.check(r.verdict == Verdict::ConsistentForward, "verdict for c=" + fmt(v));
    c.note("c=" + fmt(v) + " gap " + fmt(r.comparison->max_gap));
  }
}

void theorem1(Criterion& c) {
  const auto& ps = acceptance_potentials();
  for (std::size_t i : {3u, 5u}) {
    const auto r = verify_theorem1(ps[i].p, 8);
    c.check(r.comparison->max_gap <= 1e-5, ps[i].name + " DN/ND gap " + fmt(r.comparison->max_gap));
    c.check(r.verdict == Verdict::ConsistentForward, ps[i].name + " verdict");
    c.note(ps[i].name + " gap " + fmt(r.comparison->max_gap));
  }
  for (std::size_t i : {6u, 7u}) {
    const auto r = verify_theorem1(ps[i].p, 8);
    c.check(r.comparison->max_gap >= 1e-3, ps[i].name + " DN/ND gap " + fmt(r.comparison->max_gap));
    c.check(r.verdict == Verdict::ConsistentConverse, ps[i].name + " verdict");
    c.note(ps[i].name + " gap " + fmt(r.comparison->max_gap));
  }
}

void theorem2(Criterion& c) {
  Tolerances tol;
  tol.spectral = 1e-4;
  tol.condition = 1e-5;
  const auto r = verify_theorem2(acceptance_potentials()[8].p, 6, tol);
  c.check(r.condition_residual <= 1e-5, "BB residual " + fmt(r.condition_residual));
  c.check(r.comparison->coincide, "D/N gap " + fmt(r.comparison->max_gap));
  c.check(r.evidence.at("zero_in_neumann") == 1.0, "zero in Neumann spectrum");
  c.check(r.verdict == Verdict::ConsistentForward, "verdict");
  c.note("BB residual " + fmt(r.condition_residual) + ", gap " + fmt(r.comparison->max_gap) + ", |c'(1,0)| " +
         fmt(std::abs(r.evidence.at("cp1_at_zero"))));

  const auto n = verify_theorem2(acceptance_potentials()[3].p, 6, tol);
  c.check(!n.condition_holds, "cos2pix satisfies BB");
  c.check(n.comparison->max_gap >= 1e-3, "cos2pix D/N gap " + fmt(n.comparison->max_gap));
  c.note("cos2pix gap " + fmt(n.comparison->max_gap));
}

void identities(Criterion& c) {
  const std::vector<double> mus = {0.0, 1.0, pi2, 10.0, 4 * pi2, 50.0, 9 * pi2, 100.0};
  double worst = 0.0;
  for (const auto& np : acceptance_potentials()) {
    if (!np.symmetric) continue;
    for (const auto& row : identity_residuals(np.p, mus)) {
      for (const auto& key : symmetric_identity_keys()) {
        const double v = row.residuals.at(key);
        worst = std::max(worst, v);
        c.check(v <= 1e-7, np.name + " " + key + " at mu=" + fmt(row.mu) + ": " + fmt(v));
      }
    }
  }
  c.note("worst residual " + fmt(worst));
}

void periodic_structure(Criterion& c) {
  const auto& ps = acceptance_potentials();
  auto parity_ok = [&](const TheoremReport& r, const std::string& what) {
    for (const auto& pc : r.parity) c.check(pc.passed, what + " parity at mu=" + fmt(pc.mu));
  };
  for (std::size_t i : {0u, 1u}) {
    const auto p = verify_theorem51(ps[i].p, 7);
    c.check(p.tally->simple == 0 && p.tally->twofold == 6, ps[i].name + " P not all double above the lowest");
    c.check(p.verdict == Verdict::ConsistentForward, ps[i].name + " T5.1 verdict");
    parity_ok(p, ps[i].name + " P");
    const auto a = verify_theorem52(ps[i].p, 6);
    c.check(a.tally->simple == 0, ps[i].name + " AP not all double");
    c.check(a.verdict == Verdict::ConsistentForward, ps[i].name + " T5.2 verdict");
    parity_ok(a, ps[i].name + " AP");
  }
  const auto c4 = verify_theorem52(ps[4].p, 6);
  c.check(c4.condition_holds, "cos4pix fails q(x)=q(1/2-x)");
  c.check(c4.tally->simple == 0, "cos4pix AP not all double");
  c.check(c4.verdict == Verdict::ConsistentForward, "cos4pix T5.2 verdict");
  parity_ok(c4, "cos4pix AP");

  const auto c2 = eigenvalues(ps[3].p, BC::AP, 2);
  const auto fd = fd_oracle_eigenvalues(ps[3].p, BC::AP, 800, 2);
  const double gap = c2.entries.size() >= 2 ? c2.entries[1].mu - c2.entries[0].mu : 0.0;
  const double fd_gap = fd.entries.size() >= 2 ? fd.entries[1].mu - fd.entries[0].mu : 0.0;
  c.check(c2.entries[0].multiplicity == 1 && gap >= 0.1, "cos2pix lowest AP gap " + fmt(gap));
  c.check(fd_gap >= 0.1, "FD cos2pix lowest AP gap " + fmt(fd_gap));
  c.note("cos2pix AP gap " + fmt(gap) + " (FD " + fmt(fd_gap) + ")");
}

void goursat(Criterion& c) {
  const auto& ps = acceptance_potentials();
  const auto zero = solve_kernel(ps[0].p, 400);
  c.check(zero.sup_abs() == 0.0, "q=0 kernel not identically zero");

  const Potential& p = ps[3].p;
  const auto k400 = solve_kernel(p, 400);
  const auto k800 = solve_kernel(p, 800);
  for (double mu : {0.0, pi2, 4 * pi2}) {
    const auto e = endpoint_data(p, mu);
    const auto [c4, s4] = reconstruct_solutions(k400, mu, 1.0);
    const auto [c8, s8] = reconstruct_solutions(k800, mu, 1.0);
    const double err4 = std::max(std::abs(c4 - e.c1), std::abs(s4 - e.s1));
    const double err8 = std::max(std::abs(c8 - e.c1), std::abs(s8 - e.s1));
    c.check(err4 <= 1e-3, "mu=" + fmt(mu) + " lattice 400 error " + fmt(err4));
    c.check(err4 >= 3.0 * err8, "mu=" + fmt(mu) + " improvement " + fmt(err4 / err8));
    c.note("mu=" + fmt(mu) + " err " + fmt(err4) + " -> " + fmt(err8));
  }
}

void oracle(Criterion& c) {
  const auto& ps = acceptance_potentials();
  double worst_ratio_lo = 1e300, worst_ratio_hi = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (BC bc : kAllBC) {
      const auto shoot = first(shooting(i, bc), 8);
      double dis[2] = {0.0, 0.0};
      int idx = 0;
      for (int cells : {400, 800}) {
        const double h = 1.0 / cells;
        const auto fd = first(fd_oracle_eigenvalues(ps[i].p, bc, fd_dim_for_cells(bc, cells), 8), 8);
        const std::string tag = ps[i].name + " " + std::string(to_string(bc)) + " cells " + std::to_string(cells);
        c.check(fd.size() == shoot.size() && shoot.size() == 8, tag + " count");
        for (std::size_t k = 0; k < std::min(fd.size(), shoot.size()); ++k) {
          const double d = std::abs(fd[k] - shoot[k]);
          const double bound = std::max(1e-5, std::pow(1.0 + std::abs(shoot[k]), 2) / 6.0 * h * h);
          c.check(d <= bound, tag + " entry " + std::to_string(k) + " off by " + fmt(d));
          dis[idx] = std::max(dis[idx], d);
        }
        ++idx;
      }
      const double ratio = dis[0] / dis[1];
      worst_ratio_lo = std::min(worst_ratio_lo, ratio);
      worst_ratio_hi = std::max(worst_ratio_hi, ratio);
      c.check(ratio >= 3.5 && ratio <= 4.5, ps[i].name + " " + std::string(to_string(bc)) + " ratio " + fmt(ratio));
    }
  }
  c.note("halving ratios in [" + fmt(worst_ratio_lo) + ", " + fmt(worst_ratio_hi) + "]");
}

void integrator(Criterion& c) {
  const auto& ps = acceptance_potentials();
  double worst = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (BC bc : kAllBC) {
      for (const auto& e : shooting(i, bc).entries) {
        const double w = wronskian_residual(integrate_fundamental(ps[i].p, e.mu));
        worst = std::max(worst, w);
        c.check(w <= 1e-8, ps[i].name + " " + std::string(to_string(bc)) + " Wronskian " + fmt(w));
      }
    }
  }
  PotentialSpec s = spec_cos(1.0);
  s.nodes = 20;
  const Potential p = make_potential(s);
  const double a = endpoint_data(p, 100.0, 40).s1;
  const double b = endpoint_data(p, 100.0, 80).s1;
  const double d = endpoint_data(p, 100.0, 160).s1;
  const double ratio = (a - b) / (b - d);
  c.check(ratio >= 14.0 && ratio <= 18.0, "Richardson ratio " + fmt(ratio));
  c.note("worst Wronskian " + fmt(worst) + ", Richardson ratio " + fmt(ratio));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> criteria = {
      {"free-potential closed forms", free_closed_forms},
      {"constant potentials, D equals N without c", constant_potentials},
      {"DN/ND coincidence for symmetric q", theorem1},
      {"D/N coincidence for a BB potential", theorem2},
      {"symmetric-potential identities", identities},
      {"periodic and antiperiodic double eigenvalues", periodic_structure},
      {"transformation kernel reconstruction", goursat},
      {"finite-difference oracle agreement", oracle},
      {"integrator health", integrator},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Criterion c(static_cast<int>(i + 1));
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.print(criteria[i].first, secs);
    if (!c.passed()) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
