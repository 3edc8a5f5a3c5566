#include "slspec/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "slspec/errors.hpp"
#include "slspec/potential_spec.hpp"
#include "slspec/shooting.hpp"

namespace slspec {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::ConsistentForward: return "consistent-forward";
    case Verdict::ConsistentConverse: return "consistent-converse";
    case Verdict::Inconsistent: return "inconsistent";
  }
  return "inconsistent";
}

Verdict parse_verdict(std::string_view s) {
  if (s == "consistent-forward") return Verdict::ConsistentForward;
  if (s == "consistent-converse") return Verdict::ConsistentConverse;
  if (s == "inconsistent") return Verdict::Inconsistent;
  throw InputError("unknown verdict '" + std::string(s) + "'");
}

Verdict verdict_from(bool condition_holds, bool spectral_holds) {
  if (condition_holds && spectral_holds) return Verdict::ConsistentForward;
  if (!condition_holds && !spectral_holds) return Verdict::ConsistentConverse;
  return Verdict::Inconsistent;
}

double zero_radius(const Potential& p, const Tolerances& tol) { return tol.zero * (1.0 + p.sup_abs()); }

namespace {

void require_count(int count) {
  if (count < 1) throw InputError("count must be >= 1");
}

// splits off |mu| <= r
std::vector<double> drop_zero(const std::vector<double>& v, double r, std::vector<double>& excluded) {
  std::vector<double> out;
  for (double mu : v) {
    if (std::abs(mu) <= r)
      excluded.push_back(mu);
    else
      out.push_back(mu);
  }
  return out;
}

ParityCheck parity_check(const Eigen::VectorXd& y, const Eigen::VectorXd& yp, double mu, const char* name, bool even,
                         bool dirichlet, double tol) {
  ParityCheck pc;
  pc.mu = mu;
  pc.function = name;
  pc.expected = even ? "even" : "odd";
  pc.boundary = dirichlet ? "dirichlet" : "neumann";
  const Index n = y.size() - 1;
  const double sup_y = std::max(y.cwiseAbs().maxCoeff(), 1e-300);
  const double sup_yp = std::max(yp.cwiseAbs().maxCoeff(), 1e-300);
  double sym = 0.0;
  for (Index i = 0; i <= n; ++i) sym = std::max(sym, std::abs(even ? y[i] - y[n - i] : y[i] + y[n - i]));
  pc.symmetry_defect = sym / sup_y;
  pc.boundary_defect = dirichlet ? std::max(std::abs(y[0]), std::abs(y[n])) / sup_y
                                 : std::max(std::abs(yp[0]), std::abs(yp[n])) / sup_yp;
  pc.passed = pc.symmetry_defect <= tol && pc.boundary_defect <= tol;
  return pc;
}

MultiplicityTally tally_of(const EigenvalueList& list, bool skip_lowest) {
  MultiplicityTally t;
  t.lowest_excluded = skip_lowest;
  for (std::size_t i = skip_lowest ? 1 : 0; i < list.entries.size(); ++i) {
    if (list.entries[i].multiplicity == 2)
      ++t.twofold;
    else
      ++t.simple;
  }
  return t;
}

void require_symmetric(const Potential& p, const Tolerances& tol, const char* what) {
  const ConditionReport sym = check_symmetry(p, tol.condition);
  if (!sym.satisfied)
    throw InputError(std::string(what) + " needs a symmetric potential (defect " + std::to_string(sym.residual_sup) +
                     ")");
  if (p.nodes() % 2 != 0) throw InputError(std::string(what) + " needs a node at the midpoint");
}

TheoremReport base_report(const char* name, const Potential& p, int count, const Tolerances& tol) {
  TheoremReport r;
  r.theorem = name;
  r.potential = p.spec();
  r.count = count;
  r.tolerances = tol;
  return r;
}

void add_case_labels(TheoremReport& r, const Potential& p, int count, BoundaryCondition bc, const SearchOptions& opts,
                     const Tolerances& tol) {
  const PeriodicClassification cls = classify_periodic_roots(p, count, bc, opts, tol.multiplicity);
  for (std::size_t k = 0; k < cls.roots.size(); ++k)
    r.labels["case_" + std::to_string(k)] = std::string(case_label(cls.roots[k].tag));
}

}  // namespace

SpectraComparison compare_spectra(const Potential& p, BoundaryCondition bc_a, BoundaryCondition bc_b, int count,
                                  bool exclude_zero, const Tolerances& tol, const SearchOptions& opts) {
  require_count(count);
  const int request = exclude_zero ? count + 1 : count;
  std::vector<double> la = eigenvalues(p, bc_a, request, opts).expanded();
  std::vector<double> lb = eigenvalues(p, bc_b, request, opts).expanded();
  SpectraComparison out;
  out.bc_a = bc_a;
  out.bc_b = bc_b;
  out.tolerance = tol.spectral;
  if (exclude_zero) {
    const double r = zero_radius(p, tol);
    la = drop_zero(la, r, out.excluded_a);
    lb = drop_zero(lb, r, out.excluded_b);
  }
  if (static_cast<int>(la.size()) < count || static_cast<int>(lb.size()) < count)
    throw NumericalError("fewer than " + std::to_string(count) + " eigenvalues left after exclusion");
  out.coincide = true;
  for (int k = 0; k < count; ++k) {
    SpectraPair pr{la[k], lb[k], std::abs(la[k] - lb[k])};
    out.max_gap = std::max(out.max_gap, pr.gap);
    if (pr.gap > tol.spectral * (1.0 + std::max(std::abs(pr.mu_a), std::abs(pr.mu_b)))) out.coincide = false;
    out.pairs.push_back(pr);
  }
  out.count_compared = count;
  return out;
}

TheoremReport verify_theorem1(const Potential& p, int count, const Tolerances& tol, const SearchOptions& opts) {
  TheoremReport r = base_report("T1", p, count, tol);
  const ConditionReport sym = check_symmetry(p, tol.condition);
  r.condition_residual = sym.residual_sup;
  r.condition_holds = sym.satisfied;
  r.evidence["condition_l2"] = sym.residual_l2;
  SpectraComparison cmp = compare_spectra(p, BoundaryCondition::DN, BoundaryCondition::ND, count, false, tol, opts);
  r.spectral_gap = cmp.max_gap;
  r.spectral_holds = cmp.coincide;
  r.comparison = std::move(cmp);
  r.verdict = verdict_from(r.condition_holds, r.spectral_holds);
  return r;
}

TheoremReport verify_theorem2(const Potential& p, int count, const Tolerances& tol, const SearchOptions& opts) {
  TheoremReport r = base_report("T2", p, count, tol);
  const ConditionReport bb = check_condition_BB(p, tol.condition);
  r.condition_residual = bb.residual_sup;
  r.condition_holds = bb.satisfied;
  r.evidence["condition_l2"] = bb.residual_l2;

  SpectraComparison cmp = compare_spectra(p, BoundaryCondition::D, BoundaryCondition::N, count, true, tol, opts);

  // 0 in the Neumann spectrum: |c'(1, 0)| against the radius scaled by the slope
  const FundamentalSolver<double> solver(p, opts.steps);
  const double delta = 1e-3;
  const double at0 = solver.endpoints(0.0).cp1;
  const double slope = (solver.endpoints(delta).cp1 - solver.endpoints(-delta).cp1) / (2.0 * delta);
  const double radius = zero_radius(p, tol);
  const bool zero_in_n = std::abs(at0) <= radius * std::abs(slope);
  r.evidence["cp1_at_zero"] = at0;
  r.evidence["cp1_slope_at_zero"] = slope;
  r.evidence["zero_radius"] = radius;
  r.evidence["zero_in_neumann"] = zero_in_n ? 1.0 : 0.0;

  r.spectral_gap = cmp.max_gap;
  r.spectral_holds = cmp.coincide && zero_in_n;
  r.comparison = std::move(cmp);
  r.verdict = verdict_from(r.condition_holds, r.spectral_holds);
  return r;
}

TheoremReport verify_theorem51(const Potential& p, int count, const Tolerances& tol, const SearchOptions& opts) {
  require_count(count);
  detail::require_interval(p.interval(), Interval{0.0, 1.0}, "T5.1");
  require_symmetric(p, tol, "T5.1");
  TheoremReport r = base_report("T5.1", p, count, tol);

  SearchOptions o = opts;
  o.multiplicity_tol = tol.multiplicity;
  EigenvalueList list = eigenvalues(p, BoundaryCondition::P, count, o);
  const double mu0 = list.entries.front().mu;

  const ConditionReport literal = check_condition_B_half(restrict(p, Interval{0.0, 0.5}), tol.condition);
  const ConditionReport normed =
      check_condition_B_half(restrict(shifted(p, -mu0), Interval{0.0, 0.5}), tol.condition);
  r.condition_residual = normed.residual_sup;
  r.condition_holds = normed.satisfied;
  r.evidence["lowest_eigenvalue"] = mu0;
  r.evidence["condition_residual_literal"] = literal.residual_sup;
  r.evidence["condition_l2"] = normed.residual_l2;

  const MultiplicityTally t = tally_of(list, true);
  bool parity_ok = true;
  const FundamentalSolver<double> solver(p, opts.steps);
  for (std::size_t k = 1; k < list.entries.size(); ++k) {
    if (list.entries[k].multiplicity != 2) continue;
    const auto tr = solver.trajectory(list.entries[k].mu);
    const Index mid = (tr.grid.size() - 1) / 2;
    const Eigen::VectorXd y1 = tr.sp[mid] * tr.c, y1p = tr.sp[mid] * tr.cp;
    const Eigen::VectorXd y2 = tr.c[mid] * tr.s, y2p = tr.c[mid] * tr.sp;
    r.parity.push_back(parity_check(y1, y1p, tr.mu, "y1", true, false, tol.parity));
    r.parity.push_back(parity_check(y2, y2p, tr.mu, "y2", false, true, tol.parity));
    parity_ok = parity_ok && r.parity[r.parity.size() - 1].passed && r.parity[r.parity.size() - 2].passed;
  }
  add_case_labels(r, p, count, BoundaryCondition::P, o, tol);

  // widest open P gap above the lowest eigenvalue
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < list.entries.size(); ++k)
    if (list.entries[k].multiplicity == 1) {
      worst = std::max(worst, list.entries[k + 1].mu - list.entries[k].mu);
      ++k;
    }
  r.spectral_gap = worst;
  r.spectral_holds = count >= 2 && t.simple == 0 && parity_ok;
  r.tally = t;
  r.spectrum = std::move(list);
  r.verdict = verdict_from(r.condition_holds, r.spectral_holds);
  return r;
}

TheoremReport verify_theorem52(const Potential& p, int count, const Tolerances& tol, const SearchOptions& opts) {
  require_count(count);
  require_symmetric(p, tol, "T5.2");
  TheoremReport r = base_report("T5.2", p, count, tol);
  const Interval& iv = p.interval();
  const ConditionReport half = check_symmetry(restrict(p, Interval{iv.a, iv.midpoint()}), tol.condition);
  r.condition_residual = half.residual_sup;
  r.condition_holds = half.satisfied;
  r.evidence["condition_l2"] = half.residual_l2;

  SearchOptions o = opts;
  o.multiplicity_tol = tol.multiplicity;
  EigenvalueList list = eigenvalues(p, BoundaryCondition::AP, count, o);
  const MultiplicityTally t = tally_of(list, false);

  bool parity_ok = true;
  const FundamentalSolver<double> solver(p, opts.steps);
  for (const auto& e : list.entries) {
    if (e.multiplicity != 2) continue;
    const auto tr = solver.trajectory(e.mu);
    const Index mid = (tr.grid.size() - 1) / 2;
    const Eigen::VectorXd y1 = -tr.cp[mid] * tr.s, y1p = -tr.cp[mid] * tr.sp;
    const Eigen::VectorXd y2 = -tr.s[mid] * tr.c, y2p = -tr.s[mid] * tr.cp;
    r.parity.push_back(parity_check(y1, y1p, tr.mu, "y1", true, true, tol.parity));
    r.parity.push_back(parity_check(y2, y2p, tr.mu, "y2", false, false, tol.parity));
    parity_ok = parity_ok && r.parity[r.parity.size() - 1].passed && r.parity[r.parity.size() - 2].passed;
  }
  add_case_labels(r, p, count, BoundaryCondition::AP, o, tol);

  // width of the widest open AP gap
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < list.entries.size(); ++k)
    if (list.entries[k].multiplicity == 1) {
      worst = std::max(worst, list.entries[k + 1].mu - list.entries[k].mu);
      ++k;
    }
  r.spectral_gap = worst;
  r.spectral_holds = t.simple == 0 && parity_ok;
  r.tally = t;
  r.spectrum = std::move(list);
  r.verdict = verdict_from(r.condition_holds, r.spectral_holds);
  return r;
}

TheoremReport verify_remark54(double c, int count, const Tolerances& tol, const SearchOptions& opts, int nodes) {
  require_count(count);
  if (!std::isfinite(c)) throw InputError("constant must be finite");
  if (nodes < 2) throw InputError("nodes must be >= 2");
  PotentialSpec spec;
  spec.kind = PotentialSpec::Kind::Const;
  spec.constant = c;
  spec.nodes = nodes;
  const Potential p = make_potential(spec);
  TheoremReport r = base_report("R5.4", p, count, tol);
  r.condition_residual = 0.0;
  r.condition_holds = true;

  const std::vector<double> d = eigenvalues(p, BoundaryCondition::D, count, opts).expanded();
  const std::vector<double> n = eigenvalues(p, BoundaryCondition::N, count + 1, opts).expanded();
  if (static_cast<int>(d.size()) < count || static_cast<int>(n.size()) < count + 1)
    throw NumericalError("too few eigenvalues for the constant-potential check");

  SpectraComparison cmp;
  cmp.bc_a = BoundaryCondition::D;
  cmp.bc_b = BoundaryCondition::N;
  cmp.tolerance = tol.spectral;
  cmp.excluded_b.push_back(n[0]);
  cmp.coincide = true;
  for (int k = 0; k < count; ++k) {
    SpectraPair pr{d[k], n[k + 1], std::abs(d[k] - n[k + 1])};
    cmp.max_gap = std::max(cmp.max_gap, pr.gap);
    if (pr.gap > tol.spectral * (1.0 + std::max(std::abs(pr.mu_a), std::abs(pr.mu_b)))) cmp.coincide = false;
    cmp.pairs.push_back(pr);
  }
  cmp.count_compared = count;
  const double lowest_gap = std::abs(n[0] - c);
  const bool c_in_n = lowest_gap <= tol.spectral * (1.0 + std::abs(c));
  r.evidence["constant"] = c;
  r.evidence["lowest_neumann"] = n[0];
  r.evidence["lowest_neumann_gap"] = lowest_gap;
  r.spectral_gap = std::max(cmp.max_gap, lowest_gap);
  r.spectral_holds = cmp.coincide && c_in_n;
  r.comparison = std::move(cmp);
  r.verdict = verdict_from(r.condition_holds, r.spectral_holds);
  return r;
}

const std::vector<std::string>& symmetric_identity_keys() {
  static const std::vector<std::string> keys = {"a",   "b",   "c",   "d_1",    "d_2",    "d_3",
                                                "e_1", "e_2", "e_3", "disc_P", "disc_AP"};
  return keys;
}

const std::vector<std::string>& translation_identity_keys() {
  static const std::vector<std::string> keys = {"translation_sp1_c1", "translation_cp1_s1"};
  return keys;
}

std::vector<double> default_identity_samples() {
  const double pi2 = M_PI * M_PI;
  return {0.0, 1.0, pi2, 10.0, 4.0 * pi2, 50.0, 9.0 * pi2, 100.0};
}

template <typename Scalar>
std::vector<IdentityRow> identity_residuals(const BasicPotential<Scalar>& p, const std::vector<double>& mu_samples,
                                            int steps) {
  const FundamentalSolver<Scalar> solver(p, steps);
  if (solver.steps() % 2 != 0) throw InputError("identity check needs a grid containing the midpoint");
  std::vector<IdentityRow> rows;
  for (double mu : mu_samples) {
    const EndpointData<Scalar> e = solver.endpoints(mu);
    const Scalar c = e.c_half, cp = e.cp_half, s = e.s_half, sp = e.sp_half;
    const Scalar delta = e.c1 + e.sp1;
    IdentityRow row;
    row.mu = mu;
    auto& m = row.residuals;
    m["a"] = std::abs(e.sp1 - e.c1);
    m["b"] = std::abs(e.s1 - Scalar(2) * s * sp);
    m["c"] = std::abs(e.cp1 - Scalar(2) * c * cp);
    m["d_1"] = std::abs(e.c1 - (c * sp + s * cp));
    m["d_2"] = std::abs(e.c1 - (Scalar(1) + Scalar(2) * s * cp));
    m["d_3"] = std::abs(e.c1 - (Scalar(2) * c * sp - Scalar(1)));
    m["e_1"] = std::abs(e.sp1 - (s * cp + sp * c));
    m["e_2"] = std::abs(e.sp1 - (Scalar(1) + Scalar(2) * s * cp));
    m["e_3"] = std::abs(e.sp1 - (Scalar(2) * c * sp - Scalar(1)));
    m["disc_P"] = std::abs(delta - Scalar(2) - Scalar(4) * s * cp);
    m["disc_AP"] = std::abs(delta + Scalar(2) - Scalar(4) * c * sp);

    // midpoint-normalized solutions at both ends
    const Scalar y1a = sp, y2a = -s, y1pa = -cp, y2pa = c;
    const Scalar y1b = sp * e.c1 - cp * e.s1, y1pb = sp * e.cp1 - cp * e.sp1;
    const Scalar y2b = c * e.s1 - s * e.c1, y2pb = c * e.sp1 - s * e.cp1;
    const Scalar lhs8 = y1a * y2pb - y1pb * y2a;
    const Scalar rhs8 = y2pa * y1b - y1pa * y2b;
    m["translation_sp1_c1"] = std::abs((lhs8 - rhs8) - (e.sp1 - e.c1));
    const Scalar lhs10 = y2pa * y1pb - y1pa * y2pb;
    const Scalar rhs10 = -mu * (y1a * y2b - y2a * y1b);
    m["translation_cp1_s1"] = std::abs((lhs10 - rhs10) - (e.cp1 + mu * e.s1));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename Scalar>
TheoremReport verify_identities(const BasicPotential<Scalar>& p, const std::vector<double>& mu_samples,
                                const Tolerances& tol, int steps) {
  if (mu_samples.empty()) throw InputError("identity check needs at least one mu sample");
  TheoremReport r;
  r.theorem = "IDENT";
  r.potential = p.spec();
  r.count = static_cast<int>(mu_samples.size());
  r.tolerances = tol;
  const ConditionReport sym = check_symmetry(p, tol.condition);
  r.condition_residual = sym.residual_sup;
  r.condition_holds = sym.satisfied;
  r.identities = identity_residuals(p, mu_samples, steps);
  double worst_sym = 0.0, worst_tr = 0.0;
  for (const auto& row : r.identities) {
    for (const auto& k : symmetric_identity_keys()) worst_sym = std::max(worst_sym, row.residuals.at(k));
    for (const auto& k : translation_identity_keys()) worst_tr = std::max(worst_tr, row.residuals.at(k));
  }
  r.evidence["max_symmetric_residual"] = worst_sym;
  r.evidence["max_translation_residual"] = worst_tr;
  r.spectral_gap = worst_sym;
  r.spectral_holds = worst_sym <= tol.identity;
  const bool translation_ok = worst_tr <= tol.identity;
  r.labels["translation"] = translation_ok ? "pass" : "fail";
  r.verdict = translation_ok ? verdict_from(r.condition_holds, r.spectral_holds) : Verdict::Inconsistent;
  return r;
}

template std::vector<IdentityRow> identity_residuals(const BasicPotential<double>&, const std::vector<double>&, int);
template std::vector<IdentityRow> identity_residuals(const BasicPotential<std::complex<double>>&,
                                                     const std::vector<double>&, int);
template TheoremReport verify_identities(const BasicPotential<double>&, const std::vector<double>&,
                                         const Tolerances&, int);
template TheoremReport verify_identities(const BasicPotential<std::complex<double>>&, const std::vector<double>&,
                                         const Tolerances&, int);

}  // namespace slspec
