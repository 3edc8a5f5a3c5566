#include "slspec/spectra.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

namespace slspec {

namespace {

using std::numbers::pi;

constexpr int kMaxBisection = 200;

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

class Searcher {
 public:
  Searcher(const Potential& p, const SearchOptions& opts)
      : solver_(p, opts.steps), opts_(opts), len_(p.interval().length()),
        qmin_(p.samples().minCoeff()), qsup_(p.sup_abs()) {}

  const FundamentalSolver<double>& solver() const { return solver_; }

  double lower() const { return qmin_ - 1.0 - opts_.window_pad; }

  double upper(int count) const {
    const double k = (count + 2) * pi / len_;
    return k * k + qsup_ + opts_.window_pad;
  }

  // pi^2/8 (scaled to the interval length) at low mu, proportional to sqrt(mu) above.
  double scan_step(double mu) const {
    const double knee = 10.0 / (len_ * len_);
    if (mu < knee) return pi * pi / (8.0 * len_ * len_);
    return pi / (8.0 * len_) * std::sqrt(mu);
  }

  double bisect(const std::function<double(double)>& g, double lo, double hi) const {
    double glo = g(lo);
    double ghi = g(hi);
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    if ((glo > 0) == (ghi > 0))
      throw NumericalError("root not bracketed in [" + fmt_double(lo) + ", " + fmt_double(hi) + "]");
    for (int it = 0; it < kMaxBisection; ++it) {
      const double scale = 1.0 + std::max(std::abs(lo), std::abs(hi));
      if (hi - lo <= opts_.root_tol * scale) break;
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double gm = g(mid);
      if (gm == 0.0) return mid;
      if ((gm > 0) == (glo > 0)) {
        lo = mid;
        glo = gm;
      } else {
        hi = mid;
        ghi = gm;
      }
    }
    return 0.5 * (lo + hi);
  }

  // Golden-section search for the maximum of g on [lo, hi].
  std::pair<double, double> golden_max(const std::function<double(double)>& g, double lo, double hi) const {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double g1 = g(x1), g2 = g(x2);
    for (int it = 0; it < kMaxBisection; ++it) {
      if (hi - lo <= 1e-13 * (1.0 + std::abs(lo) + std::abs(hi))) break;
      if (g1 < g2) {
        lo = x1;
        x1 = x2;
        g1 = g2;
        x2 = lo + inv_phi * (hi - lo);
        g2 = g(x2);
      } else {
        hi = x2;
        x2 = x1;
        g2 = g1;
        x1 = hi - inv_phi * (hi - lo);
        g1 = g(x1);
      }
    }
    return g1 > g2 ? std::pair{x1, g1} : std::pair{x2, g2};
  }

  std::vector<EigenvalueEntry> simple_roots(BoundaryCondition bc, int count) const {
    auto f = [&](double mu) { return char_value(solver_.endpoints(mu), bc); };
    std::vector<EigenvalueEntry> roots;
    const double lo = lower();
    const double hi = upper(count);
    double mu = lo;
    double fmu = f(mu);
    auto record = [&](double root) {
      roots.push_back({root, 1, std::abs(f(root))});
    };
    while (static_cast<int>(roots.size()) < count) {
      if (mu > hi)
        throw NumericalError("found " + std::to_string(roots.size()) + " of " + std::to_string(count) + " " +
                             std::string(to_string(bc)) + " eigenvalues in window [" + fmt_double(lo) + ", " +
                             fmt_double(hi) + "]");
      const double next = mu + scan_step(mu);
      const double fnext = f(next);
      if (fnext == 0.0) {
        record(next);
        mu = next + 1e-7 * scan_step(next);
        fmu = f(mu);
        continue;
      }
      if ((fmu > 0) != (fnext > 0) && fmu != 0.0) record(bisect(f, mu, next));
      mu = next;
      fmu = fnext;
    }
    return roots;
  }

  // Periodic (sign = +1) or anti-periodic (sign = -1) eigenvalues. The k-th Dirichlet
  // eigenvalue sits in the closure of the k-th instability interval, where
  // (-1)^k Delta >= 2; even k are periodic gaps, odd k anti-periodic ones.
  std::vector<EigenvalueEntry> periodic_roots(BoundaryCondition bc, int count) const {
    const double sign = bc == BoundaryCondition::P ? 1.0 : -1.0;
    auto g = [&](double mu) {
      const auto e = solver_.endpoints(mu);
      return sign * (e.c1 + e.sp1) - 2.0;
    };
    std::vector<double> dirichlet;
    for (const auto& r : simple_roots(BoundaryCondition::D, 2 * count + 1)) dirichlet.push_back(r.mu);

    std::vector<EigenvalueEntry> out;
    const double lo = lower();
    if (bc == BoundaryCondition::P) {
      const double mu0 = bisect(g, lo, dirichlet[0]);
      out.push_back({mu0, 1, std::abs(g(mu0))});
    }
    for (int k = bc == BoundaryCondition::P ? 2 : 1; static_cast<int>(out.size()) < count; k += 2) {
      if (k >= static_cast<int>(dirichlet.size()))
        throw NumericalError("ran out of Dirichlet anchors while locating " + std::string(to_string(bc)) +
                             " eigenvalues");
      const double left = k >= 2 ? dirichlet[k - 2] : lo;
      const double anchor = dirichlet[k - 1];
      const double right = dirichlet[k];
      const auto e = solver_.endpoints(anchor);
      const double g0 = sign * (e.c1 + e.sp1) - 2.0;
      const double scale = 1.0 + std::abs(anchor);
      if (std::abs(e.s1) <= opts_.multiplicity_tol * scale && std::abs(e.cp1) <= opts_.multiplicity_tol * scale &&
          std::abs(e.c1 - e.sp1) <= opts_.multiplicity_tol) {
        out.push_back({anchor, 2, std::abs(g0)});
        continue;
      }
      double peak = anchor;
      if (g0 <= opts_.tangency_tol * scale) {
        const auto [arg, val] = golden_max(g, 0.5 * (left + anchor), 0.5 * (anchor + right));
        if (!(val > 0.0))
          throw NumericalError("tangency refinement did not converge near mu = " + fmt_double(anchor) +
                               " (max " + fmt_double(val) + ")");
        peak = arg;
      }
      const double r1 = bisect(g, left, peak);
      const double r2 = bisect(g, peak, right);
      out.push_back({r1, 1, std::abs(g(r1))});
      if (static_cast<int>(out.size()) < count) out.push_back({r2, 1, std::abs(g(r2))});
    }
    return out;
  }

 private:
  FundamentalSolver<double> solver_;
  SearchOptions opts_;
  double len_;
  double qmin_;
  double qsup_;
};

struct Tridiagonal {
  Eigen::VectorXd diag;
  Eigen::VectorXd off;  // off[i] couples i and i+1
};

// Number of eigenvalues strictly below x (Sturm sequence via LDL^T pivots).
int sturm_count(const Tridiagonal& t, double x) {
  const Index n = t.diag.size();
  // zero pivots are nudged to -pivmin, as in LAPACK's dstebz
  const double off2 = n > 1 ? t.off.cwiseAbs2().maxCoeff() : 0.0;
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, off2);
  int count = 0;
  double d = t.diag[0] - x;
  for (Index i = 0; i < n; ++i) {
    if (i > 0) d = t.diag[i] - x - t.off[i - 1] * t.off[i - 1] / d;
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0) ++count;
  }
  return count;
}

std::vector<double> tridiagonal_smallest(const Tridiagonal& t, int wanted) {
  const Index n = t.diag.size();
  double glo = t.diag[0], ghi = t.diag[0];
  for (Index i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(t.off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(t.off[i]) : 0.0);
    glo = std::min(glo, t.diag[i] - r);
    ghi = std::max(ghi, t.diag[i] + r);
  }
  std::vector<double> out;
  for (int k = 0; k < wanted; ++k) {
    double lo = glo, hi = ghi;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (sturm_count(t, mid) > k)
        hi = mid;
      else
        lo = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

EigenvalueList clustered(BoundaryCondition bc, int count, std::vector<double> values) {
  std::sort(values.begin(), values.end());
  EigenvalueList list;
  list.bc = bc;
  list.count_requested = count;
  for (double v : values) {
    if (!list.entries.empty()) {
      auto& last = list.entries.back();
      if (std::abs(v - last.mu) <= 1e-7 * (1.0 + std::abs(v)) && last.multiplicity < 2 && is_periodic(bc)) {
        last.mu = 0.5 * (last.mu + v);
        last.multiplicity = 2;
        continue;
      }
    }
    if (static_cast<int>(list.entries.size()) == count) break;
    list.entries.push_back({v, 1, 0.0});
  }
  return list;
}

int fd_cells(BoundaryCondition bc, int dim) {
  switch (bc) {
    case BoundaryCondition::D: return dim + 1;
    case BoundaryCondition::N: return dim - 1;
    default: return dim;
  }
}

}  // namespace

std::string_view to_string(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::D: return "D";
    case BoundaryCondition::N: return "N";
    case BoundaryCondition::DN: return "DN";
    case BoundaryCondition::ND: return "ND";
    case BoundaryCondition::P: return "P";
    case BoundaryCondition::AP: return "AP";
  }
  return "?";
}

BoundaryCondition parse_boundary_condition(std::string_view name) {
  for (auto bc : {BoundaryCondition::D, BoundaryCondition::N, BoundaryCondition::DN, BoundaryCondition::ND,
                  BoundaryCondition::P, BoundaryCondition::AP}) {
    if (to_string(bc) == name) return bc;
  }
  throw InputError("unknown boundary condition '" + std::string(name) + "' (expected D, N, DN, ND, P or AP)");
}

std::string_view case_label(RootCase c) {
  switch (c) {
    case RootCase::First: return "(i)";
    case RootCase::Second: return "(ii)";
    case RootCase::Both: return "(iii)";
    case RootCase::Neither: return "none";
  }
  return "none";
}

std::vector<double> EigenvalueList::expanded() const {
  std::vector<double> out;
  for (const auto& e : entries)
    for (int k = 0; k < e.multiplicity; ++k) out.push_back(e.mu);
  return out;
}

double char_value(const EndpointData<double>& e, BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::D: return e.s1;
    case BoundaryCondition::N: return e.cp1;
    case BoundaryCondition::DN: return e.sp1;
    case BoundaryCondition::ND: return e.c1;
    case BoundaryCondition::P: return e.c1 + e.sp1 - 2.0;
    case BoundaryCondition::AP: return e.c1 + e.sp1 + 2.0;
  }
  return 0.0;
}

double char_value(const Potential& p, BoundaryCondition bc, double mu, int steps) {
  return char_value(endpoint_data(p, mu, steps), bc);
}

double hill_discriminant(const Potential& p, double mu, int steps) {
  const auto e = endpoint_data(p, mu, steps);
  return e.c1 + e.sp1;
}

EigenvalueList eigenvalues(const Potential& p, BoundaryCondition bc, int count, const SearchOptions& opts) {
  if (count < 1) throw InputError("eigenvalue count must be >= 1");
  Searcher searcher(p, opts);
  EigenvalueList list;
  list.bc = bc;
  list.count_requested = count;
  list.entries = is_periodic(bc) ? searcher.periodic_roots(bc, count) : searcher.simple_roots(bc, count);
  return list;
}

int multiplicity(const Potential& p, double mu, BoundaryCondition bc, const SearchOptions& opts) {
  if (!is_periodic(bc)) throw InputError("multiplicity is defined for P and AP eigenvalues only");
  const auto e = endpoint_data(p, mu, opts.steps);
  const double scale = 1.0 + std::abs(mu);
  const double residual = std::abs(char_value(e, bc));
  if (residual > 1e-8 * scale)
    throw InputError("mu = " + fmt_double(mu) + " is not a " + std::string(to_string(bc)) +
                     " eigenvalue (characteristic residual " + fmt_double(residual) + ")");
  const double tol = opts.multiplicity_tol * scale;
  // monodromy must be +-I
  return std::abs(e.s1) <= tol && std::abs(e.cp1) <= tol && std::abs(e.c1 - e.sp1) <= opts.multiplicity_tol ? 2 : 1;
}

PeriodicClassification classify_periodic_roots(const Potential& p, int count, BoundaryCondition bc,
                                               const SearchOptions& opts, double symmetry_tol) {
  if (!is_periodic(bc)) throw InputError("classify_periodic_roots needs P or AP");
  const auto sym = check_symmetry(p, symmetry_tol);
  if (!sym.satisfied)
    throw InputError("classify_periodic_roots needs a symmetric potential (residual " +
                     fmt_double(sym.residual_sup) + ")");
  const auto list = eigenvalues(p, bc, count, opts);
  const FundamentalSolver<double> solver(p, opts.steps);
  PeriodicClassification out;
  out.bc = bc;
  for (const auto& entry : list.entries) {
    const auto e = solver.endpoints(entry.mu);
    ClassifiedRoot r;
    r.mu = entry.mu;
    r.multiplicity = entry.multiplicity;
    const double root = std::sqrt(1.0 + std::abs(entry.mu));
    double first_scaled = 0.0, second_scaled = 0.0;
    if (bc == BoundaryCondition::P) {
      r.first_factor = e.s_half;
      r.second_factor = e.cp_half;
      first_scaled = std::abs(e.s_half) * root;
      second_scaled = std::abs(e.cp_half) / root;
    } else {
      r.first_factor = e.c_half;
      r.second_factor = e.sp_half;
      first_scaled = std::abs(e.c_half);
      second_scaled = std::abs(e.sp_half);
    }
    const bool first = first_scaled <= opts.multiplicity_tol;
    const bool second = second_scaled <= opts.multiplicity_tol;
    r.tag = first && second ? RootCase::Both : first ? RootCase::First : second ? RootCase::Second : RootCase::Neither;
    out.roots.push_back(r);
  }
  return out;
}

int fd_dim_for_cells(BoundaryCondition bc, int cells) {
  switch (bc) {
    case BoundaryCondition::D: return cells - 1;
    case BoundaryCondition::N: return cells + 1;
    default: return cells;
  }
}

double fd_step(const Potential& p, BoundaryCondition bc, int dim) {
  return p.interval().length() / fd_cells(bc, dim);
}

EigenvalueList fd_oracle_eigenvalues(const Potential& p, BoundaryCondition bc, int dim, int count) {
  if (count < 1) throw InputError("eigenvalue count must be >= 1");
  if (dim < 50) throw InputError("finite-difference oracle needs dim >= 50");
  if (dim < 10 * count) throw InputError("finite-difference oracle needs dim >= 10 * count");
  const double h = fd_step(p, bc, dim);
  const double a = p.interval().a;
  const double inv_h2 = 1.0 / (h * h);
  // Offset of unknown 0 from the left end, in cells.
  const int first = (bc == BoundaryCondition::D || bc == BoundaryCondition::DN) ? 1 : 0;

  Tridiagonal t;
  t.diag.resize(dim);
  t.off = Eigen::VectorXd::Constant(dim - 1, -inv_h2);
  for (int i = 0; i < dim; ++i) t.diag[i] = 2.0 * inv_h2 + p(a + (i + first) * h);
  // Ghost-node Neumann ends, symmetrized by scaling the boundary unknown by sqrt(2).
  if (bc == BoundaryCondition::N || bc == BoundaryCondition::ND) t.off[0] = -std::sqrt(2.0) * inv_h2;
  if (bc == BoundaryCondition::N || bc == BoundaryCondition::DN) t.off[dim - 2] = -std::sqrt(2.0) * inv_h2;

  if (!is_periodic(bc)) return clustered(bc, count, tridiagonal_smallest(t, count));

  if (dim > 4000) throw InputError("periodic finite-difference oracle is dense; dim must be <= 4000");
  // node 0 carries the jump q(a) -> q(b) of the periodic extension; average the one-sided values
  t.diag[0] = 2.0 * inv_h2 + 0.5 * (p(a) + p(p.interval().b));
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  m.diagonal() = t.diag;
  m.diagonal(1) = t.off;
  m.diagonal(-1) = t.off;
  const double corner = bc == BoundaryCondition::P ? -inv_h2 : inv_h2;
  m(0, dim - 1) = corner;
  m(dim - 1, 0) = corner;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed in finite-difference oracle");
  const Eigen::VectorXd& ev = es.eigenvalues();
  std::vector<double> values(ev.data(), ev.data() + std::min<Index>(ev.size(), 2 * count + 2));
  return clustered(bc, count, std::move(values));
}

}  // namespace slspec
