#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "slspec/potential.hpp"
#include "slspec/shooting.hpp"

namespace slspec {

/// D: y(a)=y(b)=0; N: y'(a)=y'(b)=0; DN: y(a)=y'(b)=0; ND: y'(a)=y(b)=0;
/// P: y(a)=y(b), y'(a)=y'(b); AP: y(a)=-y(b), y'(a)=-y'(b).
enum class BoundaryCondition { D, N, DN, ND, P, AP };

std::string_view to_string(BoundaryCondition bc);
BoundaryCondition parse_boundary_condition(std::string_view name);
inline bool is_periodic(BoundaryCondition bc) { return bc == BoundaryCondition::P || bc == BoundaryCondition::AP; }

struct EigenvalueEntry {
  double mu = 0.0;
  int multiplicity = 1;
  double residual = 0.0;  // |characteristic function| at mu
};

struct EigenvalueList {
  BoundaryCondition bc = BoundaryCondition::D;
  int count_requested = 0;
  std::vector<EigenvalueEntry> entries;

  /// Eigenvalues repeated according to multiplicity.
  std::vector<double> expanded() const;
};

struct SearchOptions {
  int steps = 0;                    // integrator steps; 0 selects 2 M
  double window_pad = 0.0;          // widens the scan window on both sides
  double root_tol = 1e-12;          // bisection stops at |dmu| <= root_tol (1 + |mu|)
  double tangency_tol = 1e-9;       // |Delta -+ 2| below this (1 + |mu|) triggers tangency handling
  double multiplicity_tol = 1e-6;   // |s(1)|, |c'(1)| below this (1 + |mu|) and |c(1) - s'(1)| below this mean a double eigenvalue
};

/// s1 (D), c'1 (N), s'1 (DN), c1 (ND), Delta - 2 (P), Delta + 2 (AP).
double char_value(const EndpointData<double>& e, BoundaryCondition bc);
double char_value(const Potential& p, BoundaryCondition bc, double mu, int steps = 0);

/// Delta(mu) = c(1, mu) + s'(1, mu).
double hill_discriminant(const Potential& p, double mu, int steps = 0);

/// First `count` eigenvalues (distinct entries; P/AP entries carry multiplicity 1 or 2).
EigenvalueList eigenvalues(const Potential& p, BoundaryCondition bc, int count, const SearchOptions& opts = {});

/// 2 when the monodromy at a located P/AP eigenvalue is +-identity, otherwise 1.
int multiplicity(const Potential& p, double mu, BoundaryCondition bc, const SearchOptions& opts = {});

/// Which midpoint factors vanish at a P/AP eigenvalue of a symmetric potential.
/// P:  first = s(1/2),  second = c'(1/2).   AP: first = c(1/2), second = s'(1/2).
enum class RootCase { First, Second, Both, Neither };
std::string_view case_label(RootCase c);  // "(i)", "(ii)", "(iii)", "none"

struct ClassifiedRoot {
  double mu = 0.0;
  int multiplicity = 1;
  RootCase tag = RootCase::Neither;
  double first_factor = 0.0;
  double second_factor = 0.0;
};

struct PeriodicClassification {
  BoundaryCondition bc = BoundaryCondition::P;
  std::vector<ClassifiedRoot> roots;
};

PeriodicClassification classify_periodic_roots(const Potential& p, int count, BoundaryCondition bc,
                                               const SearchOptions& opts = {}, double symmetry_tol = 1e-6);

/// Matrix size giving uniform cell width 1 / cells for the given boundary condition.
int fd_dim_for_cells(BoundaryCondition bc, int cells);
/// Cell width of the finite-difference grid with `dim` unknowns.
double fd_step(const Potential& p, BoundaryCondition bc, int dim);

/// Second-order finite differences on `dim` unknowns; smallest `count` distinct eigenvalues.
EigenvalueList fd_oracle_eigenvalues(const Potential& p, BoundaryCondition bc, int dim, int count);

}  // namespace slspec
