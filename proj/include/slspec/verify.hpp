#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slspec/potential.hpp"
#include "slspec/spectra.hpp"

namespace slspec {

struct SpectraPair {
  double mu_a = 0.0;
  double mu_b = 0.0;
  double gap = 0.0;
};

struct SpectraComparison {
  BoundaryCondition bc_a = BoundaryCondition::D;
  BoundaryCondition bc_b = BoundaryCondition::N;
  std::vector<SpectraPair> pairs;
  double max_gap = 0.0;
  int count_compared = 0;
  std::vector<double> excluded_a;
  std::vector<double> excluded_b;
  bool coincide = false;  // every gap <= tol (1 + |mu|)
  double tolerance = 0.0;
};

struct Tolerances {
  double condition = 1e-6;     // sup-norm defect of the potential condition
  double spectral = 1e-6;      // coincidence: gap <= spectral (1 + |mu|)
  double multiplicity = 1e-6;  // double eigenvalue: |s(1)|, |c'(1)| <= multiplicity (1 + |mu|)
  double parity = 1e-6;        // eigenfunction symmetry and boundary defects, relative to sup norms
  double zero = 1e-6;          // zero eigenvalue exclusion radius zero (1 + sup |q|)
  double identity = 1e-7;      // absolute residual of the symmetric-potential identities
};

enum class Verdict { ConsistentForward, ConsistentConverse, Inconsistent };
std::string_view to_string(Verdict v);
Verdict parse_verdict(std::string_view s);

/// Both agree the condition holds -> forward; both agree it fails -> converse.
Verdict verdict_from(bool condition_holds, bool spectral_holds);

struct ParityCheck {
  double mu = 0.0;
  std::string function;  // "y1" or "y2"
  std::string expected;  // "even" or "odd"
  std::string boundary;  // "dirichlet" or "neumann"
  double symmetry_defect = 0.0;
  double boundary_defect = 0.0;
  bool passed = false;
};

struct MultiplicityTally {
  int simple = 0;
  int twofold = 0;
  bool lowest_excluded = false;
};

struct IdentityRow {
  double mu = 0.0;
  std::map<std::string, double> residuals;
};

struct TheoremReport {
  std::string theorem;  // T1, T2, T5.1, T5.2, R5.4, IDENT
  std::string potential;
  int count = 0;
  double condition_residual = 0.0;
  bool condition_holds = false;
  double spectral_gap = 0.0;
  bool spectral_holds = false;
  Verdict verdict = Verdict::Inconsistent;
  Tolerances tolerances;
  std::map<std::string, double> evidence;
  std::map<std::string, std::string> labels;
  std::optional<SpectraComparison> comparison;
  std::optional<EigenvalueList> spectrum;
  std::optional<MultiplicityTally> tally;
  std::vector<ParityCheck> parity;
  std::vector<IdentityRow> identities;
};

/// Pairs the two spectra in sorted order; with exclude_zero, eigenvalues within
/// zero_radius(p, tol) of 0 are dropped from both lists first.
SpectraComparison compare_spectra(const Potential& p, BoundaryCondition bc_a, BoundaryCondition bc_b, int count,
                                  bool exclude_zero, const Tolerances& tol = {}, const SearchOptions& opts = {});

double zero_radius(const Potential& p, const Tolerances& tol);

TheoremReport verify_theorem1(const Potential& p, int count, const Tolerances& tol = {},
                              const SearchOptions& opts = {});
TheoremReport verify_theorem2(const Potential& p, int count, const Tolerances& tol = {},
                              const SearchOptions& opts = {});
TheoremReport verify_theorem51(const Potential& p, int count, const Tolerances& tol = {},
                               const SearchOptions& opts = {});
TheoremReport verify_theorem52(const Potential& p, int count, const Tolerances& tol = {},
                               const SearchOptions& opts = {});
TheoremReport verify_remark54(double c, int count, const Tolerances& tol = {}, const SearchOptions& opts = {},
                              int nodes = 2000);

/// Identity residuals at each mu: symmetric-potential identities (a)-(e), the discriminant
/// factorizations, and the midpoint-solution translations of s'(1) = c(1) and
/// c'(1) = -mu s(1), which hold for any potential.
template <typename Scalar>
std::vector<IdentityRow> identity_residuals(const BasicPotential<Scalar>& p, const std::vector<double>& mu_samples,
                                            int steps = 0);

template <typename Scalar>
TheoremReport verify_identities(const BasicPotential<Scalar>& p, const std::vector<double>& mu_samples,
                                const Tolerances& tol = {}, int steps = 0);

/// Keys whose residual is expected to vanish only for symmetric potentials.
const std::vector<std::string>& symmetric_identity_keys();
/// Keys that hold for every potential.
const std::vector<std::string>& translation_identity_keys();

std::vector<double> default_identity_samples();

}  // namespace slspec
