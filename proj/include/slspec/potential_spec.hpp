#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "slspec/potential.hpp"

namespace slspec {

struct TrigTerm {
  enum class Fn { Cos, Sin };
  Fn fn = Fn::Cos;
  double amplitude = 1.0;
  double frequency = 1.0;  // cycles per unit length: fn(2 pi frequency x + phase)
  double phase = 0.0;
};

/// Closed-form or tabulated description of a potential, as read from JSON.
///
///   const   c
///   poly    sum_k coefficients[k] x^k
///   trig    offset + sum amplitude fn(2 pi frequency x + phase)
///   exp     amplitude exp(rate x)
///   table   piecewise-linear through explicit (x, q) points
///   bb      (integral_b^x q2)^2 + q2(x) on [a, b], q2 antisymmetric about the midpoint
///   b       the bb construction on [0, 1/2], reflected to a potential symmetric about 1/2
///   complex real + i imag, each a real spec
struct PotentialSpec {
  enum class Kind { Const, Poly, Trig, Exp, Table, BB, B, Complex };

  Kind kind = Kind::Const;
  double constant = 0.0;
  std::vector<double> coefficients;
  double offset = 0.0;
  std::vector<TrigTerm> terms;
  double amplitude = 1.0;
  double rate = 1.0;
  std::vector<std::pair<double, double>> table;
  std::shared_ptr<const PotentialSpec> inner;  // q2 for bb/b, real part for complex
  std::shared_ptr<const PotentialSpec> imag;   // imaginary part for complex

  Interval interval{0.0, 1.0};
  int nodes = 2000;
};

inline constexpr int kDefaultNodes = 2000;

std::string kind_name(PotentialSpec::Kind kind);

/// Point value of a closed-form spec (const, poly, trig, exp, table, bb, b).
double evaluate(const PotentialSpec& spec, double x);

/// Antiderivative F with F(interval.a) = 0; analytic for const/poly/trig/exp, exact for table.
double antiderivative(const PotentialSpec& spec, double x);

/// Samples the spec on its interval at spec.nodes + 1 uniform nodes. Rejects complex specs.
Potential make_potential(const PotentialSpec& spec);

/// Same as make_potential, accepting the complex kind as well.
ComplexPotential make_complex_potential(const PotentialSpec& spec);

/// q = (integral_1^x q2)^2 + q2 on [0,1]; satisfies the (BB) condition up to quadrature error.
Potential build_BB_potential(const PotentialSpec& q2_spec, int nodes);

/// Builds the (B) analogue on [0,1/2] and extends it by q(x) = q(1 - x); nodes counts [0,1] cells.
Potential build_B_potential(const PotentialSpec& q2_spec, int nodes);

}  // namespace slspec
