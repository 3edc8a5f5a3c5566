#pragma once

#include <cmath>
#include <numbers>

#include "slspec/potential_spec.hpp"

namespace slspec::test {

inline constexpr double pi = std::numbers::pi;
inline constexpr double pi2 = pi * pi;

inline PotentialSpec constant(double c, int nodes = kDefaultNodes) {
  PotentialSpec s;
  s.kind = PotentialSpec::Kind::Const;
  s.constant = c;
  s.nodes = nodes;
  return s;
}

inline PotentialSpec poly(std::vector<double> coefficients, int nodes = kDefaultNodes) {
  PotentialSpec s;
  s.kind = PotentialSpec::Kind::Poly;
  s.coefficients = std::move(coefficients);
  s.nodes = nodes;
  return s;
}

// offset + amplitude cos(2 pi frequency x)
inline PotentialSpec cosine(double frequency, double amplitude = 1.0, double offset = 0.0,
                            int nodes = kDefaultNodes) {
  PotentialSpec s;
  s.kind = PotentialSpec::Kind::Trig;
  s.offset = offset;
  s.terms.push_back({TrigTerm::Fn::Cos, amplitude, frequency, 0.0});
  s.nodes = nodes;
  return s;
}

inline PotentialSpec exponential(double amplitude = 1.0, double rate = 1.0, int nodes = kDefaultNodes) {
  PotentialSpec s;
  s.kind = PotentialSpec::Kind::Exp;
  s.amplitude = amplitude;
  s.rate = rate;
  s.nodes = nodes;
  return s;
}

inline Potential make(const PotentialSpec& s) { return make_potential(s); }

}  // namespace slspec::test
