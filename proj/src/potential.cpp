#include "slspec/potential_spec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slspec/io.hpp"

namespace slspec {

namespace {

using Kind = PotentialSpec::Kind;

const PotentialSpec& inner_of(const PotentialSpec& spec) {
  if (!spec.inner) throw InputError(kind_name(spec.kind) + " potential spec is missing its nested spec");
  return *spec.inner;
}

double table_value(const std::vector<std::pair<double, double>>& table, double x) {
  if (table.size() < 2) throw InputError("table potential needs at least two points");
  const double slack = 1e-12 * std::max(1.0, table.back().first - table.front().first);
  if (x < table.front().first - slack || x > table.back().first + slack)
    throw InputError("table potential does not cover x = " + std::to_string(x));
  auto it = std::upper_bound(table.begin(), table.end(), x,
                             [](double v, const auto& pt) { return v < pt.first; });
  if (it == table.begin()) ++it;
  if (it == table.end()) --it;
  const auto& [x1, y1] = *it;
  const auto& [x0, y0] = *(it - 1);
  const double frac = (x - x0) / (x1 - x0);
  return (1.0 - frac) * y0 + frac * y1;
}

double table_integral(const std::vector<std::pair<double, double>>& table, double from, double to) {
  // Integral of the piecewise-linear table from `from` to `to` (from <= to assumed by callers).
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < table.size(); ++k) {
    const double lo = std::max(from, table[k].first);
    const double hi = std::min(to, table[k + 1].first);
    if (hi <= lo) continue;
    acc += 0.5 * (hi - lo) * (table_value(table, lo) + table_value(table, hi));
  }
  return acc;
}

// Integral of q2 from the right end b of the construction interval to x.
double integral_from_right(const PotentialSpec& q2, const Interval& iv, double x) {
  return antiderivative(q2, x) - antiderivative(q2, iv.b);
}

void validate_antisymmetric(const PotentialSpec& q2, const Interval& iv, int nodes) {
  double worst = 0.0;
  double scale = 1.0;
  for (int i = 0; i <= nodes; ++i) {
    const double x = iv.a + i * iv.length() / nodes;
    const double xr = iv.a + (nodes - i) * iv.length() / nodes;
    const double v = evaluate(q2, x);
    worst = std::max(worst, std::abs(v + evaluate(q2, xr)));
    scale = std::max(scale, std::abs(v));
  }
  if (worst > 1e-12 * scale)
    throw InputError("q2 spec is not antisymmetric about the interval midpoint (defect " +
                     std::to_string(worst) + ")");
}

PotentialSpec with_interval(const PotentialSpec& spec, Interval iv) {
  PotentialSpec out = spec;
  out.interval = iv;
  return out;
}

}  // namespace

std::string kind_name(PotentialSpec::Kind kind) {
  switch (kind) {
    case Kind::Const: return "const";
    case Kind::Poly: return "poly";
    case Kind::Trig: return "trig";
    case Kind::Exp: return "exp";
    case Kind::Table: return "table";
    case Kind::BB: return "bb";
    case Kind::B: return "b";
    case Kind::Complex: return "complex";
  }
  return "unknown";
}

double evaluate(const PotentialSpec& spec, double x) {
  switch (spec.kind) {
    case Kind::Const:
      return spec.constant;
    case Kind::Poly: {
      double acc = 0.0;
      for (auto it = spec.coefficients.rbegin(); it != spec.coefficients.rend(); ++it) acc = acc * x + *it;
      return acc;
    }
    case Kind::Trig: {
      double acc = spec.offset;
      for (const auto& t : spec.terms) {
        const double arg = 2.0 * std::numbers::pi * t.frequency * x + t.phase;
        acc += t.amplitude * (t.fn == TrigTerm::Fn::Cos ? std::cos(arg) : std::sin(arg));
      }
      return acc;
    }
    case Kind::Exp:
      return spec.amplitude * std::exp(spec.rate * x);
    case Kind::Table:
      return table_value(spec.table, x);
    case Kind::BB: {
      const PotentialSpec& q2 = inner_of(spec);
      const double i = integral_from_right(q2, spec.interval, x);
      return i * i + evaluate(q2, x);
    }
    case Kind::B: {
      const PotentialSpec& q2 = inner_of(spec);
      const Interval half{0.0, 0.5};
      const double y = x <= 0.5 ? x : 1.0 - x;
      const double i = integral_from_right(q2, half, y);
      return i * i + evaluate(q2, y);
    }
    case Kind::Complex:
      throw InputError("complex potential spec cannot be evaluated as a real function");
  }
  throw InputError("unknown potential kind");
}

double antiderivative(const PotentialSpec& spec, double x) {
  const double a = spec.interval.a;
  switch (spec.kind) {
    case Kind::Const:
      return spec.constant * (x - a);
    case Kind::Poly: {
      double acc = 0.0;
      for (std::size_t k = 0; k < spec.coefficients.size(); ++k) {
        const double p = static_cast<double>(k + 1);
        acc += spec.coefficients[k] * (std::pow(x, p) - std::pow(a, p)) / p;
      }
      return acc;
    }
    case Kind::Trig: {
      double acc = spec.offset * (x - a);
      for (const auto& t : spec.terms) {
        const double w = 2.0 * std::numbers::pi * t.frequency;
        if (w == 0.0) {
          acc += t.amplitude * (t.fn == TrigTerm::Fn::Cos ? std::cos(t.phase) : std::sin(t.phase)) * (x - a);
        } else if (t.fn == TrigTerm::Fn::Cos) {
          acc += t.amplitude * (std::sin(w * x + t.phase) - std::sin(w * a + t.phase)) / w;
        } else {
          acc -= t.amplitude * (std::cos(w * x + t.phase) - std::cos(w * a + t.phase)) / w;
        }
      }
      return acc;
    }
    case Kind::Exp:
      if (spec.rate == 0.0) return spec.amplitude * (x - a);
      return spec.amplitude * (std::exp(spec.rate * x) - std::exp(spec.rate * a)) / spec.rate;
    case Kind::Table:
      return x >= a ? table_integral(spec.table, a, x) : -table_integral(spec.table, x, a);
    case Kind::BB:
    case Kind::B:
    case Kind::Complex:
      break;
  }
  throw InputError("no closed-form antiderivative for " + kind_name(spec.kind) + " potential spec");
}

Potential make_potential(const PotentialSpec& spec) {
  if (spec.nodes < 2) throw InputError("potential needs nodes >= 2");
  if (spec.kind == Kind::Complex)
    throw InputError("complex potential given where a real-valued potential is required");
  const Interval iv = spec.interval;
  if (!(iv.a < iv.b)) throw InputError("potential interval must satisfy a < b");

  if (spec.kind == Kind::BB) {
    validate_antisymmetric(with_interval(inner_of(spec), iv), iv, spec.nodes);
  } else if (spec.kind == Kind::B) {
    if (!same_interval(iv, Interval{0.0, 1.0})) throw InputError("b potential is defined on [0,1] only");
    if (spec.nodes % 2 != 0) throw InputError("b potential needs an even node count");
    validate_antisymmetric(with_interval(inner_of(spec), Interval{0.0, 0.5}), Interval{0.0, 0.5},
                           spec.nodes / 2);
  } else if (spec.kind == Kind::Table) {
    auto pts = spec.table;
    if (!std::is_sorted(pts.begin(), pts.end()))
      throw InputError("table potential points must be sorted by x");
  }

  PotentialSpec local = spec;
  if (spec.inner) {
    const Interval inner_iv = spec.kind == Kind::B ? Interval{0.0, 0.5} : iv;
    local.inner = std::make_shared<const PotentialSpec>(with_interval(*spec.inner, inner_iv));
  }

  Vector<double> samples(spec.nodes + 1);
  for (int i = 0; i <= spec.nodes; ++i) {
    const double x = iv.a + i * iv.length() / spec.nodes;
    samples[i] = evaluate(local, x);
  }
  if (spec.kind == Kind::B) {
    // Enforce exact mirror symmetry of the samples.
    for (int i = spec.nodes / 2 + 1; i <= spec.nodes; ++i) samples[i] = samples[spec.nodes - i];
  }
  return Potential(std::move(samples), iv, describe(spec));
}

ComplexPotential make_complex_potential(const PotentialSpec& spec) {
  if (spec.kind != Kind::Complex) {
    const Potential real = make_potential(spec);
    return ComplexPotential(real.samples().cast<std::complex<double>>(), real.interval(), real.spec());
  }
  if (!spec.inner || !spec.imag) throw InputError("complex potential spec needs real and imag parts");
  PotentialSpec re = *spec.inner;
  PotentialSpec im = *spec.imag;
  re.interval = im.interval = spec.interval;
  re.nodes = im.nodes = spec.nodes;
  const Potential pr = make_potential(re);
  const Potential pi = make_potential(im);
  Vector<std::complex<double>> samples(pr.samples().size());
  for (Index i = 0; i < samples.size(); ++i) samples[i] = {pr[i], pi[i]};
  return ComplexPotential(std::move(samples), spec.interval, describe(spec));
}

Potential build_BB_potential(const PotentialSpec& q2_spec, int nodes) {
  PotentialSpec spec;
  spec.kind = Kind::BB;
  spec.interval = {0.0, 1.0};
  spec.nodes = nodes;
  spec.inner = std::make_shared<const PotentialSpec>(with_interval(q2_spec, spec.interval));
  return make_potential(spec);
}

Potential build_B_potential(const PotentialSpec& q2_spec, int nodes) {
  PotentialSpec spec;
  spec.kind = Kind::B;
  spec.interval = {0.0, 1.0};
  spec.nodes = nodes;
  spec.inner = std::make_shared<const PotentialSpec>(with_interval(q2_spec, Interval{0.0, 0.5}));
  return make_potential(spec);
}

}  // namespace slspec
