#include "slspec/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

#include "slspec/errors.hpp"

namespace slspec {

namespace {

using Kind = PotentialSpec::Kind;

void check_object(const Json& j, std::string_view what, std::initializer_list<std::string_view> allowed,
                  std::initializer_list<std::string_view> required = {}) {
  if (!j.is_object()) throw InputError(std::string(what) + " must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw InputError("unknown key '" + k + "' in " + std::string(what));
  }
  for (auto k : required)
    if (!j.contains(std::string(k))) throw InputError("missing key '" + std::string(k) + "' in " + std::string(what));
}

double number(const Json& j, std::string_view what) {
  if (!j.is_number()) throw InputError(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InputError(std::string(what) + " must be finite");
  return v;
}

double number_at(const Json& j, const char* key, std::string_view what) {
  return number(j.at(key), std::string(what) + "." + key);
}

int integer(const Json& j, std::string_view what) {
  if (!j.is_number_integer()) throw InputError(std::string(what) + " must be an integer");
  return j.get<int>();
}

bool boolean(const Json& j, std::string_view what) {
  if (!j.is_boolean()) throw InputError(std::string(what) + " must be true or false");
  return j.get<bool>();
}

std::string string_of(const Json& j, std::string_view what) {
  if (!j.is_string()) throw InputError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

Kind kind_from(const std::string& s) {
  for (Kind k : {Kind::Const, Kind::Poly, Kind::Trig, Kind::Exp, Kind::Table, Kind::BB, Kind::B, Kind::Complex})
    if (kind_name(k) == s) return k;
  throw InputError("unknown potential kind '" + s + "'");
}

std::vector<double> numbers(const Json& j, std::string_view what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

Json eigen_entry(const EigenvalueEntry& e) { return Json{{"mu", e.mu}, {"mult", e.multiplicity}, {"residual", e.residual}}; }

Json potential_label(const std::string& s) {
  if (!s.empty() && s.front() == '{') {
    Json j = Json::parse(s, nullptr, false);
    if (!j.is_discarded()) return j;
  }
  return s;
}

}  // namespace

PotentialSpec spec_from_json(const Json& j) {
  check_object(j, "potential spec", {"kind", "params", "interval", "nodes"}, {"kind"});
  PotentialSpec s;
  s.kind = kind_from(string_of(j.at("kind"), "kind"));
  if (j.contains("interval")) {
    const auto iv = numbers(j.at("interval"), "interval");
    if (iv.size() != 2 || !(iv[0] < iv[1])) throw InputError("interval must be [a, b] with a < b");
    s.interval = {iv[0], iv[1]};
  }
  if (j.contains("nodes")) {
    s.nodes = integer(j.at("nodes"), "nodes");
    if (s.nodes < 2) throw InputError("nodes must be >= 2");
  }
  const Json params = j.contains("params") ? j.at("params") : Json::object();
  const std::string what = kind_name(s.kind) + " params";
  switch (s.kind) {
    case Kind::Const:
      check_object(params, what, {"c"}, {"c"});
      s.constant = number_at(params, "c", what);
      break;
    case Kind::Poly:
      check_object(params, what, {"coefficients"}, {"coefficients"});
      s.coefficients = numbers(params.at("coefficients"), "coefficients");
      if (s.coefficients.empty()) throw InputError("poly needs at least one coefficient");
      break;
    case Kind::Trig:
      check_object(params, what, {"offset", "terms"}, {"terms"});
      if (params.contains("offset")) s.offset = number_at(params, "offset", what);
      if (!params.at("terms").is_array()) throw InputError("trig terms must be an array");
      for (const auto& t : params.at("terms")) {
        check_object(t, "trig term", {"fn", "amplitude", "frequency", "phase"}, {"fn"});
        TrigTerm term;
        const std::string fn = string_of(t.at("fn"), "fn");
        if (fn == "cos")
          term.fn = TrigTerm::Fn::Cos;
        else if (fn == "sin")
          term.fn = TrigTerm::Fn::Sin;
        else
          throw InputError("trig fn must be 'cos' or 'sin'");
        if (t.contains("amplitude")) term.amplitude = number_at(t, "amplitude", "trig term");
        if (t.contains("frequency")) term.frequency = number_at(t, "frequency", "trig term");
        if (t.contains("phase")) term.phase = number_at(t, "phase", "trig term");
        s.terms.push_back(term);
      }
      break;
    case Kind::Exp:
      check_object(params, what, {"amplitude", "rate"});
      if (params.contains("amplitude")) s.amplitude = number_at(params, "amplitude", what);
      if (params.contains("rate")) s.rate = number_at(params, "rate", what);
      break;
    case Kind::Table: {
      check_object(params, what, {"points"}, {"points"});
      const Json& pts = params.at("points");
      if (!pts.is_array() || pts.size() < 2) throw InputError("table points must be an array of >= 2 [x, q] pairs");
      for (const auto& pt : pts) {
        const auto xy = numbers(pt, "table point");
        if (xy.size() != 2) throw InputError("table point must be [x, q]");
        s.table.emplace_back(xy[0], xy[1]);
      }
      for (std::size_t i = 1; i < s.table.size(); ++i)
        if (!(s.table[i].first > s.table[i - 1].first)) throw InputError("table x values must increase strictly");
      if (!j.contains("interval")) s.interval = {s.table.front().first, s.table.back().first};
      break;
    }
    case Kind::BB:
    case Kind::B:
      check_object(params, what, {"q2"}, {"q2"});
      s.inner = std::make_shared<const PotentialSpec>(spec_from_json(params.at("q2")));
      break;
    case Kind::Complex:
      check_object(params, what, {"real", "imag"}, {"real", "imag"});
      s.inner = std::make_shared<const PotentialSpec>(spec_from_json(params.at("real")));
      s.imag = std::make_shared<const PotentialSpec>(spec_from_json(params.at("imag")));
      if (s.inner->kind == Kind::Complex || s.imag->kind == Kind::Complex)
        throw InputError("complex parts must be real specs");
      break;
  }
  return s;
}

Json to_json(const PotentialSpec& s) {
  Json params = Json::object();
  switch (s.kind) {
    case Kind::Const:
      params["c"] = s.constant;
      break;
    case Kind::Poly:
      params["coefficients"] = s.coefficients;
      break;
    case Kind::Trig: {
      params["offset"] = s.offset;
      Json terms = Json::array();
      for (const auto& t : s.terms)
        terms.push_back(Json{{"fn", t.fn == TrigTerm::Fn::Cos ? "cos" : "sin"},
                             {"amplitude", t.amplitude},
                             {"frequency", t.frequency},
                             {"phase", t.phase}});
      params["terms"] = terms;
      break;
    }
    case Kind::Exp:
      params["amplitude"] = s.amplitude;
      params["rate"] = s.rate;
      break;
    case Kind::Table: {
      Json pts = Json::array();
      for (const auto& [x, q] : s.table) pts.push_back(Json::array({x, q}));
      params["points"] = pts;
      break;
    }
    case Kind::BB:
    case Kind::B:
      if (s.inner) params["q2"] = to_json(*s.inner);
      break;
    case Kind::Complex:
      if (s.inner) params["real"] = to_json(*s.inner);
      if (s.imag) params["imag"] = to_json(*s.imag);
      break;
  }
  return Json{{"kind", kind_name(s.kind)},
              {"params", params},
              {"interval", Json::array({s.interval.a, s.interval.b})},
              {"nodes", s.nodes}};
}

std::string describe(const PotentialSpec& spec) { return to_json(spec).dump(); }

Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw InputError("malformed JSON in " + std::string(what) + ": " + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << content;
  if (!out) throw InputError("write failed for '" + path + "'");
}

Json to_json(const EigenvalueList& list) {
  Json ev = Json::array();
  for (const auto& e : list.entries) ev.push_back(eigen_entry(e));
  return Json{{"bc", std::string(to_string(list.bc))}, {"count", list.count_requested}, {"eigenvalues", ev}};
}

EigenvalueList eigenvalue_list_from_json(const Json& j) {
  check_object(j, "eigenvalue list", {"bc", "count", "eigenvalues"}, {"bc", "eigenvalues"});
  EigenvalueList list;
  list.bc = parse_boundary_condition(string_of(j.at("bc"), "bc"));
  if (j.contains("count")) list.count_requested = integer(j.at("count"), "count");
  if (!j.at("eigenvalues").is_array()) throw InputError("eigenvalues must be an array");
  for (const auto& e : j.at("eigenvalues")) {
    check_object(e, "eigenvalue entry", {"mu", "mult", "residual"}, {"mu", "mult"});
    EigenvalueEntry entry;
    entry.mu = number_at(e, "mu", "eigenvalue");
    entry.multiplicity = integer(e.at("mult"), "mult");
    if (e.contains("residual")) entry.residual = number_at(e, "residual", "eigenvalue");
    list.entries.push_back(entry);
  }
  return list;
}

Json to_json(const SpectraComparison& c) {
  Json pairs = Json::array();
  for (const auto& p : c.pairs) pairs.push_back(Json{{"mu_a", p.mu_a}, {"mu_b", p.mu_b}, {"gap", p.gap}});
  return Json{{"bc_a", std::string(to_string(c.bc_a))},
              {"bc_b", std::string(to_string(c.bc_b))},
              {"count", c.count_compared},
              {"pairs", pairs},
              {"max_gap", c.max_gap},
              {"excluded_a", c.excluded_a},
              {"excluded_b", c.excluded_b},
              {"coincide", c.coincide},
              {"tolerance", c.tolerance}};
}

SpectraComparison comparison_from_json(const Json& j) {
  check_object(j, "comparison",
               {"bc_a", "bc_b", "count", "pairs", "max_gap", "excluded_a", "excluded_b", "coincide", "tolerance"},
               {"bc_a", "bc_b", "pairs", "max_gap", "coincide"});
  SpectraComparison c;
  c.bc_a = parse_boundary_condition(string_of(j.at("bc_a"), "bc_a"));
  c.bc_b = parse_boundary_condition(string_of(j.at("bc_b"), "bc_b"));
  if (!j.at("pairs").is_array()) throw InputError("pairs must be an array");
  for (const auto& p : j.at("pairs")) {
    check_object(p, "pair", {"mu_a", "mu_b", "gap"}, {"mu_a", "mu_b", "gap"});
    c.pairs.push_back({number_at(p, "mu_a", "pair"), number_at(p, "mu_b", "pair"), number_at(p, "gap", "pair")});
  }
  c.count_compared = j.contains("count") ? integer(j.at("count"), "count") : static_cast<int>(c.pairs.size());
  c.max_gap = number_at(j, "max_gap", "comparison");
  if (j.contains("excluded_a")) c.excluded_a = numbers(j.at("excluded_a"), "excluded_a");
  if (j.contains("excluded_b")) c.excluded_b = numbers(j.at("excluded_b"), "excluded_b");
  c.coincide = boolean(j.at("coincide"), "coincide");
  if (j.contains("tolerance")) c.tolerance = number_at(j, "tolerance", "comparison");
  return c;
}

Tolerances tolerances_from_json(const Json& j) {
  check_object(j, "tolerances", {"condition", "spectral", "multiplicity", "parity", "zero", "identity"});
  Tolerances t;
  auto take = [&](const char* key, double& field) {
    if (!j.contains(key)) return;
    field = number_at(j, key, "tolerances");
    if (!(field > 0.0)) throw InputError(std::string("tolerance '") + key + "' must be positive");
  };
  take("condition", t.condition);
  take("spectral", t.spectral);
  take("multiplicity", t.multiplicity);
  take("parity", t.parity);
  take("zero", t.zero);
  take("identity", t.identity);
  return t;
}

Json to_json(const Tolerances& t) {
  return Json{{"condition", t.condition}, {"spectral", t.spectral}, {"multiplicity", t.multiplicity},
              {"parity", t.parity},       {"zero", t.zero},         {"identity", t.identity}};
}

Json to_json(const TheoremReport& r) {
  Json j;
  j["theorem"] = r.theorem;
  j["potential"] = potential_label(r.potential);
  j["count"] = r.count;
  j["condition"] = Json{{"residual", r.condition_residual}, {"holds", r.condition_holds}};
  j["spectral"] = Json{{"gap", r.spectral_gap}, {"holds", r.spectral_holds}};
  j["verdict"] = std::string(to_string(r.verdict));
  j["tolerances"] = to_json(r.tolerances);
  Json ev = Json::object();
  for (const auto& [k, v] : r.evidence) ev[k] = v;
  j["evidence"] = ev;
  Json lb = Json::object();
  for (const auto& [k, v] : r.labels) lb[k] = v;
  j["labels"] = lb;
  if (r.comparison) j["comparison"] = to_json(*r.comparison);
  if (r.spectrum) j["spectrum"] = to_json(*r.spectrum);
  if (r.tally)
    j["tally"] = Json{
        {"simple", r.tally->simple}, {"double", r.tally->twofold}, {"lowest_excluded", r.tally->lowest_excluded}};
  Json par = Json::array();
  for (const auto& p : r.parity)
    par.push_back(Json{{"mu", p.mu},
                       {"function", p.function},
                       {"expected", p.expected},
                       {"boundary", p.boundary},
                       {"symmetry_defect", p.symmetry_defect},
                       {"boundary_defect", p.boundary_defect},
                       {"passed", p.passed}});
  j["parity"] = par;
  Json ids = Json::array();
  for (const auto& row : r.identities) {
    Json res = Json::object();
    for (const auto& [k, v] : row.residuals) res[k] = v;
    ids.push_back(Json{{"mu", row.mu}, {"residuals", res}});
  }
  j["identities"] = ids;
  return j;
}

TheoremReport report_from_json(const Json& j) {
  check_object(j, "report",
               {"theorem", "potential", "count", "condition", "spectral", "verdict", "tolerances", "evidence",
                "labels", "comparison", "spectrum", "tally", "parity", "identities"},
               {"theorem", "potential", "count", "condition", "spectral", "verdict", "tolerances"});
  TheoremReport r;
  r.theorem = string_of(j.at("theorem"), "theorem");
  static const std::set<std::string> names = {"T1", "T2", "T5.1", "T5.2", "R5.4", "IDENT"};
  if (!names.count(r.theorem)) throw InputError("unknown theorem '" + r.theorem + "'");
  const Json& pot = j.at("potential");
  r.potential = pot.is_string() ? pot.get<std::string>() : pot.dump();
  r.count = integer(j.at("count"), "count");
  check_object(j.at("condition"), "condition", {"residual", "holds"}, {"residual", "holds"});
  r.condition_residual = number_at(j.at("condition"), "residual", "condition");
  r.condition_holds = boolean(j.at("condition").at("holds"), "condition.holds");
  check_object(j.at("spectral"), "spectral", {"gap", "holds"}, {"gap", "holds"});
  r.spectral_gap = number_at(j.at("spectral"), "gap", "spectral");
  r.spectral_holds = boolean(j.at("spectral").at("holds"), "spectral.holds");
  r.verdict = parse_verdict(string_of(j.at("verdict"), "verdict"));
  r.tolerances = tolerances_from_json(j.at("tolerances"));
  if (j.contains("evidence")) {
    if (!j.at("evidence").is_object()) throw InputError("evidence must be an object");
    for (const auto& [k, v] : j.at("evidence").items()) r.evidence[k] = number(v, "evidence." + k);
  }
  if (j.contains("labels")) {
    if (!j.at("labels").is_object()) throw InputError("labels must be an object");
    for (const auto& [k, v] : j.at("labels").items()) r.labels[k] = string_of(v, "labels." + k);
  }
  if (j.contains("comparison")) r.comparison = comparison_from_json(j.at("comparison"));
  if (j.contains("spectrum")) r.spectrum = eigenvalue_list_from_json(j.at("spectrum"));
  if (j.contains("tally")) {
    const Json& t = j.at("tally");
    check_object(t, "tally", {"simple", "double", "lowest_excluded"}, {"simple", "double", "lowest_excluded"});
    r.tally = MultiplicityTally{integer(t.at("simple"), "tally.simple"), integer(t.at("double"), "tally.double"),
                                boolean(t.at("lowest_excluded"), "tally.lowest_excluded")};
  }
  if (j.contains("parity")) {
    if (!j.at("parity").is_array()) throw InputError("parity must be an array");
    for (const auto& p : j.at("parity")) {
      check_object(p, "parity check",
                   {"mu", "function", "expected", "boundary", "symmetry_defect", "boundary_defect", "passed"},
                   {"mu", "function", "expected", "boundary", "symmetry_defect", "boundary_defect", "passed"});
      ParityCheck pc;
      pc.mu = number_at(p, "mu", "parity");
      pc.function = string_of(p.at("function"), "function");
      pc.expected = string_of(p.at("expected"), "expected");
      pc.boundary = string_of(p.at("boundary"), "boundary");
      pc.symmetry_defect = number_at(p, "symmetry_defect", "parity");
      pc.boundary_defect = number_at(p, "boundary_defect", "parity");
      pc.passed = boolean(p.at("passed"), "passed");
      r.parity.push_back(pc);
    }
  }
  if (j.contains("identities")) {
    if (!j.at("identities").is_array()) throw InputError("identities must be an array");
    for (const auto& row : j.at("identities")) {
      check_object(row, "identity row", {"mu", "residuals"}, {"mu", "residuals"});
      IdentityRow ir;
      ir.mu = number_at(row, "mu", "identity row");
      if (!row.at("residuals").is_object()) throw InputError("residuals must be an object");
      for (const auto& [k, v] : row.at("residuals").items()) ir.residuals[k] = number(v, "residual " + k);
      r.identities.push_back(std::move(ir));
    }
  }
  return r;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_eigenvalue_csv(std::ostream& os, const EigenvalueList& list) {
  os << "index,mu,mult\n";
  for (std::size_t i = 0; i < list.entries.size(); ++i)
    os << i << ',' << format_double(list.entries[i].mu) << ',' << list.entries[i].multiplicity << '\n';
}

void write_pairs_csv(std::ostream& os, const SpectraComparison& cmp) {
  os << "index," << to_string(cmp.bc_a) << ',' << to_string(cmp.bc_b) << ",gap\n";
  for (std::size_t i = 0; i < cmp.pairs.size(); ++i)
    os << i << ',' << format_double(cmp.pairs[i].mu_a) << ',' << format_double(cmp.pairs[i].mu_b) << ','
       << format_double(cmp.pairs[i].gap) << '\n';
}

void write_kernel_csv(std::ostream& os, const GoursatKernel<double>& k) {
  os << "x,t,K\n";
  const double d = k.spacing();
  for (int kx = 0; kx <= k.lattice(); ++kx)
    for (int m = 0; m <= kx; ++m)
      os << format_double(kx * d) << ',' << format_double((2 * m - kx) * d) << ',' << format_double(k.at_xt(kx, m))
         << '\n';
}

void write_trajectory_csv(std::ostream& os, const FundamentalTrajectory<double>& t) {
  os << "x,c,cp,s,sp\n";
  for (Index i = 0; i < t.grid.size(); ++i)
    os << format_double(t.grid[i]) << ',' << format_double(t.c[i]) << ',' << format_double(t.cp[i]) << ','
       << format_double(t.s[i]) << ',' << format_double(t.sp[i]) << '\n';
}

void write_plot_csv(std::ostream& os, const std::vector<PlotSeries>& series) {
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw InputError("plot series '" + s.label + "' has mismatched lengths");
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
        throw InputError("plot series '" + s.label + "' has a non-finite value");
    if (s.label.find_first_of(",\"\n") != std::string::npos)
      throw InputError("plot label '" + s.label + "' contains a CSV delimiter");
  }
  os << "label,x,y\n";
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i)
      os << s.label << ',' << format_double(s.x[i]) << ',' << format_double(s.y[i]) << '\n';
}

void emit_plot_data(const std::vector<PlotSeries>& series, const std::string& path) {
  std::ostringstream ss;
  write_plot_csv(ss, series);
  write_text_file(path, ss.str());
}

}  // namespace slspec
