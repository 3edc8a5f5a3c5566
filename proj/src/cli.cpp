#include "slspec/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"

#include "slspec/errors.hpp"
#include "slspec/goursat.hpp"
#include "slspec/shooting.hpp"
#include "slspec/spectra.hpp"
#include "slspec/verify.hpp"

namespace slspec {

namespace {

struct CommandKeys {
  std::vector<std::string> allowed;
  std::vector<std::string> required;
};

const std::map<std::string, CommandKeys>& command_table() {
  static const std::map<std::string, CommandKeys> t = {
      {"spectrum", {{"potential", "bc", "count", "steps", "window_pad", "root_tol"}, {"potential", "bc", "count"}}},
      {"compare",
       {{"potential", "bc_a", "bc_b", "count", "exclude_zero", "tolerances", "steps"},
        {"potential", "bc_a", "bc_b", "count"}}},
      {"verify",
       {{"theorem", "potential", "count", "tolerances", "steps", "mu_samples"}, {"theorem", "potential", "count"}}},
      {"kernel", {{"potential", "lattice", "tolerance", "max_iterations", "midpoint"}, {"potential", "lattice"}}},
      {"oracle", {{"potential", "bc", "count", "cells", "steps"}, {"potential", "bc", "count"}}},
      {"identities", {{"potential", "mu_samples", "tolerances", "steps"}, {"potential"}}},
      {"scan",
       {{"potential", "function", "mu_min", "mu_max", "points", "steps"},
        {"potential", "function", "mu_min", "mu_max", "points"}}},
      {"trajectory", {{"potential", "mu", "steps"}, {"potential", "mu"}}},
  };
  return t;
}

int int_at(const Json& j, const char* key, int fallback, int min_value) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number_integer()) throw InputError(std::string(key) + " must be an integer");
  const long long x = v.get<long long>();
  if (x < min_value || x > 100000000) throw InputError(std::string(key) + " must be >= " + std::to_string(min_value));
  return static_cast<int>(x);
}

double num_at(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number() || !std::isfinite(v.get<double>())) throw InputError(std::string(key) + " must be a finite number");
  return v.get<double>();
}

double positive_at(const Json& j, const char* key, double fallback) {
  const double v = num_at(j, key, fallback);
  if (!(v > 0.0)) throw InputError(std::string(key) + " must be positive");
  return v;
}

std::string str_at(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (!v.is_string()) throw InputError(std::string(key) + " must be a string");
  return v.get<std::string>();
}

int steps_of(const Json& j) {
  const int s = int_at(j, "steps", 0, 0);
  if (s != 0 && (s < 2 || s % 2 != 0)) throw InputError("steps must be even and >= 2");
  return s;
}

std::vector<double> samples_of(const Json& j) {
  if (!j.contains("mu_samples")) return default_identity_samples();
  const Json& v = j.at("mu_samples");
  if (!v.is_array() || v.empty()) throw InputError("mu_samples must be a non-empty array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number() || !std::isfinite(x.get<double>())) throw InputError("mu_samples entries must be finite numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Tolerances tolerances_of(const Json& j) {
  return j.contains("tolerances") ? tolerances_from_json(j.at("tolerances")) : Tolerances{};
}

PotentialSpec spec_of(const RunConfig& cfg) {
  const Json& v = cfg.params.at("potential");
  if (v.is_string()) {
    std::filesystem::path path(v.get<std::string>());
    if (path.is_relative() && !cfg.base_dir.empty()) path = std::filesystem::path(cfg.base_dir) / path;
    return spec_from_json(parse_json(read_text_file(path.string()), path.string()));
  }
  return spec_from_json(v);
}

SearchOptions search_of(const Json& j) {
  SearchOptions o;
  o.steps = steps_of(j);
  o.window_pad = num_at(j, "window_pad", 0.0);
  if (o.window_pad < 0.0) throw InputError("window_pad must be >= 0");
  o.root_tol = positive_at(j, "root_tol", o.root_tol);
  return o;
}

struct Output {
  Json json;
  std::string csv;
  int status = kExitOk;
  std::string summary;
};

Json number_array(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

Output do_spectrum(const RunConfig& cfg) {
  const Json& j = cfg.params;
  const Potential p = make_potential(spec_of(cfg));
  const EigenvalueList list =
      eigenvalues(p, parse_boundary_condition(str_at(j, "bc")), int_at(j, "count", 1, 1), search_of(j));
  Output o;
  o.json = to_json(list);
  std::ostringstream ss;
  write_eigenvalue_csv(ss, list);
  o.csv = ss.str();
  o.summary = std::to_string(list.entries.size()) + " eigenvalues";
  return o;
}

Output do_compare(const RunConfig& cfg) {
  const Json& j = cfg.params;
  const Potential p = make_potential(spec_of(cfg));
  bool exclude_zero = false;
  if (j.contains("exclude_zero")) {
    if (!j.at("exclude_zero").is_boolean()) throw InputError("exclude_zero must be true or false");
    exclude_zero = j.at("exclude_zero").get<bool>();
  }
  SearchOptions opts;
  opts.steps = steps_of(j);
  const SpectraComparison cmp =
      compare_spectra(p, parse_boundary_condition(str_at(j, "bc_a")), parse_boundary_condition(str_at(j, "bc_b")),
                      int_at(j, "count", 1, 1), exclude_zero, tolerances_of(j), opts);
  Output o;
  o.json = to_json(cmp);
  std::ostringstream ss;
  write_pairs_csv(ss, cmp);
  o.csv = ss.str();
  o.summary = cmp.coincide ? "spectra coincide" : "spectra differ";
  return o;
}

std::string identities_csv(const TheoremReport& r) {
  std::ostringstream ss;
  ss << "mu,identity,residual\n";
  for (const auto& row : r.identities)
    for (const auto& [k, v] : row.residuals) ss << format_double(row.mu) << ',' << k << ',' << format_double(v) << '\n';
  return ss.str();
}

Output report_output(const TheoremReport& r) {
  Output o;
  o.json = to_json(r);
  std::ostringstream ss;
  if (r.comparison)
    write_pairs_csv(ss, *r.comparison);
  else if (r.spectrum)
    write_eigenvalue_csv(ss, *r.spectrum);
  else
    ss << identities_csv(r);
  o.csv = ss.str();
  o.status = r.verdict == Verdict::Inconsistent ? kExitInconsistent : kExitOk;
  o.summary = r.theorem + " " + std::string(to_string(r.verdict));
  return o;
}

TheoremReport identities_report(const RunConfig& cfg, const Tolerances& tol) {
  const PotentialSpec spec = spec_of(cfg);
  const std::vector<double> mus = samples_of(cfg.params);
  const int steps = steps_of(cfg.params);
  if (spec.kind == PotentialSpec::Kind::Complex) return verify_identities(make_complex_potential(spec), mus, tol, steps);
  return verify_identities(make_potential(spec), mus, tol, steps);
}

Output do_verify(const RunConfig& cfg) {
  const Json& j = cfg.params;
  const std::string theorem = str_at(j, "theorem");
  const int count = int_at(j, "count", 1, 1);
  const Tolerances tol = tolerances_of(j);
  SearchOptions opts;
  opts.steps = steps_of(j);
  if (j.contains("mu_samples") && theorem != "IDENT") throw InputError("mu_samples applies to IDENT only");
  if (theorem == "IDENT") return report_output(identities_report(cfg, tol));
  const PotentialSpec spec = spec_of(cfg);
  if (theorem == "R5.4") {
    if (spec.kind != PotentialSpec::Kind::Const) throw InputError("R5.4 needs a const potential");
    return report_output(verify_remark54(spec.constant, count, tol, opts, spec.nodes));
  }
  const Potential p = make_potential(spec);
  if (theorem == "T1") return report_output(verify_theorem1(p, count, tol, opts));
  if (theorem == "T2") return report_output(verify_theorem2(p, count, tol, opts));
  if (theorem == "T5.1") return report_output(verify_theorem51(p, count, tol, opts));
  if (theorem == "T5.2") return report_output(verify_theorem52(p, count, tol, opts));
  throw InputError("unknown theorem '" + theorem + "'");
}

Json kernel_diagnostics(const GoursatKernel<double>& k) {
  return Json{{"lattice", k.lattice()},
              {"spacing", k.spacing()},
              {"iterations", k.iterations},
              {"final_update", k.final_update},
              {"sup_abs", k.sup_abs()},
              {"update_history", number_array(k.update_history)}};
}

Output do_kernel(const RunConfig& cfg) {
  const Json& j = cfg.params;
  const Potential p = make_potential(spec_of(cfg));
  KernelOptions ko;
  ko.tolerance = positive_at(j, "tolerance", ko.tolerance);
  ko.max_iterations = int_at(j, "max_iterations", ko.max_iterations, 1);
  const int lattice = int_at(j, "lattice", 0, 2);
  bool midpoint = false;
  if (j.contains("midpoint")) {
    if (!j.at("midpoint").is_boolean()) throw InputError("midpoint must be true or false");
    midpoint = j.at("midpoint").get<bool>();
  }
  Output o;
  std::ostringstream ss;
  if (!midpoint) {
    const GoursatKernel<double> k = solve_kernel(p, lattice, ko);
    o.json = kernel_diagnostics(k);
    write_kernel_csv(ss, k);
    o.summary = "kernel converged in " + std::to_string(k.iterations) + " sweeps";
  } else {
    const MidpointKernel<double> mk = shifted_kernel_view(p, lattice, ko);
    o.json = Json{{"midpoint", true}, {"right", kernel_diagnostics(mk.right)}, {"left", kernel_diagnostics(mk.left)}};
    ss << "x,t,N\n";
    const double h = mk.spacing();
    for (int i = 0; i <= lattice; ++i) {
      const double x = p.interval().a + i * h;
      for (const auto& [t, v] : mk.slice(x)) ss << format_double(x) << ',' << format_double(t) << ',' << format_double(v) << '\n';
    }
    o.summary = "midpoint kernel built";
  }
  o.csv = ss.str();
  return o;
}

Output do_oracle(const RunConfig& cfg) {
  const Json& j = cfg.params;
  const Potential p = make_potential(spec_of(cfg));
  const BoundaryCondition bc = parse_boundary_condition(str_at(j, "bc"));
  const int count = int_at(j, "count", 1, 1);
  const int cells = int_at(j, "cells", 400, 2);
  SearchOptions opts;
  opts.steps = steps_of(j);
  const std::vector<double> shoot = eigenvalues(p, bc, count, opts).expanded();
  const int dim = fd_dim_for_cells(bc, cells);
  const std::vector<double> fd = fd_oracle_eigenvalues(p, bc, dim, count).expanded();
  const std::size_t n = std::min({shoot.size(), fd.size(), static_cast<std::size_t>(count)});
  Json pairs = Json::array();
  std::ostringstream ss;
  ss << "index,shooting,fd,difference\n";
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::abs(shoot[i] - fd[i]);
    worst = std::max(worst, d);
    pairs.push_back(Json{{"index", i}, {"shooting", shoot[i]}, {"fd", fd[i]}, {"difference", d}});
    ss << i << ',' << format_double(shoot[i]) << ',' << format_double(fd[i]) << ',' << format_double(d) << '\n';
  }
  Output o;
  o.json = Json{{"bc", std::string(to_string(bc))},
                {"cells", cells},
                {"dim", dim},
                {"h", fd_step(p, bc, dim)},
                {"pairs", pairs},
                {"max_difference", worst}};
  o.csv = ss.str();
  o.summary = "max shooting/fd difference " + format_double(worst);
  return o;
}

Output do_scan(const RunConfig& cfg) {
  const Json& j = cfg.params;
  const Potential p = make_potential(spec_of(cfg));
  const std::string fn = str_at(j, "function");
  const double lo = num_at(j, "mu_min", 0.0), hi = num_at(j, "mu_max", 0.0);
  const int points = int_at(j, "points", 1, 1);
  if (!(lo < hi) && points > 1) throw InputError("mu_min must be below mu_max");
  const bool delta = fn == "delta";
  const BoundaryCondition bc = delta ? BoundaryCondition::P : parse_boundary_condition(fn);
  const FundamentalSolver<double> solver(p, steps_of(j));
  PlotSeries s;
  s.label = fn;
  for (int i = 0; i < points; ++i) {
    const double mu = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
    const EndpointData<double> e = solver.endpoints(mu);
    s.x.push_back(mu);
    s.y.push_back(delta ? e.c1 + e.sp1 : char_value(e, bc));
  }
  Output o;
  o.json = Json{{"label", s.label}, {"mu", number_array(s.x)}, {"value", number_array(s.y)}};
  std::ostringstream ss;
  write_plot_csv(ss, {s});
  o.csv = ss.str();
  o.summary = std::to_string(points) + " scan points";
  return o;
}

Output do_trajectory(const RunConfig& cfg) {
  const Json& j = cfg.params;
  const Potential p = make_potential(spec_of(cfg));
  const auto t = integrate_fundamental(p, num_at(j, "mu", 0.0), steps_of(j));
  auto vec = [](const Eigen::VectorXd& v) { return number_array(std::vector<double>(v.data(), v.data() + v.size())); };
  Output o;
  o.json = Json{{"mu", t.mu},         {"wronskian_residual", wronskian_residual(t)},
                {"x", vec(t.grid)},   {"c", vec(t.c)},
                {"cp", vec(t.cp)},    {"s", vec(t.s)},
                {"sp", vec(t.sp)}};
  std::ostringstream ss;
  write_trajectory_csv(ss, t);
  o.csv = ss.str();
  o.summary = "trajectory with " + std::to_string(t.grid.size()) + " points";
  return o;
}

Output dispatch(const RunConfig& cfg) {
  const std::string& c = cfg.command;
  if (c == "spectrum") return do_spectrum(cfg);
  if (c == "compare") return do_compare(cfg);
  if (c == "verify") return do_verify(cfg);
  if (c == "kernel") return do_kernel(cfg);
  if (c == "oracle") return do_oracle(cfg);
  if (c == "identities") return report_output(identities_report(cfg, tolerances_of(cfg.params)));
  if (c == "scan") return do_scan(cfg);
  if (c == "trajectory") return do_trajectory(cfg);
  throw InputError("unknown command '" + c + "'");
}

void diagnostic(std::ostream& err, int status, const char* kind, const std::string& message) {
  err << Json{{"level", "error"}, {"status", status}, {"kind", kind}, {"message", message}}.dump() << '\n';
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"spectrum", "compare", "verify", "kernel",
                                                 "oracle",   "identities", "scan", "trajectory"};
  return names;
}

RunConfig load_run_config(const std::string& command, const Json& params) {
  const auto it = command_table().find(command);
  if (it == command_table().end()) throw InputError("unknown command '" + command + "'");
  if (!params.is_object()) throw InputError("config must be a JSON object");
  const CommandKeys& keys = it->second;
  for (const auto& [k, v] : params.items()) {
    if (k == "command") {
      if (!v.is_string() || v.get<std::string>() != command)
        throw InputError("config command does not match '" + command + "'");
      continue;
    }
    if (std::find(keys.allowed.begin(), keys.allowed.end(), k) == keys.allowed.end())
      throw InputError("unknown key '" + k + "' for " + command);
  }
  for (const auto& k : keys.required)
    if (!params.contains(k)) throw InputError("missing key '" + k + "' for " + command);

  // type and range checks that need no computation
  if (params.contains("count")) int_at(params, "count", 1, 1);
  if (params.contains("lattice")) int_at(params, "lattice", 2, 2);
  if (params.contains("cells")) int_at(params, "cells", 2, 2);
  if (params.contains("points")) int_at(params, "points", 1, 1);
  if (params.contains("max_iterations")) int_at(params, "max_iterations", 1, 1);
  if (params.contains("tolerance")) positive_at(params, "tolerance", 1.0);
  if (params.contains("root_tol")) positive_at(params, "root_tol", 1.0);
  steps_of(params);
  if (params.contains("tolerances")) tolerances_from_json(params.at("tolerances"));
  if (params.contains("mu_samples")) samples_of(params);
  for (const char* key : {"bc", "bc_a", "bc_b"})
    if (params.contains(key)) parse_boundary_condition(str_at(params, key));
  if (params.contains("theorem")) {
    const std::string t = str_at(params, "theorem");
    if (t != "T1" && t != "T2" && t != "T5.1" && t != "T5.2" && t != "R5.4" && t != "IDENT")
      throw InputError("unknown theorem '" + t + "'");
  }
  const Json& pot = params.at("potential");
  if (pot.is_object())
    spec_from_json(pot);
  else if (!pot.is_string())
    throw InputError("potential must be a spec object or a path");

  RunConfig cfg;
  cfg.command = command;
  cfg.params = params;
  return cfg;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string started = utc_now();
  try {
    if (cfg.format != "json" && cfg.format != "csv") throw InputError("format must be json or csv");
    const Output o = dispatch(cfg);
    const std::string primary = cfg.format == "json" ? o.json.dump(2) + "\n" : o.csv;
    if (cfg.out_path.empty())
      out << primary;
    else
      write_text_file(cfg.out_path, primary);
    if (!cfg.csv_path.empty()) write_text_file(cfg.csv_path, o.csv);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!cfg.out_path.empty()) {
      const Json meta{{"command", cfg.command},   {"started_utc", started}, {"elapsed_seconds", elapsed},
                      {"format", cfg.format},     {"exit_status", o.status}};
      write_text_file(cfg.out_path + ".meta.json", meta.dump(2) + "\n");
    }
    if (!cfg.quiet)
      err << Json{{"level", "info"}, {"command", cfg.command}, {"status", o.status}, {"summary", o.summary}}.dump()
          << '\n';
    return o.status;
  } catch (const InputError& e) {
    diagnostic(err, kExitInput, "input", e.what());
    return kExitInput;
  } catch (const Json::exception& e) {
    diagnostic(err, kExitInput, "input", e.what());
    return kExitInput;
  } catch (const NumericalError& e) {
    diagnostic(err, kExitNumerical, "numerical", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    diagnostic(err, kExitNumerical, "numerical", e.what());
    return kExitNumerical;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sturm-Liouville spectra and symmetry criteria", "slspec"};
  app.require_subcommand(1);
  std::string config_path, out_path, format = "json", csv_path;
  bool quiet = false;
  for (const auto& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_path, "primary output path (default stdout)");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--csv", csv_path, "secondary CSV output path");
    sub->add_flag("--quiet", quiet, "suppress the summary line");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    diagnostic(err, kExitInput, "usage", e.what());
    return kExitInput;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  RunConfig cfg;
  try {
    const Json params = parse_json(read_text_file(config_path), config_path);
    cfg = load_run_config(command, params);
  } catch (const InputError& e) {
    diagnostic(err, kExitInput, "input", e.what());
    return kExitInput;
  } catch (const Json::exception& e) {
    diagnostic(err, kExitInput, "input", e.what());
    return kExitInput;
  }
  cfg.base_dir = std::filesystem::path(config_path).parent_path().string();
  cfg.out_path = out_path;
  cfg.format = format;
  cfg.csv_path = csv_path;
  cfg.quiet = quiet;
  return run(cfg, out, err);
}

}  // namespace slspec
