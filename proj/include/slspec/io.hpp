#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "slspec/goursat.hpp"
#include "slspec/potential_spec.hpp"
#include "slspec/spectra.hpp"
#include "slspec/verify.hpp"

namespace slspec {

using Json = nlohmann::ordered_json;

/// Strict: unknown keys, missing required keys and wrong types raise InputError.
PotentialSpec spec_from_json(const Json& j);
Json to_json(const PotentialSpec& spec);
/// Compact canonical JSON of the spec; used as a potential's label.
std::string describe(const PotentialSpec& spec);

Json parse_json(std::string_view text, std::string_view what = "input");
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

Json to_json(const EigenvalueList& list);
EigenvalueList eigenvalue_list_from_json(const Json& j);

Json to_json(const SpectraComparison& cmp);
SpectraComparison comparison_from_json(const Json& j);

/// Keys may be omitted (defaults apply); every given value must be positive.
Tolerances tolerances_from_json(const Json& j);
Json to_json(const Tolerances& tol);

Json to_json(const TheoremReport& r);
TheoremReport report_from_json(const Json& j);

std::string format_double(double v);  // %.17g

void write_eigenvalue_csv(std::ostream& os, const EigenvalueList& list);
void write_pairs_csv(std::ostream& os, const SpectraComparison& cmp);
/// One row per lattice point: x, t, K(x, t), x measured from the interval's left end.
void write_kernel_csv(std::ostream& os, const GoursatKernel<double>& k);
void write_trajectory_csv(std::ostream& os, const FundamentalTrajectory<double>& t);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// "label,x,y" then one row per point, series in the given order.
void write_plot_csv(std::ostream& os, const std::vector<PlotSeries>& series);
void emit_plot_data(const std::vector<PlotSeries>& series, const std::string& path);

}  // namespace slspec
