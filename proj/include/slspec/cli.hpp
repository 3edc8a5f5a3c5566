#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "slspec/io.hpp"

namespace slspec {

enum ExitStatus { kExitOk = 0, kExitInconsistent = 1, kExitInput = 2, kExitNumerical = 3 };

/// Commands: spectrum, compare, verify, kernel, oracle, identities, scan, trajectory.
struct RunConfig {
  std::string command;
  Json params;             // command config, validated by load_run_config
  std::string base_dir;    // relative potential paths resolve against this
  std::string out_path;    // empty: stdout
  std::string format = "json";
  std::string csv_path;    // optional secondary CSV next to a JSON primary
  bool quiet = false;
};

const std::vector<std::string>& command_names();

/// Strict validation of the command's config object; throws InputError.
RunConfig load_run_config(const std::string& command, const Json& params);

/// Dispatches, writes artifacts, returns the exit status. Errors become a single JSON line on err.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command line: `slspec <command> --config <path> [--out p] [--format json|csv] [--csv p] [--quiet]`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace slspec
