#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "slspec/cli.hpp"
#include "support.hpp"

using namespace slspec;
using namespace slspec::test;
namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("slspec_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string write(const std::string& name, const std::string& text) const {
    const auto p = (dir / name).string();
    write_text_file(p, text);
    return p;
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

struct Result {
  int status;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "slspec");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int s = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {s, out.str(), err.str()};
}

}  // namespace

TEST_CASE("spectrum command") {
  Scratch s;
  const auto cfg = s.write("s.json", R"({"potential":{"kind":"const","params":{"c":0}},"bc":"D","count":3})");
  const Result r = cli({"spectrum", "--config", cfg, "--quiet"});
  CHECK(r.status == 0);
  CHECK(r.err.empty());
  const Json j = parse_json(r.out);
  REQUIRE(j.at("eigenvalues").size() == 3);
  for (int n = 1; n <= 3; ++n) CHECK(j["eigenvalues"][n - 1]["mu"].get<double>() == doctest::Approx(n * n * pi2));
}

TEST_CASE("verify command writes report, CSV and sidecar") {
  Scratch s;
  const auto cfg = s.write(
      "v.json", R"({"theorem":"T1","potential":{"kind":"trig","params":{"terms":[{"fn":"cos"}]}},"count":8})");
  const Result r = cli({"verify", "--config", cfg, "--out", s.path("r.json"), "--csv", s.path("r.csv")});
  CHECK(r.status == 0);
  const Json rep = parse_json(read_text_file(s.path("r.json")));
  CHECK(rep.at("verdict") == "consistent-forward");
  CHECK(report_from_json(rep).theorem == "T1");
  CHECK(fs::exists(s.path("r.json.meta.json")));
  CHECK(read_text_file(s.path("r.csv")).rfind("index,DN,ND,gap", 0) == 0);
  // one JSON line on stderr
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);

  // byte-identical rerun
  cli({"verify", "--config", cfg, "--out", s.path("r2.json"), "--quiet"});
  CHECK(read_text_file(s.path("r.json")) == read_text_file(s.path("r2.json")));
}

TEST_CASE("inconsistent verdict exits 1") {
  Scratch s;
  // tight spectral tolerance for a BB potential on a coarse grid: condition holds, spectra miss
  const auto cfg = s.write("v.json", R"({"theorem":"T2","count":4,"tolerances":{"spectral":1e-14,"condition":1e-2},
    "potential":{"kind":"bb","params":{"q2":{"kind":"poly","params":{"coefficients":[-2,4]}}},"nodes":50}})");
  const Result r = cli({"verify", "--config", cfg, "--quiet"});
  CHECK(r.status == 1);
  CHECK(parse_json(r.out).at("verdict") == "inconsistent");
}

TEST_CASE("input errors exit 2 with a JSON diagnostic") {
  Scratch s;
  const Result bad = cli({"verify", "--config", s.write("b.json", "{not json")});
  CHECK(bad.status == 2);
  const Json d = parse_json(bad.err);
  CHECK(d.at("kind") == "input");
  CHECK(d.at("message").get<std::string>().find("malformed JSON") != std::string::npos);

  CHECK(cli({"spectrum", "--config", s.write("u.json", R"({"potential":{"kind":"const","params":{"c":0}},"bc":"D","count":3,"x":1})")}).status == 2);
  CHECK(cli({"spectrum", "--config", s.write("c.json", R"({"potential":{"kind":"const","params":{"c":0}},"bc":"D","count":0})")}).status == 2);
  CHECK(cli({"verify", "--config", s.write("t.json", R"({"theorem":"T1","potential":{"kind":"const","params":{"c":0}},"count":2,"tolerances":{"spectral":-1}})")}).status == 2);
  CHECK(cli({"spectrum", "--config", s.path("missing.json")}).status == 2);
  CHECK(cli({"spectrum"}).status == 2);
  CHECK(cli({"bogus", "--config", "x"}).status == 2);
}

TEST_CASE("numerical failure exits 3") {
  Scratch s;
  const auto cfg = s.write("k.json", R"({"potential":{"kind":"trig","params":{"terms":[{"fn":"cos","amplitude":40}]}},"lattice":50,"max_iterations":2})");
  const Result r = cli({"kernel", "--config", cfg, "--quiet"});
  CHECK(r.status == 3);
  CHECK(parse_json(r.err).at("kind") == "numerical");
}

TEST_CASE("other commands") {
  Scratch s;
  const std::string pot = R"("potential":{"kind":"trig","params":{"terms":[{"fn":"cos"}]},"nodes":400})";
  CHECK(cli({"compare", "--config", s.write("c.json", "{" + pot + R"(,"bc_a":"DN","bc_b":"ND","count":4})"), "--quiet"}).status == 0);
  CHECK(cli({"oracle", "--config", s.write("o.json", "{" + pot + R"(,"bc":"P","count":4,"cells":200})"), "--quiet"}).status == 0);
  CHECK(cli({"identities", "--config", s.write("i.json", "{" + pot + "}"), "--quiet"}).status == 0);
  CHECK(cli({"trajectory", "--config", s.write("t.json", "{" + pot + R"(,"mu":10})"), "--format", "csv", "--quiet"}).out.rfind("x,c,cp,s,sp\n", 0) == 0);

  const Result k = cli({"kernel", "--config", s.write("k.json", "{" + pot + R"(,"lattice":40})"), "--format", "csv", "--quiet"});
  CHECK(k.status == 0);
  CHECK(k.out.rfind("x,t,K\n", 0) == 0);
  CHECK(std::count(k.out.begin(), k.out.end(), '\n') == 1 + 41 * 42 / 2);
  CHECK(cli({"kernel", "--config", s.write("m.json", "{" + pot + R"(,"lattice":40,"midpoint":true})"), "--quiet"}).status == 0);

  const Result sc = cli({"scan", "--config", s.write("s.json", R"({"potential":{"kind":"const","params":{"c":0}},"function":"delta","mu_min":0,"mu_max":100,"points":500})"), "--format", "csv", "--quiet"});
  CHECK(sc.status == 0);
  CHECK(std::count(sc.out.begin(), sc.out.end(), '\n') == 501);

  // potential given by path, relative to the config
  s.write("pot.json", R"({"kind":"const","params":{"c":0}})");
  CHECK(cli({"verify", "--config", s.write("p.json", R"({"theorem":"R5.4","potential":"pot.json","count":3})"), "--quiet"}).status == 0);
}

TEST_CASE("installed binary") {
  Scratch s;
  const auto cfg = s.write("s.json", R"({"potential":{"kind":"const","params":{"c":0}},"bc":"D","count":3})");
  const std::string cmd = std::string(SLSPEC_CLI_PATH) + " spectrum --config " + cfg + " --out " + s.path("o.json") + " --quiet";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(parse_json(read_text_file(s.path("o.json"))).at("eigenvalues").size() == 3);
  const std::string bad = std::string(SLSPEC_CLI_PATH) + " verify --config " + s.write("b.json", "{") + " 2>/dev/null";
  const int st = std::system(bad.c_str());
  CHECK(WEXITSTATUS(st) == 2);
}
