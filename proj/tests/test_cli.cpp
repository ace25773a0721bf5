#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "wft/cli.hpp"
#include "wft/errors.hpp"

using namespace wft;

namespace {

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path TempDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("wft_test_cli_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("builtin scenarios parse and validate") {
  const auto names = BuiltinScenarioNames();
  CHECK(std::find(names.begin(), names.end(), "example12") != names.end());
  for (const auto& n : names) {
    const Scenario s = ParseScenario(*BuiltinScenarioText(n));
    CHECK(s.name == n);
  }
  const Scenario e12 = ResolveScenario("example12");
  CHECK(e12.flux.builtin == "example12");
  CHECK(e12.eps == 0.5);
  CHECK(e12.datum == DatumSpec::Riemann(-1.0, 1.0));
  CHECK(BuiltinFluxNames() == std::vector<std::string>{"burgers", "power(p)", "example12", "atomic(N, delta)"});
  CHECK_THROWS(ResolveScenario("no-such-scenario"));
}

TEST_CASE("scenario round trip") {
  Scenario s;
  s.name = "rt";
  s.flux.builtin = "table";
  s.flux.table = {{-1.0, -3.0, -3.0}, {0.0, -1.0, 1.0}, {1.0, 3.0, 3.0}};
  s.datum = DatumSpec::Steps({-0.5, 0.1 + 0.2}, {0.0, 1.0 / 3.0, -0.7});
  s.eps = 0.123456789012345678;
  s.m = 7;
  s.times = {0.25, 1.0 / 3.0};
  s.alpha = -2.5;
  s.beta = 4.0;
  s.seed = 12345678901234ULL;
  s.pairs = 17;
  s.tolerance = 1e-10;
  const Scenario back = ParseScenario(SerializeScenario(s));
  CHECK(back == s);
  for (const auto& n : BuiltinScenarioNames()) {
    const Scenario b = ParseScenario(*BuiltinScenarioText(n));
    CHECK(ParseScenario(SerializeScenario(b)) == b);
  }
  Scenario f;
  f.datum = DatumSpec::Function("hat", 1.5, 0.5);
  CHECK(ParseScenario(SerializeScenario(f)) == f);
}

TEST_CASE("config errors name the field and line") {
  try {
    ParseScenario("name: bad\nflux:\n  builtin: burgers\neps: -1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.field() == "eps");
    CHECK(e.line() == 4);
  }
  try {
    ParseScenario("eps: 0.5\ndatum:\n  kind: riemann\n  left: abc\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.field() == "datum.left");
    CHECK(e.line() == 4);
  }
  CHECK_THROWS_AS(ParseScenario("epsilon: 0.5\n"), ParseError);
  CHECK_THROWS_AS(ParseScenario("datum:\n  kind: riemann\n  left: 2\n"), ParseError);
  CHECK_THROWS_AS(ParseScenario("times: [0, 1]\n"), ParseError);
  CHECK_THROWS_AS(ParseScenario("interval: [1, 0]\n"), ParseError);
  CHECK_THROWS_AS(ParseScenario("flux:\n  builtin: cubic\n"), ParseError);
  CHECK_THROWS_AS(ParseScenario("datum:\n  kind: steps\n  breakpoints: [0]\n  values: [1]\n"), ParseError);
  CHECK_THROWS_AS(ParseScenario("eps: [0.5\n"), ParseError);
}

TEST_CASE("example12 scenario passes its asserted checks") {
  const Bundle b = RunScenario(ResolveScenario("example12"));
  CHECK(b.Pass());
  CHECK(!b.checks.empty());
  CHECK(!b.snapshots.empty());
  bool has_control = false;
  for (const auto& c : b.checks) {
    if (c.asserted) CHECK_MESSAGE(c.pass, c.name);
    if (c.name == "mean_range_control") has_control = true;
  }
  CHECK(has_control);
}

TEST_CASE("every builtin scenario passes") {
  for (const auto& n : BuiltinScenarioNames()) {
    const Bundle b = RunScenario(ResolveScenario(n));
    CHECK_MESSAGE(b.Pass(), n);
  }
}

TEST_CASE("report files and determinism") {
  const Bundle b = RunScenario(ResolveScenario("burgers-steps"));
  const auto d1 = TempDir("a");
  const auto d2 = TempDir("b");
  const auto files = EmitReport(b, d1, {});
  EmitReport(RunScenario(ResolveScenario("burgers-steps")), d2, {});
  CHECK(files.size() == 4 + b.snapshots.size());
  for (const auto& f : files) CHECK(Slurp(f) == Slurp(d2 / f.filename()));
  const std::string profiles = Slurp(d1 / "profiles.csv");
  CHECK(profiles.rfind("t,x_left,x_right,u,chi,left_front_kind,right_front_kind\n", 0) == 0);
  CHECK(Slurp(d1 / "events.csv").rfind("t,x,classification,in_count,out_count\n", 0) == 0);
  const auto checks = nlohmann::json::parse(Slurp(d1 / "checks.json"));
  REQUIRE(checks.is_array());
  CHECK(checks.size() == b.checks.size());
  for (const char* key : {"name", "value", "bound", "slack", "pass", "tolerance", "asserted", "witness"}) {
    CHECK(checks[0].contains(key));
  }
  const auto vars = nlohmann::json::parse(Slurp(d1 / "variations.json"));
  for (const char* key : {"mode", "value", "chain"}) CHECK(vars[0].contains(key));
  const auto only_csv = EmitReport(b, TempDir("c"), {Format::kCsv});
  CHECK(only_csv.size() == 2);
}

TEST_CASE("profile SVG has one path per constant piece") {
  const Bundle b = RunScenario(ResolveScenario("burgers-steps"));
  const Snapshot& s = b.snapshots.front();
  const std::string svg = ProfileSvg(s, -10.0, 10.0);
  std::size_t paths = 0;
  for (std::size_t pos = svg.find("<path"); pos != std::string::npos; pos = svg.find("<path", pos + 1)) ++paths;
  CHECK(paths == 2 * s.regions.size());
}

TEST_CASE("zero fronts give a single full-line region row") {
  Scenario s;
  s.flux.builtin = "burgers";
  s.datum = DatumSpec::Riemann(0.5, 0.5);
  s.eps = 0.25;
  const Bundle b = RunScenario(s);
  CHECK(b.Pass());
  const std::string csv = ProfilesCsv(b);
  std::istringstream in(csv);
  std::string header;
  std::string row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(row.find("-inf,inf,") != std::string::npos);
  CHECK(row.find(",none,none") != std::string::npos);
  CHECK(b.snapshots.front().regions.size() == 1);
}

TEST_CASE("phi tables") {
  const FluxPtr f = BuildFlux(FluxSpec{}, 1.0);
  const auto files = EmitPhi(*f, TempDir("phi"), {});
  CHECK(files.size() == 4);
  const std::string table = Slurp(files[2]);
  CHECK(table.rfind("s,Phi\n", 0) == 0);
  CHECK(table.find("1,2\n") != std::string::npos);
  CHECK(table.find("2,6\n") != std::string::npos);
}

TEST_CASE("number formatting") {
  CHECK(FormatNumber(0.1) == "0.10000000000000001");
  CHECK(FormatNumber(2.0) == "2");
}
