// Scenario files, scenario runs and report emission for the command-line
// front end. The config grammar is documented in docs/config.md.

#ifndef WFT_CLI_HPP_
#define WFT_CLI_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wft/phi.hpp"
#include "wft/tracker.hpp"
#include "wft/verify.hpp"

namespace wft {

struct FluxSpec {
  // burgers, power, example12, atomic, or table.
  std::string builtin = "example12";
  double p = 3.0;
  int terms = 8;
  double delta = 1e-6;
  // table: rows (u, a^-(u), a^+(u)) from -M to M.
  std::vector<std::array<double, 3>> table;

  bool operator==(const FluxSpec&) const = default;
};

struct Scenario {
  std::string name = "scenario";
  FluxSpec flux;
  double bound = 1.0;  // M
  DatumSpec datum = DatumSpec::Riemann(-1.0, 1.0);
  double eps = 0.5;
  std::optional<int> m;
  std::vector<double> times{1.0};
  double alpha = -5.0;
  double beta = 5.0;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  std::size_t pairs = 1000;  // random pairs per snapshot for pointwise checks
  double tolerance = kDefaultTolerance;

  int CellCount() const { return m ? *m : DefaultCellCount(eps); }
  bool operator==(const Scenario&) const = default;
};

// Throws ParseError naming the field and line.
Scenario ParseScenario(const std::string& text);
Scenario LoadScenario(const std::filesystem::path& path);
std::string SerializeScenario(const Scenario& scenario);
// Throws ParseError (line 0) if a value is out of range.
void ValidateScenario(const Scenario& scenario);

std::vector<std::string> BuiltinScenarioNames();
// Config text of a builtin scenario, if the name is one.
std::optional<std::string> BuiltinScenarioText(const std::string& name);
// A file path, or a builtin scenario name.
Scenario ResolveScenario(const std::string& ref);

FluxPtr BuildFlux(const FluxSpec& spec, double bound);

struct Bundle {
  Scenario scenario;
  FluxPtr flux;
  std::size_t states = 0;
  std::size_t initial_fronts = 0;
  std::vector<Snapshot> snapshots;
  std::vector<EventRecord> events;
  std::vector<BoundCheck> checks;
  std::vector<VariationReport> variations;
  std::vector<std::string> notes;  // checks skipped, with the reason

  bool Pass() const { return AllAssertedPass(checks); }
};

Bundle RunScenario(const Scenario& scenario);

enum class Format { kCsv, kJson, kSvg };

// Writes profiles.csv, events.csv, checks.json, variations.json and one
// profile SVG per snapshot into dir, restricted to the requested formats.
// Returns the written paths. Throws std::runtime_error on I/O failure.
std::vector<std::filesystem::path> EmitReport(const Bundle& bundle, const std::filesystem::path& dir,
                                              const std::vector<Format>& formats);

std::string ProfilesCsv(const Bundle& bundle);
std::string EventsCsv(const Bundle& bundle);
std::string ChecksJson(const Bundle& bundle);
// u and chi against x; one path per constant piece each.
std::string ProfileSvg(const Snapshot& snapshot, double alpha, double beta);

// Tables of omega, phi and Phi, plus one SVG with the three graphs.
std::vector<std::filesystem::path> EmitPhi(const ConvexFlux& flux, const std::filesystem::path& dir,
                                           const std::vector<Format>& formats);

std::string ConvergenceCsv(const ConvergenceStudy& study);

// printf("%.17g").
std::string FormatNumber(double v);

}  // namespace wft

#endif  // WFT_CLI_HPP_
