// Command-line front end: run, verify, convergence, list-builtins, phi.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wft/cli.hpp"
#include "wft/errors.hpp"

namespace {

struct Common {
  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::vector<std::string> formats;
};

void AddCommon(CLI::App* cmd, Common& c, bool with_config = true) {
  if (with_config) cmd->add_option("config", c.config, "scenario file or builtin scenario name")->required();
  cmd->add_option("--out-dir", c.out_dir, "output directory (default: the scenario's output)");
  cmd->add_option("--seed", c.seed, "RNG seed for randomized checks");
  cmd->add_option("--tolerance", c.tolerance, "check tolerance");
  cmd->add_option("--format", c.formats, "csv, json or svg (repeatable; default all)")
      ->check(CLI::IsMember({"csv", "json", "svg"}));
}

wft::Scenario Load(const Common& c) {
  wft::Scenario s = wft::ResolveScenario(c.config);
  if (c.seed) s.seed = *c.seed;
  if (c.tolerance) s.tolerance = *c.tolerance;
  if (!c.out_dir.empty()) s.out_dir = c.out_dir;
  return s;
}

std::vector<wft::Format> Formats(const Common& c) {
  std::vector<wft::Format> out;
  for (const std::string& f : c.formats) {
    out.push_back(f == "csv" ? wft::Format::kCsv : f == "json" ? wft::Format::kJson : wft::Format::kSvg);
  }
  return out;
}

void PrintWritten(const std::vector<std::filesystem::path>& paths) {
  for (const auto& p : paths) std::cout << "wrote " << p.string() << "\n";
}

std::vector<double> ParseLadder(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw wft::ParseError("--eps-ladder", 0, "not a number: '" + item + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave-front tracking for scalar conservation laws with discontinuous velocity"};
  app.require_subcommand(1);

  Common run_opts;
  CLI::App* run = app.add_subcommand("run", "run a scenario and write profiles, events, checks and plots");
  AddCommon(run, run_opts);

  Common verify_opts;
  CLI::App* verify = app.add_subcommand("verify", "run the check suite; nonzero exit iff an asserted check fails");
  AddCommon(verify, verify_opts);

  Common conv_opts;
  std::string ladder = "0.8,0.4,0.2,0.1";
  std::optional<int> fixed_m;
  CLI::App* conv = app.add_subcommand("convergence", "L1 error against the exact solution along an eps ladder");
  AddCommon(conv, conv_opts);
  conv->add_option("--eps-ladder", ladder, "comma-separated eps values");
  conv->add_option("--m", fixed_m, "fixed cell count (default: coupled to eps)");

  CLI::App* list = app.add_subcommand("list-builtins", "list builtin fluxes, data and scenarios");

  Common phi_opts;
  CLI::App* phi = app.add_subcommand("phi", "write omega, phi and Phi tables and a plot");
  AddCommon(phi, phi_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      std::cout << "fluxes:";
      for (const auto& n : wft::BuiltinFluxNames()) std::cout << " " << n;
      std::cout << "\ndata: riemann steps";
      for (const auto& n : wft::DatumFunctionNames()) std::cout << " function:" << n;
      std::cout << "\nscenarios:";
      for (const auto& n : wft::BuiltinScenarioNames()) std::cout << " " << n;
      std::cout << "\n";
      return 0;
    }
    if (run->parsed()) {
      const wft::Scenario s = Load(run_opts);
      const wft::Bundle b = wft::RunScenario(s);
      PrintWritten(wft::EmitReport(b, s.out_dir, Formats(run_opts)));
      for (const auto& n : b.notes) std::cout << "note: " << n << "\n";
      return 0;
    }
    if (verify->parsed()) {
      const wft::Scenario s = Load(verify_opts);
      const wft::Bundle b = wft::RunScenario(s);
      std::vector<wft::Format> formats = Formats(verify_opts);
      if (formats.empty()) formats = {wft::Format::kJson};
      PrintWritten(wft::EmitReport(b, s.out_dir, formats));
      std::size_t failed = 0;
      for (const auto& c : b.checks) {
        if (c.asserted && !c.pass) {
          ++failed;
          std::printf("FAIL %s value=%.17g bound=%.17g\n", c.name.c_str(), c.value, c.bound);
        }
      }
      for (const auto& n : b.notes) std::cout << "note: " << n << "\n";
      std::printf("%zu checks, %zu asserted failures\n", b.checks.size(), failed);
      return failed == 0 ? 0 : 1;
    }
    if (conv->parsed()) {
      const wft::Scenario s = Load(conv_opts);
      const wft::FluxPtr flux = wft::BuildFlux(s.flux, s.bound);
      const double radius = std::max(std::abs(s.alpha), std::abs(s.beta));
      const wft::ConvergenceStudy study = wft::RunConvergenceStudy(
          flux, s.datum, s.times.front(), radius, ParseLadder(ladder), fixed_m ? *fixed_m : s.m.value_or(0));
      const std::string csv = wft::ConvergenceCsv(study);
      std::cout << csv << "monotone: " << (study.monotone ? "yes" : "no") << "\n";
      std::filesystem::create_directories(s.out_dir);
      std::ofstream(std::filesystem::path(s.out_dir) / "convergence.csv") << csv;
      return 0;
    }
    if (phi->parsed()) {
      const wft::Scenario s = Load(phi_opts);
      const wft::FluxPtr flux = wft::BuildFlux(s.flux, s.bound);
      PrintWritten(wft::EmitPhi(*flux, s.out_dir, Formats(phi_opts)));
      return 0;
    }
  } catch (const wft::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
