#include "wft/cli.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>

#include "wft/errors.hpp"

namespace wft {

namespace {

int LineOf(const YAML::Node& node) { return node.Mark().line >= 0 ? node.Mark().line + 1 : 0; }

template <typename T>
T As(const YAML::Node& node, const std::string& field, const char* expected) {
  if (!node.IsScalar()) throw ParseError(field, LineOf(node), std::string("expected ") + expected);
  try {
    return node.as<T>();
  } catch (const YAML::BadConversion&) {
    throw ParseError(field, LineOf(node), std::string("expected ") + expected);
  }
}

std::vector<double> AsNumbers(const YAML::Node& node, const std::string& field) {
  if (!node.IsSequence()) throw ParseError(field, LineOf(node), "expected a list of numbers");
  std::vector<double> out;
  for (const YAML::Node& item : node) out.push_back(As<double>(item, field, "a number"));
  return out;
}

void RejectUnknown(const YAML::Node& map, const std::string& where, const std::set<std::string>& known) {
  for (const auto& kv : map) {
    const std::string key = kv.first.as<std::string>();
    if (!known.count(key)) {
      throw ParseError(where.empty() ? key : where + "." + key, LineOf(kv.first), "unknown key");
    }
  }
}

FluxSpec ParseFlux(const YAML::Node& node) {
  if (!node.IsMap()) throw ParseError("flux", LineOf(node), "expected a table");
  RejectUnknown(node, "flux", {"builtin", "p", "terms", "delta", "table"});
  FluxSpec spec;
  if (node["builtin"]) spec.builtin = As<std::string>(node["builtin"], "flux.builtin", "a name");
  if (node["p"]) spec.p = As<double>(node["p"], "flux.p", "a number");
  if (node["terms"]) spec.terms = As<int>(node["terms"], "flux.terms", "an integer");
  if (node["delta"]) spec.delta = As<double>(node["delta"], "flux.delta", "a number");
  if (const YAML::Node t = node["table"]) {
    if (!t.IsSequence()) throw ParseError("flux.table", LineOf(t), "expected a list of [u, minus, plus] rows");
    for (const YAML::Node& row : t) {
      const std::vector<double> r = AsNumbers(row, "flux.table");
      if (r.size() != 3) throw ParseError("flux.table", LineOf(row), "each row needs [u, minus, plus]");
      spec.table.push_back({r[0], r[1], r[2]});
    }
  }
  return spec;
}

DatumSpec ParseDatum(const YAML::Node& node) {
  if (!node.IsMap()) throw ParseError("datum", LineOf(node), "expected a table");
  RejectUnknown(node, "datum",
                {"kind", "left", "right", "breakpoints", "values", "function", "support", "amplitude"});
  DatumSpec d;
  const std::string kind = node["kind"] ? As<std::string>(node["kind"], "datum.kind", "a name") : "riemann";
  if (kind == "riemann") {
    d.kind = DatumSpec::Kind::kRiemann;
  } else if (kind == "steps") {
    d.kind = DatumSpec::Kind::kSteps;
  } else if (kind == "function") {
    d.kind = DatumSpec::Kind::kFunction;
  } else {
    throw ParseError("datum.kind", LineOf(node["kind"]), "expected riemann, steps or function");
  }
  if (node["left"]) d.left = As<double>(node["left"], "datum.left", "a number");
  if (node["right"]) d.right = As<double>(node["right"], "datum.right", "a number");
  if (node["breakpoints"]) d.breakpoints = AsNumbers(node["breakpoints"], "datum.breakpoints");
  if (node["values"]) d.values = AsNumbers(node["values"], "datum.values");
  if (node["function"]) d.function = As<std::string>(node["function"], "datum.function", "a name");
  if (node["support"]) d.support = As<double>(node["support"], "datum.support", "a number");
  if (node["amplitude"]) d.amplitude = As<double>(node["amplitude"], "datum.amplitude", "a number");
  return d;
}

// Line of a top-level key, for validation messages.
using LineMap = std::map<std::string, int>;

void Fail(const std::string& field, const LineMap& lines, const std::string& what) {
  const auto it = lines.find(field.substr(0, field.find('.')));
  throw ParseError(field, it == lines.end() ? 0 : it->second, what);
}

void Validate(const Scenario& s, const LineMap& lines) {
  if (!(s.bound > 0.0) || !std::isfinite(s.bound)) Fail("M", lines, "must be positive");
  if (!(s.eps > 0.0) || !std::isfinite(s.eps)) Fail("eps", lines, "must be positive");
  if (s.m && *s.m < 1) Fail("m", lines, "must be at least 1");
  if (s.times.empty()) Fail("times", lines, "needs at least one time");
  for (double t : s.times) {
    if (!(t > 0.0) || !std::isfinite(t)) Fail("times", lines, "times must be positive");
  }
  if (!(s.alpha < s.beta)) Fail("interval", lines, "needs alpha < beta");
  if (!(s.tolerance >= 0.0)) Fail("tolerance", lines, "must be nonnegative");
  const std::set<std::string> fluxes{"burgers", "power", "example12", "atomic", "table"};
  if (!fluxes.count(s.flux.builtin)) {
    Fail("flux.builtin", lines, "expected burgers, power, example12, atomic or table");
  }
  if (s.flux.builtin == "power" && !(s.flux.p > 0.0)) Fail("flux.p", lines, "must be positive");
  if (s.flux.builtin == "atomic" && s.flux.terms < 0) Fail("flux.terms", lines, "must be nonnegative");
  if (s.flux.builtin == "atomic" && !(s.flux.delta > 0.0)) Fail("flux.delta", lines, "must be positive");
  if (s.flux.builtin == "table" && s.flux.table.size() < 2) Fail("flux.table", lines, "needs at least two rows");
  auto in_range = [&](double v) { return std::abs(v) <= s.bound * (1.0 + 1e-12); };
  const DatumSpec& d = s.datum;
  switch (d.kind) {
    case DatumSpec::Kind::kRiemann:
      if (!in_range(d.left)) Fail("datum.left", lines, "outside [-M, M]");
      if (!in_range(d.right)) Fail("datum.right", lines, "outside [-M, M]");
      break;
    case DatumSpec::Kind::kSteps:
      if (d.values.size() != d.breakpoints.size() + 1) {
        Fail("datum.values", lines, "needs one more value than breakpoints");
      }
      for (double v : d.values) {
        if (!in_range(v)) Fail("datum.values", lines, "outside [-M, M]");
      }
      for (std::size_t i = 1; i < d.breakpoints.size(); ++i) {
        if (d.breakpoints[i] < d.breakpoints[i - 1]) Fail("datum.breakpoints", lines, "must be sorted");
      }
      break;
    case DatumSpec::Kind::kFunction: {
      const auto names = DatumFunctionNames();
      if (std::find(names.begin(), names.end(), d.function) == names.end()) {
        Fail("datum.function", lines, "expected linear, sign, sine or hat");
      }
      if (!(d.support > 0.0)) Fail("datum.support", lines, "must be positive");
      if (!in_range(d.amplitude)) Fail("datum.amplitude", lines, "outside [-M, M]");
      break;
    }
  }
}

const char* DatumKindName(DatumSpec::Kind kind) {
  switch (kind) {
    case DatumSpec::Kind::kRiemann: return "riemann";
    case DatumSpec::Kind::kSteps: return "steps";
    case DatumSpec::Kind::kFunction: return "function";
  }
  return "riemann";
}

const std::map<std::string, std::string>& Builtins() {
  static const std::map<std::string, std::string> table{
      {"example12",
       "name: example12\nM: 1\nflux:\n  builtin: example12\ndatum:\n  kind: riemann\n  left: -1\n"
       "  right: 1\neps: 0.5\ntimes: [1]\ninterval: [-5, 5]\n"},
      {"burgers-fan",
       "name: burgers-fan\nM: 1\nflux:\n  builtin: burgers\ndatum:\n  kind: riemann\n  left: -1\n"
       "  right: 1\neps: 0.1\ntimes: [1]\ninterval: [-1, 1]\n"},
      {"example12-sine",
       "name: example12-sine\nM: 1\nflux:\n  builtin: example12\ndatum:\n  kind: function\n"
       "  function: sine\n  support: 1\n  amplitude: 1\neps: 0.25\ntimes: [0.5, 1, 2]\n"
       "interval: [-3, 3]\n"},
      {"burgers-steps",
       "name: burgers-steps\nM: 1\nflux:\n  builtin: burgers\ndatum:\n  kind: steps\n"
       "  breakpoints: [-1, -0.5, 0, 0.5]\n  values: [0, 1, -1, 1, 0]\neps: 0.25\n"
       "times: [0.25, 1, 3]\ninterval: [-2, 4]\n"},
  };
  return table;
}

std::string KindName(const std::optional<WaveKind>& kind) { return kind ? ToString(*kind) : "none"; }

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

bool Wants(const std::vector<Format>& formats, Format f) {
  return formats.empty() || std::find(formats.begin(), formats.end(), f) != formats.end();
}

std::string Short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string FormatNumber(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Scenario ParseScenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ParseError("", e.mark.line >= 0 ? e.mark.line + 1 : 0, e.msg);
  }
  if (!root.IsMap()) throw ParseError("", LineOf(root), "scenario must be a key-value table");
  RejectUnknown(root, "",
                {"name", "M", "flux", "datum", "eps", "m", "times", "interval", "output", "seed", "pairs",
                 "tolerance"});
  Scenario s;
  LineMap lines;
  for (const auto& kv : root) lines[kv.first.as<std::string>()] = LineOf(kv.first);
  if (root["name"]) s.name = As<std::string>(root["name"], "name", "a string");
  if (root["M"]) s.bound = As<double>(root["M"], "M", "a number");
  if (root["flux"]) s.flux = ParseFlux(root["flux"]);
  if (root["datum"]) s.datum = ParseDatum(root["datum"]);
  if (root["eps"]) s.eps = As<double>(root["eps"], "eps", "a number");
  if (root["m"]) s.m = As<int>(root["m"], "m", "an integer");
  if (root["times"]) s.times = AsNumbers(root["times"], "times");
  if (const YAML::Node iv = root["interval"]) {
    const std::vector<double> v = AsNumbers(iv, "interval");
    if (v.size() != 2) throw ParseError("interval", LineOf(iv), "expected [alpha, beta]");
    s.alpha = v[0];
    s.beta = v[1];
  }
  if (root["output"]) s.out_dir = As<std::string>(root["output"], "output", "a path");
  if (root["seed"]) s.seed = As<std::uint64_t>(root["seed"], "seed", "a nonnegative integer");
  if (root["pairs"]) s.pairs = As<std::size_t>(root["pairs"], "pairs", "a nonnegative integer");
  if (root["tolerance"]) s.tolerance = As<double>(root["tolerance"], "tolerance", "a number");
  Validate(s, lines);
  return s;
}

Scenario LoadScenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseScenario(ss.str());
}

void ValidateScenario(const Scenario& scenario) { Validate(scenario, {}); }

std::string SerializeScenario(const Scenario& s) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << s.name;
  out << YAML::Key << "M" << YAML::Value << s.bound;
  out << YAML::Key << "flux" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "builtin" << YAML::Value << s.flux.builtin;
  out << YAML::Key << "p" << YAML::Value << s.flux.p;
  out << YAML::Key << "terms" << YAML::Value << s.flux.terms;
  out << YAML::Key << "delta" << YAML::Value << s.flux.delta;
  if (!s.flux.table.empty()) {
    out << YAML::Key << "table" << YAML::Value << YAML::BeginSeq;
    for (const auto& row : s.flux.table) {
      out << YAML::Flow << YAML::BeginSeq << row[0] << row[1] << row[2] << YAML::EndSeq;
    }
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;
  const DatumSpec& d = s.datum;
  out << YAML::Key << "datum" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << DatumKindName(d.kind);
  out << YAML::Key << "left" << YAML::Value << d.left;
  out << YAML::Key << "right" << YAML::Value << d.right;
  out << YAML::Key << "breakpoints" << YAML::Value << YAML::Flow << d.breakpoints;
  out << YAML::Key << "values" << YAML::Value << YAML::Flow << d.values;
  out << YAML::Key << "function" << YAML::Value << d.function;
  out << YAML::Key << "support" << YAML::Value << d.support;
  out << YAML::Key << "amplitude" << YAML::Value << d.amplitude;
  out << YAML::EndMap;
  out << YAML::Key << "eps" << YAML::Value << s.eps;
  if (s.m) out << YAML::Key << "m" << YAML::Value << *s.m;
  out << YAML::Key << "times" << YAML::Value << YAML::Flow << s.times;
  out << YAML::Key << "interval" << YAML::Value << YAML::Flow << YAML::BeginSeq << s.alpha << s.beta
      << YAML::EndSeq;
  out << YAML::Key << "output" << YAML::Value << s.out_dir;
  out << YAML::Key << "seed" << YAML::Value << s.seed;
  out << YAML::Key << "pairs" << YAML::Value << s.pairs;
  out << YAML::Key << "tolerance" << YAML::Value << s.tolerance;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::vector<std::string> BuiltinScenarioNames() {
  std::vector<std::string> names;
  for (const auto& [name, text] : Builtins()) names.push_back(name);
  return names;
}

std::optional<std::string> BuiltinScenarioText(const std::string& name) {
  const auto it = Builtins().find(name);
  if (it == Builtins().end()) return std::nullopt;
  return it->second;
}

Scenario ResolveScenario(const std::string& ref) {
  if (std::filesystem::exists(ref)) return LoadScenario(ref);
  if (const auto text = BuiltinScenarioText(ref)) return ParseScenario(*text);
  throw std::runtime_error("no scenario file or builtin named '" + ref + "'");
}

FluxPtr BuildFlux(const FluxSpec& spec, double bound) {
  if (spec.builtin == "burgers") return std::make_shared<const ConvexFlux>(BurgersFlux(bound));
  if (spec.builtin == "power") return std::make_shared<const ConvexFlux>(PowerFlux(spec.p, bound));
  if (spec.builtin == "example12") return std::make_shared<const ConvexFlux>(Example12Flux(bound));
  if (spec.builtin == "atomic") {
    return std::make_shared<const ConvexFlux>(AtomicFlux(spec.terms, spec.delta, bound));
  }
  if (spec.builtin == "table") {
    std::vector<MonotoneVelocity::Knot> knots;
    for (const auto& r : spec.table) knots.push_back({r[0], r[1], r[2]});
    if (knots.empty() || std::abs(knots.front().u + bound) > 1e-12 || std::abs(knots.back().u - bound) > 1e-12) {
      throw DomainError("velocity table must run from -M to M");
    }
    return std::make_shared<const ConvexFlux>(MonotoneVelocity(std::move(knots)), "table");
  }
  throw DomainError("unknown flux '" + spec.builtin + "'");
}

namespace {

void AddAll(std::vector<BoundCheck>& out, std::vector<BoundCheck> more) {
  for (BoundCheck& c : more) out.push_back(std::move(c));
}

BoundCheck Count(const std::string& name, std::size_t failures, bool asserted = true) {
  return BoundCheck::Make(name, static_cast<double>(failures), 0.0, 0.0, asserted);
}

void RunChecks(const Scenario& sc, const FluxPtr& flux, const GaugeFn& phi, Bundle& bundle) {
  const ApproxFlux fe = MakeApproxFlux(flux, sc.eps);
  const TrackerState initial = InitTracker(QuantizeInitial(sc.datum, sc.CellCount(), fe.subdivision()), fe);
  bundle.states = fe.subdivision().size();
  bundle.initial_fronts = initial.initial_front_count;
  const double tol = sc.tolerance;
  const double horizon = *std::max_element(sc.times.begin(), sc.times.end());
  const std::vector<double> times = NonEventTimes(initial, horizon, sc.times, sc.times.size() + 4);
  const bool compact = initial.far_left == initial.FarRight();
  if (!compact) bundle.notes.push_back("TV bounds skipped: far states differ (data not compactly supported)");
  const double m0 = static_cast<double>(initial.initial_front_count);
  const double a_sup = InitialVelocitySup(initial);
  std::mt19937_64 rng(sc.seed);

  TrackerState run = initial;
  for (double t : times) {
    AdvanceTo(run, t);
    CheckStructure(run, t);
    const Snapshot snap = TakeSnapshot(run, t);
    bundle.snapshots.push_back(snap);

    const MassBalance mass = CheckConservation(run, t);
    BoundCheck cons = BoundCheck::Make("conservation", std::abs(mass.defect) / mass.scale, 1e-9, 0.0);
    cons.witness["t"] = t;
    cons.witness["defect"] = mass.defect;
    bundle.checks.push_back(cons);

    // u = b(chi) at random points around the fronts.
    double lo = sc.alpha;
    double hi = sc.beta;
    if (!run.fronts.empty()) {
      lo = std::min(lo, run.fronts.front().Position(t) - 1.0);
      hi = std::max(hi, run.fronts.back().Position(t) + 1.0);
    }
    std::uniform_real_distribution<double> xs(lo, hi);
    double worst = 0.0;
    for (std::size_t i = 0; i < sc.pairs; ++i) {
      const double x = xs(rng);
      worst = std::max(worst, std::abs(flux->Inverse().EvalClamped(SampleChi(run, t, x)) - SampleSolution(run, t, x)));
    }
    BoundCheck inv = BoundCheck::Make("inverse_of_chi_is_u", worst, 0.0, tol);
    inv.witness["t"] = t;
    inv.witness["samples"] = sc.pairs;
    bundle.checks.push_back(inv);

    AddAll(bundle.checks, CheckModifiedOleinik(run, t, tol));
    if (compact) {
      const TvBoundChecks tv = CheckTvBounds(run, t, tol);
      bundle.checks.push_back(tv.positive);
      bundle.checks.push_back(tv.total);
      bundle.checks.push_back(tv.support);
    }
    const SolutionBoundChecks sol =
        CheckSolutionBounds(snap.Solution(), phi, sc.alpha, sc.beta, t, a_sup, m0 * sc.eps, tol);
    bundle.checks.push_back(sol.positive);
    bundle.checks.push_back(sol.total);
    bundle.checks.push_back(CheckChainBound(snap, phi, tol));

    VariationReport plus = TvPhiInterval(snap.Solution(), phi, sc.alpha, sc.beta, Sign::kPositive);
    plus.mode = VariationMode::kTVPhiPlus;
    plus.SetBound(sol.positive.bound);
    VariationReport total = TvPhiInterval(snap.Solution(), phi, sc.alpha, sc.beta, Sign::kSigned);
    total.mode = VariationMode::kTVPhi;
    total.SetBound(sol.total.bound);
    const std::vector<double> chi = snap.Chi().values();
    VariationReport chi_plus = Tv(chi, Sign::kPositive);
    chi_plus.mode = VariationMode::kTVPlus;
    VariationReport chi_total = Tv(chi, Sign::kSigned);
    chi_total.mode = VariationMode::kTV;
    for (VariationReport* r : {&plus, &total, &chi_plus, &chi_total}) bundle.variations.push_back(*r);

    const OneSidedStats os = CheckOneSidedTracker(run, t, sc.pairs, rng(), tol);
    BoundCheck relaxed = Count("one_sided_tracker_per_fan_allowance", os.relaxed_failures);
    relaxed.witness["t"] = t;
    relaxed.witness["pairs"] = os.pairs;
    bundle.checks.push_back(relaxed);
    BoundCheck raw = Count("one_sided_tracker_raw", os.failures, false);
    raw.witness["t"] = t;
    raw.witness["pairs"] = os.pairs;
    raw.witness["worst_excess"] = os.worst_excess;
    raw.witness["eps"] = sc.eps;
    bundle.checks.push_back(raw);
  }
  if (run.time < horizon) AdvanceTo(run, horizon);
  bundle.events = run.events;

  std::size_t growing = 0;
  for (const EventRecord& e : run.events) growing += e.outgoing.size() >= e.incoming.size();
  BoundCheck dec = Count("front_count_decreases", growing);
  dec.witness["events"] = run.events.size();
  bundle.checks.push_back(dec);
  bundle.checks.push_back(BoundCheck::Make("event_budget", static_cast<double>(run.events.size()), m0, 0.0));

  if (times.size() >= 2) {
    try {
      const TimeContinuityChecks tc = CheckTimeContinuity(initial, phi, times.front(), times.back(), times.front(), tol);
      bundle.checks.push_back(tc.lipschitz);
      bundle.checks.push_back(tc.orlicz);
      bundle.checks.push_back(tc.chain);
    } catch (const DomainError& e) {
      bundle.notes.push_back(std::string("time continuity skipped: ") + e.what());
    }
  }

  if (sc.datum.kind == DatumSpec::Kind::kRiemann) {
    const RiemannFan fan = SolveExact(flux, sc.datum.left, sc.datum.right);
    const double t = sc.times.front();
    const OneSidedStats ex = CheckOneSidedExact(fan, t, sc.pairs, rng(), tol);
    BoundCheck c = Count("one_sided_exact", ex.failures);
    c.witness["t"] = t;
    c.witness["pairs"] = ex.pairs;
    bundle.checks.push_back(c);
    const double a_exact = std::max(flux->VelocitySup(sc.datum.left, sc.datum.left),
                                    flux->VelocitySup(sc.datum.right, sc.datum.right));
    const SolutionBoundChecks exact =
        CheckSolutionBounds(ExactProfile(fan, t, sc.alpha, sc.beta), phi, sc.alpha, sc.beta, t, a_exact, 0.0, tol);
    for (BoundCheck b : {exact.positive, exact.total}) {
      b.name = "exact_" + b.name;
      bundle.checks.push_back(b);
    }
    if (fan.kind == RiemannFan::Kind::kRarefaction) {
      const OleinikSearch search = FindOleinikViolation(fan, t, 0.5, 200, tol);
      BoundCheck control = Count("mean_range_control", search.admissible_violations);
      control.witness["pairs"] = search.admissible_pairs;
      bundle.checks.push_back(control);
      bundle.checks.push_back(Count("one_sided_exact_grid", search.one_sided_failures));
      BoundCheck found = Count("oleinik_mean_violations", search.violations.size(), false);
      found.witness["lambda"] = 0.5;
      found.witness["pairs"] = search.pairs;
      if (!search.violations.empty()) {
        const OleinikWitness& w = search.violations.front();
        found.witness["first"] = {{"y", w.y}, {"x", w.x}, {"lhs", w.lhs}, {"rhs", w.rhs}};
      }
      bundle.checks.push_back(found);
    }
  }
}

}  // namespace

Bundle RunScenario(const Scenario& scenario) {
  ValidateScenario(scenario);
  Bundle bundle;
  bundle.scenario = scenario;
  try {
    bundle.flux = BuildFlux(scenario.flux, scenario.bound);
    const auto env = std::make_shared<const EnvelopeFunction>(BuildPhi(*bundle.flux));
    const GaugeFn phi = [env](double s) { return (*env)(std::min(s, env->upper())); };
    RunChecks(scenario, bundle.flux, phi, bundle);
  } catch (const InvariantViolation& e) {
    throw InvariantViolation("scenario '" + scenario.name + "': " + e.what());
  } catch (const DomainError& e) {
    throw DomainError("scenario '" + scenario.name + "': " + e.what());
  }
  return bundle;
}

std::string ProfilesCsv(const Bundle& bundle) {
  std::string out = "t,x_left,x_right,u,chi,left_front_kind,right_front_kind\n";
  for (const Snapshot& s : bundle.snapshots) {
    for (const Region& r : s.regions) {
      out += FormatNumber(s.t) + "," + FormatNumber(r.x_left) + "," + FormatNumber(r.x_right) + "," +
             FormatNumber(r.u) + "," + FormatNumber(r.chi) + "," + KindName(r.left_kind) + "," +
             KindName(r.right_kind) + "\n";
    }
  }
  return out;
}

std::string EventsCsv(const Bundle& bundle) {
  std::string out = "t,x,classification,in_count,out_count\n";
  for (const EventRecord& e : bundle.events) {
    out += FormatNumber(e.time) + "," + FormatNumber(e.x) + "," + ToString(e.classification) + "," +
           std::to_string(e.incoming.size()) + "," + std::to_string(e.outgoing.size()) + "\n";
  }
  return out;
}

std::string ChecksJson(const Bundle& bundle) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const BoundCheck& c : bundle.checks) arr.push_back(ToJson(c));
  return arr.dump(2) + "\n";
}

namespace {

std::string VariationsJson(const Bundle& bundle) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < bundle.variations.size(); ++i) {
    nlohmann::ordered_json j = ToJson(bundle.variations[i]);
    j["t"] = bundle.snapshots[i / 4].t;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

struct Frame {
  double x0, x1, y0, y1;  // data window
  double top;             // pixel offset of the panel
  double height;

  double X(double x) const { return 60.0 + (x - x0) / (x1 - x0) * 600.0; }
  double Y(double y) const { return top + height - (y - y0) / (y1 - y0) * height; }
};

std::pair<double, double> Range(const std::vector<double>& v) {
  double lo = *std::min_element(v.begin(), v.end());
  double hi = *std::max_element(v.begin(), v.end());
  if (!(hi > lo)) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::string Panel(const Frame& f, const std::string& label) {
  return "<rect x=\"60\" y=\"" + Short(f.top) + "\" width=\"600\" height=\"" + Short(f.height) +
         "\" fill=\"none\" stroke=\"#999\"/>\n<text x=\"8\" y=\"" + Short(f.top + 14) + "\">" + label +
         "</text>\n<text x=\"8\" y=\"" + Short(f.top + 30) + "\" font-size=\"10\">" + Short(f.y1) +
         "</text>\n<text x=\"8\" y=\"" + Short(f.top + f.height) + "\" font-size=\"10\">" + Short(f.y0) +
         "</text>\n";
}

std::string Polyline(const Frame& f, const std::vector<Point>& pts, const char* colour) {
  std::string d;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    d += (i == 0 ? "M" : " L") + Short(f.X(pts[i].x)) + " " + Short(f.Y(pts[i].y));
  }
  return "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + colour + "\"/>\n";
}

}  // namespace

std::string ProfileSvg(const Snapshot& snapshot, double alpha, double beta) {
  std::vector<double> us;
  std::vector<double> chis;
  for (const Region& r : snapshot.regions) {
    us.push_back(r.u);
    chis.push_back(r.chi);
  }
  const auto [ulo, uhi] = Range(us);
  const auto [clo, chi_hi] = Range(chis);
  const Frame fu{alpha, beta, ulo, uhi, 20.0, 200.0};
  const Frame fc{alpha, beta, clo, chi_hi, 250.0, 200.0};
  std::string out =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"680\" height=\"480\" font-family=\"sans-serif\" "
      "font-size=\"12\">\n<text x=\"300\" y=\"14\">t = " +
      Short(snapshot.t) + "</text>\n" + Panel(fu, "u") + Panel(fc, "chi");
  for (const auto& [frame, colour, field] :
       {std::tuple{fu, "#1f77b4", &Region::u}, std::tuple{fc, "#d62728", &Region::chi}}) {
    for (const Region& r : snapshot.regions) {
      const double a = std::max(alpha, r.x_left);
      const double b = std::min(beta, r.x_right);
      if (!(b > a)) continue;
      const double y = frame.Y(r.*field);
      out += "<path d=\"M" + Short(frame.X(a)) + " " + Short(y) + " H" + Short(frame.X(b)) +
             "\" stroke=\"" + colour + "\" stroke-width=\"2\"/>\n";
    }
  }
  out += "<text x=\"60\" y=\"470\" font-size=\"10\">" + Short(alpha) + "</text>\n<text x=\"640\" y=\"470\" "
         "font-size=\"10\">" + Short(beta) + "</text>\n</svg>\n";
  return out;
}

std::vector<std::filesystem::path> EmitReport(const Bundle& bundle, const std::filesystem::path& dir,
                                              const std::vector<Format>& formats) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const std::string& text) {
    WriteFile(dir / name, text);
    written.push_back(dir / name);
  };
  if (Wants(formats, Format::kCsv)) {
    emit("profiles.csv", ProfilesCsv(bundle));
    emit("events.csv", EventsCsv(bundle));
  }
  if (Wants(formats, Format::kJson)) {
    emit("checks.json", ChecksJson(bundle));
    emit("variations.json", VariationsJson(bundle));
  }
  if (Wants(formats, Format::kSvg)) {
    for (std::size_t i = 0; i < bundle.snapshots.size(); ++i) {
      emit("profile_" + std::to_string(i) + ".svg",
           ProfileSvg(bundle.snapshots[i], bundle.scenario.alpha, bundle.scenario.beta));
    }
  }
  return written;
}

std::vector<std::filesystem::path> EmitPhi(const ConvexFlux& flux, const std::filesystem::path& dir,
                                           const std::vector<Format>& formats) {
  const Gauge g = BuildGauge(flux);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  std::vector<Point> omega = g.omega.knots();
  std::vector<Point> phi;
  for (const auto& k : g.phi.knots()) {
    phi.push_back({k.x, k.minus});
    if (k.plus != k.minus) phi.push_back({k.x, k.plus});
  }
  std::vector<Point> envelope = g.envelope.profile().knots();
  if (Wants(formats, Format::kCsv)) {
    std::string o = "h,omega\n";
    for (const Point& p : omega) o += FormatNumber(p.x) + "," + FormatNumber(p.y) + "\n";
    std::string f = "y,phi_minus,phi_plus\n";
    for (const auto& k : g.phi.knots()) {
      f += FormatNumber(k.x) + "," + FormatNumber(k.minus) + "," + FormatNumber(k.plus) + "\n";
    }
    std::string e = "s,Phi\n";
    for (const Point& p : envelope) e += FormatNumber(p.x) + "," + FormatNumber(p.y) + "\n";
    for (const auto& [name, text] : {std::pair{"omega.csv", o}, std::pair{"phi.csv", f}, std::pair{"Phi.csv", e}}) {
      WriteFile(dir / name, text);
      written.push_back(dir / name);
    }
  }
  if (Wants(formats, Format::kSvg)) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto* pts : {&omega, &phi, &envelope}) {
      for (const Point& p : *pts) {
        xs.push_back(p.x);
        ys.push_back(p.y);
      }
    }
    const auto [x0, x1] = Range(xs);
    const auto [y0, y1] = Range(ys);
    const Frame fr{x0, x1, y0, y1, 20.0, 400.0};
    std::string svg =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"680\" height=\"460\" font-family=\"sans-serif\" "
        "font-size=\"12\">\n<text x=\"200\" y=\"14\">" + flux.name() +
        ": omega (blue), phi (green), Phi (red)</text>\n" + Panel(fr, "") + Polyline(fr, omega, "#1f77b4") +
        Polyline(fr, phi, "#2ca02c") + Polyline(fr, envelope, "#d62728") + "</svg>\n";
    WriteFile(dir / "phi.svg", svg);
    written.push_back(dir / "phi.svg");
  }
  return written;
}

std::string ConvergenceCsv(const ConvergenceStudy& study) {
  std::string out = "eps,m,states,initial_fronts,l1_error,tv_plus_chi,tv_chi,max_gap\n";
  for (const ConvergenceRow& r : study.rows) {
    out += FormatNumber(r.eps) + "," + std::to_string(r.m) + "," + std::to_string(r.states) + "," +
           std::to_string(r.initial_fronts) + "," + FormatNumber(r.l1_error) + "," +
           FormatNumber(r.tv_plus_chi) + "," + FormatNumber(r.tv_chi) + "," + FormatNumber(r.max_gap) + "\n";
  }
  return out;
}

}  // namespace wft
