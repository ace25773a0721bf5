#include "wft/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "wft/errors.hpp"

namespace wft {

namespace {

constexpr double kTieTolerance = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

DatumSpec DatumSpec::Riemann(double left, double right) {
  DatumSpec d;
  d.kind = Kind::kRiemann;
  d.left = left;
  d.right = right;
  return d;
}

DatumSpec DatumSpec::Steps(std::vector<double> breakpoints, std::vector<double> values) {
  DatumSpec d;
  d.kind = Kind::kSteps;
  d.breakpoints = std::move(breakpoints);
  d.values = std::move(values);
  return d;
}

DatumSpec DatumSpec::Function(std::string name, double support, double amplitude) {
  DatumSpec d;
  d.kind = Kind::kFunction;
  d.function = std::move(name);
  d.support = support;
  d.amplitude = amplitude;
  return d;
}

std::vector<std::string> DatumFunctionNames() { return {"linear", "sign", "sine", "hat"}; }

namespace {

void CheckFunctionName(const std::string& name) {
  const auto names = DatumFunctionNames();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw DomainError("unknown datum function '" + name + "'");
  }
}

// Antiderivative of the datum on [-A, A].
double DatumPrimitive(const DatumSpec& d, double x) {
  const double a = d.amplitude;
  const double s = d.support;
  if (d.function == "linear") return a * x * x / (2.0 * s);
  if (d.function == "sign") return a * std::abs(x);
  if (d.function == "sine") return -a * s / std::numbers::pi * std::cos(std::numbers::pi * x / s);
  if (d.function == "hat") return a * (x - std::copysign(x * x, x) / (2.0 * s));
  throw DomainError("unknown datum function '" + d.function + "'");
}

double Quantize(const Subdivision& states, double v) {
  const double m = states.points().back();
  if (std::abs(v) > m * (1.0 + 1e-12)) throw DomainError("datum value outside [-M, M]");
  return states[states.Nearest(v)];
}

}  // namespace

double EvalDatumFunction(const DatumSpec& d, double x) {
  if (d.kind != DatumSpec::Kind::kFunction) throw DomainError("datum is not a sampled function");
  CheckFunctionName(d.function);
  if (std::abs(x) > d.support) return 0.0;
  const double a = d.amplitude;
  const double s = d.support;
  if (d.function == "linear") return a * x / s;
  if (d.function == "sign") return x < 0.0 ? -a : a;
  if (d.function == "sine") return a * std::sin(std::numbers::pi * x / s);
  return a * (1.0 - std::abs(x) / s);
}

int DefaultCellCount(double eps) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  return static_cast<int>(std::ceil(1.0 / std::sqrt(eps) - 1e-12));
}

StepFunction QuantizeInitial(const DatumSpec& datum, int m, const Subdivision& states) {
  if (m <= 0) throw DomainError("cell count m must be positive");
  switch (datum.kind) {
    case DatumSpec::Kind::kRiemann:
      return StepFunction({0.0}, {Quantize(states, datum.left), Quantize(states, datum.right)}).Merged();
    case DatumSpec::Kind::kSteps: {
      if (datum.values.size() != datum.breakpoints.size() + 1) {
        throw DomainError("step datum needs one more value than breakpoints");
      }
      std::vector<double> vals;
      for (double v : datum.values) vals.push_back(Quantize(states, v));
      return StepFunction(datum.breakpoints, std::move(vals)).Merged();
    }
    case DatumSpec::Kind::kFunction: {
      CheckFunctionName(datum.function);
      const double a = datum.support;
      if (!(a > 0.0)) throw DomainError("support radius A must be positive");
      if (std::abs(datum.amplitude) > states.points().back() * (1.0 + 1e-12)) {
        throw DomainError("datum amplitude exceeds M");
      }
      const double h = 2.0 * a / m;
      const double outside = Quantize(states, 0.0);
      std::vector<double> bps;
      std::vector<double> vals{outside};
      for (int i = 0; i <= m; ++i) bps.push_back(i == m ? a : -a + i * h);
      for (int i = 0; i < m; ++i) {
        const double avg = (DatumPrimitive(datum, bps[i + 1]) - DatumPrimitive(datum, bps[i])) / h;
        vals.push_back(Quantize(states, std::clamp(avg, -std::abs(datum.amplitude), std::abs(datum.amplitude))));
      }
      vals.push_back(outside);
      return StepFunction(std::move(bps), std::move(vals)).Merged();
    }
  }
  throw DomainError("unknown datum kind");
}

const char* ToString(Interaction kind) {
  switch (kind) {
    case Interaction::kSS: return "SS";
    case Interaction::kRS: return "RS";
    case Interaction::kSR: return "SR";
    case Interaction::kCancel: return "cancel";
  }
  return "?";
}

namespace {

std::vector<Front> Anchor(const std::vector<WaveFront>& fan, double x, double t) {
  std::vector<Front> out;
  out.reserve(fan.size());
  for (const WaveFront& w : fan) out.push_back({x, t, w.speed, w.left, w.right, w.kind});
  return out;
}

std::size_t StateIndex(const ApproxFlux& fe, double v) {
  const auto idx = fe.subdivision().IndexOf(v);
  if (!idx) throw DomainError("step value " + std::to_string(v) + " is not a subdivision state");
  return *idx;
}

// Front positions at t, made nondecreasing to absorb rounding.
std::vector<double> Positions(const TrackerState& state, double t) {
  std::vector<double> x;
  x.reserve(state.fronts.size());
  for (const Front& f : state.fronts) {
    const double p = f.Position(t);
    x.push_back(x.empty() ? p : std::max(p, x.back()));
  }
  return x;
}

// Region containing x at time t: the number of fronts at or left of x.
std::size_t RegionIndex(const std::vector<double>& positions, double x) {
  return static_cast<std::size_t>(std::upper_bound(positions.begin(), positions.end(), x) -
                                  positions.begin());
}

std::size_t RegionState(const TrackerState& state, std::size_t k) {
  return k == 0 ? state.far_left : state.fronts[k - 1].right;
}

double ChiOf(const TrackerState& state, std::size_t k) {
  const double u = state.State(RegionState(state, k));
  const std::size_t n = state.fronts.size();
  const bool shock_left = k > 0 && state.fronts[k - 1].kind == WaveKind::kShock;
  const bool rare_left = k > 0 && state.fronts[k - 1].kind == WaveKind::kRarefaction;
  const bool shock_right = k < n && state.fronts[k].kind == WaveKind::kShock;
  const bool rare_right = k < n && state.fronts[k].kind == WaveKind::kRarefaction;
  const ConvexFlux& f = state.fe().flux();
  if (shock_left && rare_right) return f.VelocityLimits(u).second;
  if (rare_left && shock_right) return f.VelocityLimits(u).first;
  return f.MeanVelocity(u);
}

void CheckTime(const TrackerState& state, double t) {
  if (!(t >= state.time - kTieTolerance)) {
    throw DomainError("cannot sample before the current tracker time");
  }
}

}  // namespace

TrackerState InitTracker(const StepFunction& steps, const ApproxFlux& fe) {
  const StepFunction s = steps.Merged();
  TrackerState state;
  state.approx = fe;
  state.initial = s;
  state.far_left = StateIndex(fe, s.values().front());
  for (std::size_t i = 0; i < s.breakpoints().size(); ++i) {
    const std::size_t l = StateIndex(fe, s.values()[i]);
    const std::size_t r = StateIndex(fe, s.values()[i + 1]);
    for (const Front& f : Anchor(SolveApprox(fe, l, r), s.breakpoints()[i], 0.0)) {
      state.fronts.push_back(f);
    }
  }
  state.initial_front_count = state.fronts.size();
  state.event_budget = state.fronts.size();
  return state;
}

std::optional<Event> NextEvent(const TrackerState& state) {
  const auto& fr = state.fronts;
  std::optional<Event> best;
  for (std::size_t j = 0; j + 1 < fr.size(); ++j) {
    const double closing = fr[j].speed - fr[j + 1].speed;
    if (!(closing > 0.0)) continue;
    const double gap = std::max(0.0, fr[j + 1].Position(state.time) - fr[j].Position(state.time));
    const double t = state.time + gap / closing;
    if (!best || t < best->time - kTieTolerance) {
      const double x = 0.5 * (fr[j].Position(t) + fr[j + 1].Position(t));
      best = Event{t, x, j};
    }
  }
  return best;
}

void ResolveEvent(TrackerState& state, const Event& event) {
  auto& fr = state.fronts;
  if (event.first + 1 >= fr.size()) throw DomainError("event does not reference a front pair");
  if (event.time < state.time - kTieTolerance) throw DomainError("event lies in the past");
  const Front a = fr[event.first];
  const Front b = fr[event.first + 1];
  if (a.right != b.left) throw InvariantViolation("colliding fronts do not share a state");
  if (a.kind == WaveKind::kRarefaction && b.kind == WaveKind::kRarefaction) {
    throw InvariantViolation("two rarefaction fronts collided");
  }
  const double t = std::max(event.time, state.time);
  std::vector<Front> out = Anchor(SolveApprox(state.fe(), a.left, b.right), event.x, t);
  if (out.size() >= 2) throw InvariantViolation("interaction did not reduce the front count");
  Interaction kind = Interaction::kSS;
  if (out.empty()) {
    kind = Interaction::kCancel;
  } else if (a.kind == WaveKind::kRarefaction) {
    kind = Interaction::kRS;
  } else if (b.kind == WaveKind::kRarefaction) {
    kind = Interaction::kSR;
  }
  fr.erase(fr.begin() + static_cast<std::ptrdiff_t>(event.first),
           fr.begin() + static_cast<std::ptrdiff_t>(event.first) + 2);
  fr.insert(fr.begin() + static_cast<std::ptrdiff_t>(event.first), out.begin(), out.end());
  state.time = t;
  state.events.push_back({t, event.x, event.first, {a, b}, std::move(out), kind});
  if (state.events.size() > state.event_budget) {
    throw InvariantViolation("more events than initial fronts");
  }
}

void AdvanceTo(TrackerState& state, double t) {
  if (t < state.time) throw DomainError("cannot advance backwards in time");
  while (true) {
    const std::optional<Event> ev = NextEvent(state);
    if (!ev || ev->time > t) break;
    ResolveEvent(state, *ev);
  }
  state.time = t;
}

std::vector<double> EventTimes(const TrackerState& state) {
  std::vector<double> times;
  for (const EventRecord& e : state.events) times.push_back(e.time);
  return times;
}

double SampleSolution(const TrackerState& state, double t, double x) {
  CheckTime(state, t);
  return state.State(RegionState(state, RegionIndex(Positions(state, t), x)));
}

double SampleChi(const TrackerState& state, double t, double x) {
  CheckTime(state, t);
  return ChiOf(state, RegionIndex(Positions(state, t), x));
}

namespace {

StepFunction FromRegions(const std::vector<Region>& regions, double Region::*field) {
  std::vector<double> bps;
  std::vector<double> vals;
  for (const Region& r : regions) {
    if (!vals.empty()) bps.push_back(r.x_left);
    vals.push_back(r.*field);
  }
  return StepFunction(std::move(bps), std::move(vals)).Merged();
}

}  // namespace

StepFunction Snapshot::Solution() const { return FromRegions(regions, &Region::u); }
StepFunction Snapshot::Chi() const { return FromRegions(regions, &Region::chi); }

Snapshot TakeSnapshot(const TrackerState& state, double t) {
  CheckTime(state, t);
  const std::vector<double> x = Positions(state, t);
  const std::size_t n = state.fronts.size();
  Snapshot snap{t, {}};
  for (std::size_t k = 0; k <= n; ++k) {
    const double lo = k == 0 ? -kInf : x[k - 1];
    const double hi = k == n ? kInf : x[k];
    if (!(hi > lo)) continue;
    Region r{lo, hi, state.State(RegionState(state, k)), ChiOf(state, k), std::nullopt, std::nullopt};
    if (k > 0) r.left_kind = state.fronts[k - 1].kind;
    if (k < n) r.right_kind = state.fronts[k].kind;
    snap.regions.push_back(r);
  }
  return snap;
}

namespace {

double Mass(const StepFunction& f, double lo, double hi, double* abs_mass) {
  double total = 0.0;
  const auto& bp = f.breakpoints();
  const auto& v = f.values();
  double left = lo;
  for (std::size_t i = 0; i <= bp.size(); ++i) {
    const double right = i < bp.size() ? std::clamp(bp[i], lo, hi) : hi;
    if (right > left) {
      total += v[i] * (right - left);
      if (abs_mass) *abs_mass += std::abs(v[i]) * (right - left);
      left = right;
    }
  }
  return total;
}

}  // namespace

MassBalance CheckConservation(const TrackerState& state, double t) {
  const Snapshot snap = TakeSnapshot(state, t);
  double extent = 1.0;
  for (double b : state.initial.breakpoints()) extent = std::max(extent, std::abs(b));
  for (const Front& f : state.fronts) extent = std::max({extent, std::abs(f.Position(t)), std::abs(f.x0)});
  const double r = 2.0 * extent;
  double scale = 0.0;
  const double m0 = Mass(state.initial, -r, r, &scale);
  const double mt = Mass(snap.Solution(), -r, r, nullptr);
  const ApproxFlux& fe = state.fe();
  const double influx = t * (fe.Value(state.far_left) - fe.Value(state.FarRight()));
  scale += std::abs(influx);
  return {mt - m0 - influx, std::max(scale, 1e-300)};
}

void CheckStructure(const TrackerState& state, double t) {
  const auto& fr = state.fronts;
  const ApproxFlux& fe = state.fe();
  const std::size_t p = fe.subdivision().size();
  double scale = 1.0;
  for (const Front& f : fr) scale = std::max(scale, std::abs(f.Position(t)));
  for (std::size_t j = 0; j < fr.size(); ++j) {
    const Front& f = fr[j];
    if (f.left >= p || f.right >= p) throw InvariantViolation("front state outside the subdivision");
    if (j == 0 ? f.left != state.far_left : f.left != fr[j - 1].right) {
      throw InvariantViolation("front states do not chain");
    }
    if (j > 0 && f.Position(t) < fr[j - 1].Position(t) - 1e-9 * scale) {
      throw InvariantViolation("fronts out of order");
    }
    if (f.kind == WaveKind::kShock) {
      if (!(f.left > f.right)) throw InvariantViolation("inadmissible shock");
      if (f.speed != fe.ChordSpeed(f.left, f.right)) throw InvariantViolation("shock speed is not Rankine-Hugoniot");
    } else {
      if (f.right != f.left + 1) throw InvariantViolation("rarefaction front spans more than one cell");
      if (f.speed != fe.CellSlope(f.right)) throw InvariantViolation("rarefaction front speed is not the cell slope");
    }
  }
}

}  // namespace wft
