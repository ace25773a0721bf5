#include "wft/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "wft/errors.hpp"

namespace wft {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kEventGuard = 1e-12;

// Front positions at t, nondecreasing.
std::vector<double> Positions(const TrackerState& state, double t) {
  std::vector<double> x;
  x.reserve(state.fronts.size());
  for (const Front& f : state.fronts) {
    const double p = f.Position(t);
    x.push_back(x.empty() ? p : std::max(p, x.back()));
  }
  return x;
}

std::size_t RegionState(const TrackerState& state, std::size_t k) {
  return k == 0 ? state.far_left : state.fronts[k - 1].right;
}

std::size_t RegionIndex(const std::vector<double>& positions, double x) {
  return static_cast<std::size_t>(std::upper_bound(positions.begin(), positions.end(), x) -
                                  positions.begin());
}

// Copy of `state` advanced to t, refusing event times.
TrackerState AdvancedCopy(const TrackerState& state, double t) {
  if (!(t > 0.0)) throw DomainError("checks need t > 0");
  if (t < state.time - kEventGuard) throw DomainError("tracker is already past the requested time");
  TrackerState s = state;
  AdvanceTo(s, t);
  for (const EventRecord& e : s.events) {
    if (std::abs(e.time - t) <= kEventGuard) throw DomainError("check requested at an event time");
  }
  if (const auto next = NextEvent(s); next && std::abs(next->time - t) <= kEventGuard) {
    throw DomainError("check requested at an event time");
  }
  return s;
}

double MaxAbsBreakpoint(const StepFunction& f) {
  double a = 0.0;
  for (double b : f.breakpoints()) a = std::max(a, std::abs(b));
  return a;
}

}  // namespace

BoundCheck BoundCheck::Make(std::string name, double value, double bound, double tolerance,
                            bool asserted) {
  BoundCheck c;
  c.name = std::move(name);
  c.value = value;
  c.bound = bound;
  c.slack = bound - value;
  c.tolerance = tolerance;
  c.asserted = asserted;
  c.pass = value <= bound + tolerance * std::max(1.0, std::abs(bound));
  return c;
}

Json ToJson(const BoundCheck& check) {
  Json j;
  j["name"] = check.name;
  j["value"] = check.value;
  j["bound"] = check.bound;
  j["slack"] = check.slack;
  j["pass"] = check.pass;
  j["tolerance"] = check.tolerance;
  j["asserted"] = check.asserted;
  j["witness"] = check.witness;
  return j;
}

Json ToJson(const VariationReport& report) {
  Json j;
  j["mode"] = ToString(report.mode);
  j["value"] = report.value;
  j["chain"] = report.chain;
  if (report.interval) j["interval"] = {report.interval->first, report.interval->second};
  if (report.bound) j["bound"] = *report.bound;
  if (report.slack) j["slack"] = *report.slack;
  return j;
}

bool AllAssertedPass(const std::vector<BoundCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const BoundCheck& c) { return !c.asserted || c.pass; });
}

std::vector<double> NonEventTimes(const TrackerState& state, double horizon,
                                  const std::vector<double>& requested, std::size_t max_count) {
  if (!(horizon > state.time)) throw DomainError("horizon must lie after the current time");
  TrackerState s = state;
  AdvanceTo(s, horizon);
  std::vector<double> events = EventTimes(s);
  if (const auto next = NextEvent(s)) events.push_back(next->time);
  auto near_event = [&](double t) {
    return std::any_of(events.begin(), events.end(),
                       [&](double e) { return std::abs(e - t) <= 1e-9; });
  };
  std::vector<double> out;
  for (double t : requested) {
    if (!(t > 0.0) || t > horizon) continue;
    double shifted = t;
    for (int k = 1; k <= 4 && near_event(shifted); ++k) shifted = t + (k % 2 ? 1.0 : -1.0) * 1e-9 * k;
    if (!near_event(shifted) && shifted > 0.0) out.push_back(shifted);
  }
  std::vector<double> cuts{std::max(state.time, 0.0)};
  for (double e : events) {
    if (e > cuts.back() && e < horizon) cuts.push_back(e);
  }
  cuts.push_back(horizon);
  std::vector<double> mids;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] > 4e-9) mids.push_back(0.5 * (cuts[i] + cuts[i + 1]));
  }
  const std::size_t room = max_count > out.size() ? max_count - out.size() : 0;
  if (mids.size() <= room) {
    out.insert(out.end(), mids.begin(), mids.end());
  } else if (room > 0) {
    for (std::size_t i = 0; i < room; ++i) {
      const std::size_t k = room == 1 ? mids.size() - 1 : i * (mids.size() - 1) / (room - 1);
      out.push_back(mids[k]);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double InitialVelocitySup(const TrackerState& state) {
  double sup = 0.0;
  for (double v : state.initial.values()) sup = std::max(sup, state.fe().flux().VelocitySup(v, v));
  return sup;
}

double InitialSupportRadius(const TrackerState& state) { return MaxAbsBreakpoint(state.initial); }

std::vector<BoundCheck> CheckModifiedOleinik(const TrackerState& state, double t, double tolerance) {
  const TrackerState s = AdvancedCopy(state, t);
  const ConvexFlux& f = s.fe().flux();
  const double eps = s.fe().eps();
  const auto& fr = s.fronts;
  std::vector<BoundCheck> out;
  std::size_t j = 0;
  while (j < fr.size()) {
    if (fr[j].kind != WaveKind::kRarefaction) {
      ++j;
      continue;
    }
    std::size_t jp = j;
    while (jp + 1 < fr.size() && fr[jp + 1].kind == WaveKind::kRarefaction) ++jp;
    const bool shock_left = j > 0;
    const bool shock_right = jp + 1 < fr.size();
    const double ul = s.State(fr[j].left);
    const double ur = s.State(fr[jp].right);
    const double x_first = fr[j].Position(0.0);
    const double x_last = fr[jp].Position(0.0);
    const double tilde_l = x_first + f.MeanVelocity(ul) * t;
    const double tilde_l_plus = x_first + fr[j].speed * t;
    const double tilde_r = x_last + f.MeanVelocity(ur) * t;
    const double tilde_r_minus = x_last + fr[jp].speed * t;
    const double vl = shock_left ? f.VelocityLimits(ul).second : f.MeanVelocity(ul);
    const double vr = shock_right ? f.VelocityLimits(ur).first : f.MeanVelocity(ur);
    const double xl = shock_left ? tilde_l_plus : tilde_l;
    const double xr = shock_right ? tilde_r_minus : tilde_r;
    const double allowance = 0.25 * eps * ((shock_left ? 1 : 0) + (shock_right ? 1 : 0));
    const char* variant = shock_left ? (shock_right ? "d" : "c") : (shock_right ? "b" : "a");
    BoundCheck c = BoundCheck::Make(std::string("modified_oleinik_") + variant, vr - vl,
                                    (xr - xl) / t + allowance, tolerance);
    c.witness["t"] = t;
    c.witness["first_front"] = j;
    c.witness["last_front"] = jp;
    c.witness["u_left"] = ul;
    c.witness["u_right"] = ur;
    c.witness["x_left"] = xl;
    c.witness["x_right"] = xr;
    c.witness["allowance"] = allowance;
    out.push_back(std::move(c));
    j = jp + 1;
  }
  return out;
}

TvBoundChecks CheckTvBounds(const TrackerState& state, double t, double tolerance) {
  if (state.far_left != state.FarRight()) throw DomainError("TV bounds need compactly supported data");
  const TrackerState s = AdvancedCopy(state, t);
  const Snapshot snap = TakeSnapshot(s, t);
  const std::vector<double> chi = snap.Chi().values();
  const double m0 = static_cast<double>(s.initial_front_count);
  const double eps = s.fe().eps();
  const double a_sup = InitialVelocitySup(s);
  const double radius = InitialSupportRadius(s);
  double x_first = 0.0;
  double x_last = 0.0;
  if (!s.fronts.empty()) {
    const std::vector<double> x = Positions(s, t);
    x_first = x.front();
    x_last = x.back();
  }
  const double l_t = 2.0 * std::max(std::abs(x_first), std::abs(x_last));

  TvBoundChecks out;
  const VariationReport plus = Tv(chi, Sign::kPositive);
  out.positive = BoundCheck::Make("tv_plus_chi", plus.value, l_t / t + 0.5 * m0 * eps, tolerance);
  out.positive.witness["t"] = t;
  out.positive.witness["L"] = l_t;
  out.positive.witness["support_diameter"] = x_last - x_first;
  out.positive.witness["m0"] = m0;
  out.positive.witness["eps"] = eps;
  out.positive.witness["chain"] = plus.chain;

  const double c_const = std::max(4.0 * radius, 6.0 * a_sup);
  const VariationReport total = Tv(chi, Sign::kSigned);
  out.total = BoundCheck::Make("tv_chi", total.value, c_const * (1.0 + 1.0 / t) + m0 * eps, tolerance);
  out.total.witness["t"] = t;
  out.total.witness["C"] = c_const;
  out.total.witness["A"] = radius;
  out.total.witness["velocity_sup"] = a_sup;
  out.total.witness["m0"] = m0;
  out.total.witness["eps"] = eps;

  out.support = BoundCheck::Make("support_growth", l_t, 2.0 * radius + 2.0 * t * a_sup, tolerance);
  out.support.witness["t"] = t;
  out.support.witness["x_first"] = x_first;
  out.support.witness["x_last"] = x_last;
  return out;
}

namespace {

SolutionBoundChecks MakeSolutionChecks(const VariationReport& plus, const VariationReport& total,
                                       double alpha, double beta, double t, double velocity_sup,
                                       double allowance, double tolerance) {
  if (!(t > 0.0)) throw DomainError("solution bounds need t > 0");
  const double width = beta - alpha;
  SolutionBoundChecks out;
  out.positive = BoundCheck::Make("tv_phi_plus_u", plus.value, width / t + allowance, tolerance);
  out.total = BoundCheck::Make("tv_phi_u", total.value, 2.0 * (velocity_sup + width / t) + allowance,
                               tolerance);
  for (BoundCheck* c : {&out.positive, &out.total}) {
    c->witness["t"] = t;
    c->witness["alpha"] = alpha;
    c->witness["beta"] = beta;
    c->witness["allowance"] = allowance;
  }
  out.positive.witness["chain"] = plus.chain;
  out.total.witness["chain"] = total.chain;
  out.total.witness["velocity_sup"] = velocity_sup;
  return out;
}

}  // namespace

SolutionBoundChecks CheckSolutionBounds(const StepFunction& u, const GaugeFn& phi, double alpha,
                                        double beta, double t, double velocity_sup, double allowance,
                                        double tolerance) {
  return MakeSolutionChecks(TvPhiInterval(u, phi, alpha, beta, Sign::kPositive),
                            TvPhiInterval(u, phi, alpha, beta, Sign::kSigned), alpha, beta, t,
                            velocity_sup, allowance, tolerance);
}

VariationReport TvPhiPieces(const std::vector<LinearPiece>& pieces, const GaugeFn& phi, double alpha,
                            double beta, Sign sign) {
  if (!(alpha < beta)) throw DomainError("variation interval needs alpha < beta");
  std::vector<double> values;
  for (const LinearPiece& p : pieces) {
    const double a = std::max(alpha, p.x0);
    const double b = std::min(beta, p.x1);
    if (a > b) continue;
    const double slope = p.x1 > p.x0 ? (p.y1 - p.y0) / (p.x1 - p.x0) : 0.0;
    values.push_back(p.y0 + slope * (a - p.x0));
    values.push_back(p.y0 + slope * (b - p.x0));
  }
  if (values.empty()) throw DomainError("pieces do not meet the interval");
  VariationReport rep = TvPhi(values, phi, sign);
  rep.interval = std::make_pair(alpha, beta);
  return rep;
}

SolutionBoundChecks CheckSolutionBounds(const std::vector<LinearPiece>& u, const GaugeFn& phi,
                                        double alpha, double beta, double t, double velocity_sup,
                                        double allowance, double tolerance) {
  return MakeSolutionChecks(TvPhiPieces(u, phi, alpha, beta, Sign::kPositive),
                            TvPhiPieces(u, phi, alpha, beta, Sign::kSigned), alpha, beta, t,
                            velocity_sup, allowance, tolerance);
}

TimeContinuityChecks CheckTimeContinuity(const TrackerState& state, const GaugeFn& phi, double t1,
                                         double t2, double tau, double tolerance) {
  if (t1 > t2) std::swap(t1, t2);
  if (!(tau > 0.0) || t1 < tau) throw DomainError("time continuity needs 0 < tau <= T1");
  if (!(t2 > t1)) throw DomainError("time continuity needs T1 != T2");
  TrackerState s = AdvancedCopy(state, t1);
  const Snapshot a = TakeSnapshot(s, t1);
  s = AdvancedCopy(s, t2);
  const Snapshot b = TakeSnapshot(s, t2);
  auto identity = [](double v) { return v; };
  const double chi_l1 = IntegrateDifference(a.Chi(), b.Chi(), identity);
  const double orlicz = IntegrateDifference(a.Solution(), b.Solution(), phi);
  const double m0 = static_cast<double>(s.initial_front_count);
  const double eps = s.fe().eps();
  const double c_const = std::max(4.0 * InitialSupportRadius(s), 6.0 * InitialVelocitySup(s));
  const double scale = (c_const * (1.0 + 1.0 / tau) + m0 * eps) * (t2 - t1);

  TimeContinuityChecks out;
  out.lipschitz = BoundCheck::Make("time_lipschitz_chi", chi_l1, scale, tolerance, false);
  out.orlicz = BoundCheck::Make("time_orlicz_u", orlicz, scale, tolerance, false);
  for (BoundCheck* c : {&out.lipschitz, &out.orlicz}) {
    c->witness["T1"] = t1;
    c->witness["T2"] = t2;
    c->witness["tau"] = tau;
    c->witness["C"] = c_const;
    c->witness["K_hat"] = scale > 0.0 ? c->value / scale : 0.0;
  }
  out.chain = BoundCheck::Make("time_orlicz_below_chi", orlicz, chi_l1, tolerance);
  out.chain.witness["T1"] = t1;
  out.chain.witness["T2"] = t2;
  return out;
}

BoundCheck CheckChainBound(const Snapshot& snapshot, const GaugeFn& phi, double tolerance) {
  const std::vector<double> u = snapshot.Solution().values();
  const std::vector<double> chi = snapshot.Chi().values();
  const VariationReport lhs = TvPhi(u, phi, Sign::kSigned);
  const VariationReport rhs = Tv(chi, Sign::kSigned);
  BoundCheck c = BoundCheck::Make("tv_phi_u_below_tv_chi", lhs.value, rhs.value, tolerance);
  c.witness["t"] = snapshot.t;
  c.witness["chain"] = lhs.chain;
  return c;
}

OleinikSearch FindOleinikViolation(const RiemannFan& fan, double t, double lambda, std::size_t grid,
                                   double tolerance) {
  if (fan.kind == RiemannFan::Kind::kShock) throw DomainError("Oleinik search needs a rarefaction fan");
  if (!(t > 0.0)) throw DomainError("Oleinik search needs t > 0");
  if (lambda < 0.0 || lambda > 1.0) throw DomainError("lambda must lie in [0, 1]");
  if (grid < 2) throw DomainError("Oleinik search needs at least two grid points");
  OleinikSearch out;
  if (fan.kind == RiemannFan::Kind::kEmpty) return out;
  const ConvexFlux& f = *fan.flux;

  // Speeds: a uniform grid around the fan plus the lambda-mean speeds of
  // states in the fan, so isolated points of the mean range are hit.
  std::vector<double> xi;
  const double lo = fan.left_edge - 1.0;
  const double hi = fan.right_edge + 1.0;
  for (std::size_t i = 0; i < grid; ++i) xi.push_back(lo + (hi - lo) * static_cast<double>(i) / (grid - 1));
  for (std::size_t i = 0; i < grid; ++i) {
    const double u = fan.left + (fan.right - fan.left) * static_cast<double>(i) / (grid - 1);
    xi.push_back(f.VelocityMean(u, lambda));
  }
  for (const auto& k : f.velocity().knots()) {
    if (k.u >= fan.left && k.u <= fan.right) xi.push_back(f.VelocityMean(k.u, lambda));
  }
  std::sort(xi.begin(), xi.end());
  xi.erase(std::unique(xi.begin(), xi.end()), xi.end());

  struct Sample {
    double x;
    double mean;
    double minus;
    double plus;
    bool admissible;
  };
  std::vector<Sample> samples;
  for (double s : xi) {
    const double u = EvalExact(fan, s);
    const auto [am, ap] = f.VelocityLimits(u);
    samples.push_back({s * t, f.VelocityMean(u, lambda), am, ap, f.InMeanRange(s, lambda, 1e-12)});
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t k = i + 1; k < samples.size(); ++k) {
      const Sample& y = samples[i];
      const Sample& x = samples[k];
      const double rhs = (x.x - y.x) / t;
      const double slack = tolerance * std::max(1.0, std::abs(rhs));
      ++out.pairs;
      const double lhs = x.mean - y.mean;
      const bool violated = lhs > rhs + slack;
      if (violated) out.violations.push_back({y.x, x.x, lhs, rhs});
      if (y.admissible && x.admissible) {
        ++out.admissible_pairs;
        if (violated) ++out.admissible_violations;
      }
      ++out.one_sided_pairs;
      if (x.minus - y.plus > rhs + slack) ++out.one_sided_failures;
    }
  }
  return out;
}

OneSidedStats CheckOneSidedExact(const RiemannFan& fan, double t, std::size_t pairs, std::uint64_t seed,
                                 double tolerance) {
  if (!(t > 0.0)) throw DomainError("one-sided check needs t > 0");
  OneSidedStats out;
  if (fan.kind == RiemannFan::Kind::kEmpty) return out;
  const ConvexFlux& f = *fan.flux;
  const double lo = fan.kind == RiemannFan::Kind::kShock ? fan.speed - 1.0 : fan.left_edge - 1.0;
  const double hi = fan.kind == RiemannFan::Kind::kShock ? fan.speed + 1.0 : fan.right_edge + 1.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo * t, hi * t);
  for (std::size_t i = 0; i < pairs; ++i) {
    double y = dist(rng);
    double x = dist(rng);
    if (y > x) std::swap(x, y);
    if (!(x > y)) continue;
    const double lhs = f.VelocityLimits(EvalExact(fan, x / t)).first -
                       f.VelocityLimits(EvalExact(fan, y / t)).second;
    const double rhs = (x - y) / t;
    ++out.pairs;
    out.worst_excess = std::max(out.worst_excess, lhs - rhs);
    if (lhs > rhs + tolerance * std::max(1.0, std::abs(rhs))) {
      ++out.failures;
      ++out.relaxed_failures;
    }
  }
  return out;
}

OneSidedStats CheckOneSidedTracker(const TrackerState& state, double t, std::size_t pairs,
                                   std::uint64_t seed, double tolerance) {
  const TrackerState s = AdvancedCopy(state, t);
  const ConvexFlux& f = s.fe().flux();
  const double eps = s.fe().eps();
  const std::vector<double> pos = Positions(s, t);
  OneSidedStats out;
  const double lo = pos.empty() ? -1.0 : pos.front() - 1.0;
  const double hi = pos.empty() ? 1.0 : pos.back() + 1.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, pos.empty() ? 0 : pos.size() - 1);
  for (std::size_t i = 0; i < pairs; ++i) {
    double y;
    double x;
    if (!pos.empty() && i % 2 == 1) {
      // Pairs hugging fronts, where the inequality is tightest.
      y = pos[pick(rng)] - 1e-7 * unit(rng);
      x = pos[pick(rng)] + 1e-7 * unit(rng);
    } else {
      y = dist(rng);
      x = dist(rng);
    }
    if (y > x) std::swap(x, y);
    if (!(x > y)) continue;
    const std::size_t ry = RegionIndex(pos, y);
    const std::size_t rx = RegionIndex(pos, x);
    std::size_t runs = 0;
    for (std::size_t k = ry; k < rx; ++k) {
      if (s.fronts[k].kind == WaveKind::kRarefaction &&
          (k == ry || s.fronts[k - 1].kind != WaveKind::kRarefaction)) {
        ++runs;
      }
    }
    const double lhs = f.VelocityLimits(s.State(RegionState(s, rx))).first -
                       f.VelocityLimits(s.State(RegionState(s, ry))).second;
    const double rhs = (x - y) / t;
    const double slack = tolerance * std::max(1.0, std::abs(rhs));
    ++out.pairs;
    out.worst_excess = std::max(out.worst_excess, lhs - rhs);
    if (lhs > rhs + slack) ++out.failures;
    if (lhs > rhs + 0.5 * eps * static_cast<double>(runs) + slack) ++out.relaxed_failures;
  }
  return out;
}

ConvergenceStudy RunConvergenceStudy(const FluxPtr& flux, const DatumSpec& datum, double t,
                                     double radius, const std::vector<double>& eps_list, int m) {
  if (datum.kind != DatumSpec::Kind::kRiemann) {
    throw DomainError("convergence study needs Riemann data (exact reference)");
  }
  if (!(t > 0.0) || !(radius > 0.0)) throw DomainError("convergence study needs t, radius > 0");
  if (eps_list.empty()) throw DomainError("convergence study needs at least one eps");
  const RiemannFan fan = SolveExact(flux, datum.left, datum.right);
  const std::vector<LinearPiece> exact = ExactProfile(fan, t, -radius, radius);
  ConvergenceStudy out{t, radius, {}, true};
  for (double eps : eps_list) {
    const ApproxFlux fe = MakeApproxFlux(flux, eps);
    const int cells = m > 0 ? m : DefaultCellCount(eps);
    TrackerState s = InitTracker(QuantizeInitial(datum, cells, fe.subdivision()), fe);
    AdvanceTo(s, t);
    const Snapshot snap = TakeSnapshot(s, t);
    const std::vector<double> chi = snap.Chi().values();
    ConvergenceRow row;
    row.eps = eps;
    row.m = cells;
    row.states = fe.subdivision().size();
    row.initial_fronts = s.initial_front_count;
    row.l1_error = L1Distance(snap.Solution(), exact, -radius, radius);
    row.tv_plus_chi = Tv(chi, Sign::kPositive).value;
    row.tv_chi = Tv(chi, Sign::kSigned).value;
    row.max_gap = fe.subdivision().MaxGap();
    if (!out.rows.empty() && row.l1_error > 1.1 * out.rows.back().l1_error + 1e-12) out.monotone = false;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace wft
