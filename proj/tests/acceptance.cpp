// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wft/cli.hpp"
#include "wft/errors.hpp"
#include "wft/verify.hpp"

using namespace wft;

namespace {

int failures = 0;

void Report(int id, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string Fmt(const char* fmt, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c, d);
  return buf;
}

FluxPtr Make(ConvexFlux f) { return std::make_shared<const ConvexFlux>(std::move(f)); }

GaugeFn Clamped(const std::shared_ptr<const EnvelopeFunction>& env) {
  return [env](double s) { return (*env)(std::min(s, env->upper())); };
}

// Structural audit shared by every tracker run (criterion 8).
struct Audit {
  std::size_t runs = 0;
  std::size_t events = 0;
  std::size_t rr = 0;
  std::size_t non_decreasing = 0;
  std::size_t conservation = 0;
  std::size_t inverse = 0;
  std::size_t chain = 0;
  std::size_t snapshots = 0;

  bool Clean() const { return rr + non_decreasing + conservation + inverse + chain == 0; }

  // Steps event by event up to each time, checking the invariants.
  void Run(TrackerState s, const std::vector<double>& times, const GaugeFn& phi, std::mt19937_64& rng) {
    ++runs;
    const MonotoneProfile& b = s.fe().flux().Inverse();
    try {
      for (double t : times) {
        while (true) {
          const auto ev = NextEvent(s);
          if (!ev || ev->time > t) break;
          const std::size_t before = s.fronts.size();
          ResolveEvent(s, *ev);
          ++events;
          if (s.fronts.size() >= before) ++non_decreasing;
        }
        s.time = t;
        CheckStructure(s, t);
        const MassBalance mb = CheckConservation(s, t);
        if (std::abs(mb.defect) > 1e-9 * mb.scale) ++conservation;
        const double lo = s.fronts.empty() ? -2.0 : s.fronts.front().Position(t) - 1.0;
        const double hi = s.fronts.empty() ? 2.0 : s.fronts.back().Position(t) + 1.0;
        std::uniform_real_distribution<double> xs(lo, hi);
        for (int i = 0; i < 1000; ++i) {
          const double x = xs(rng);
          if (std::abs(b.EvalClamped(SampleChi(s, t, x)) - SampleSolution(s, t, x)) > 1e-9) ++inverse;
        }
        const Snapshot snap = TakeSnapshot(s, t);
        if (!CheckChainBound(snap, phi).pass) ++chain;
        ++snapshots;
      }
    } catch (const InvariantViolation& e) {
      ++rr;
      std::printf("  invariant violation: %s\n", e.what());
    }
  }
};

StepFunction RandomSteps(const Subdivision& states, int m, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, states.size() - 1);
  const double zero = states[states.Nearest(0.0)];
  std::vector<double> bps;
  std::vector<double> vals{zero};
  for (int i = 0; i <= m; ++i) bps.push_back(-1.0 + 2.0 * i / m);
  for (int i = 0; i < m; ++i) vals.push_back(states[pick(rng)]);
  vals.push_back(zero);
  return StepFunction(bps, vals);
}

}  // namespace

int main() {
  const FluxPtr e12 = Make(Example12Flux());
  const FluxPtr burgers = Make(BurgersFlux());
  const auto e12_env = std::make_shared<const EnvelopeFunction>(BuildPhi(*e12));
  const auto burgers_env = std::make_shared<const EnvelopeFunction>(BuildPhi(*burgers));
  const GaugeFn e12_phi = Clamped(e12_env);
  const GaugeFn burgers_phi = Clamped(burgers_env);
  Audit audit;
  std::mt19937_64 rng(20240601);

  // 1. Example-12 reproduction.
  {
    const ConvergenceStudy study =
        RunConvergenceStudy(e12, DatumSpec::Riemann(-1.0, 1.0), 1.0, 5.0, {0.8, 0.4, 0.2, 0.1});
    std::string errs;
    for (const auto& r : study.rows) errs += Fmt("%.4g ", r.l1_error);
    // Independent check of the finest error against the closed form by dense sampling.
    const ApproxFlux fe = MakeApproxFlux(e12, 0.1);
    TrackerState s = InitTracker(QuantizeInitial(DatumSpec::Riemann(-1.0, 1.0), DefaultCellCount(0.1),
                                                 fe.subdivision()), fe);
    AdvanceTo(s, 1.0);
    const StepFunction u = TakeSnapshot(s, 1.0).Solution();
    double dense = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double x = -5.0 + 10.0 * (i + 0.5) / n;
      dense += std::abs(u(x) - oracle::Example12U(x)) * 10.0 / n;
    }
    const double last = study.rows.back().l1_error;
    const bool pass = last <= 0.1 && study.monotone && std::abs(dense - last) <= 1e-3;
    Report(1, pass, "L1 errors over eps {0.8,0.4,0.2,0.1}: " + errs + Fmt("(dense oracle %.4g)", dense) +
                        (study.monotone ? ", nonincreasing" : ", NOT nonincreasing"));
  }

  // 2. Oleinik violation witnesses.
  {
    const RiemannFan fan = SolveExact(e12, -1.0, 1.0);
    struct Case {
      double lambda, eta_lo, eta_hi, xi_lo, xi_hi;
    };
    bool pass = true;
    std::string detail;
    for (const Case& c : {Case{0.0, -1.0, 1.0, 1.0, 3.0}, Case{1.0, -3.0, -1.0, -1.0, 1.0},
                          Case{0.5, 0.0, 1.0, 1.0, 3.0}}) {
      const OleinikSearch r = FindOleinikViolation(fan, 1.0, c.lambda, 400, 1e-9);
      std::size_t in_case = 0;
      for (const auto& w : r.violations) {
        in_case += w.y > c.eta_lo && w.y < c.eta_hi && w.x > c.xi_lo && w.x < c.xi_hi;
      }
      pass = pass && in_case > 0 && r.admissible_violations == 0 && r.admissible_pairs > 0;
      detail += Fmt("lambda=%g: %g in-case violations, %g mean-range pairs with %g violations; ", c.lambda,
                    static_cast<double>(in_case), static_cast<double>(r.admissible_pairs),
                    static_cast<double>(r.admissible_violations));
    }
    Report(2, pass, detail);
  }

  // 3 and 4. One-sided inequality on exact and tracker states; TV bounds on
  // random data (these runs also feed criterion 8).
  {
    OneSidedStats tracker;
    double worst_ratio = 0.0;  // worst excess in units of eps/2
    std::uint64_t seed = 1;
    auto add = [&](const OneSidedStats& st, double eps) {
      tracker.pairs += st.pairs;
      tracker.failures += st.failures;
      tracker.relaxed_failures += st.relaxed_failures;
      worst_ratio = std::max(worst_ratio, st.worst_excess / (0.5 * eps));
    };
    std::size_t exact_pairs = 0;
    std::size_t exact_fails = 0;
    const FluxPtr atomic = Make(AtomicFlux(8));
    const FluxPtr power = Make(PowerFlux(2.0, 1.0, 1e-4));
    for (const FluxPtr& f : {e12, burgers, atomic, power}) {
      for (auto [l, r] : {std::pair{-1.0, 1.0}, std::pair{1.0, -1.0}, std::pair{-0.5, 0.8}, std::pair{0.7, -0.2},
                          std::pair{0.0, 1.0}}) {
        const OneSidedStats st = CheckOneSidedExact(SolveExact(f, l, r), 1.0, 5000, seed++, 1e-9);
        exact_pairs += st.pairs;
        exact_fails += st.failures;
      }
    }
    for (const auto& name : BuiltinScenarioNames()) {
      const Scenario sc = ResolveScenario(name);
      const ApproxFlux fe = MakeApproxFlux(BuildFlux(sc.flux, sc.bound), sc.eps);
      const TrackerState s = InitTracker(QuantizeInitial(sc.datum, sc.CellCount(), fe.subdivision()), fe);
      for (double t : NonEventTimes(s, sc.times.back(), sc.times, 5)) {
        add(CheckOneSidedTracker(s, t, 4000, seed++, 1e-9), sc.eps);
      }
    }

    std::size_t checks = 0;
    std::size_t bad_plus = 0;
    std::size_t bad_total = 0;
    double min_slack = 1e300;
    for (int trial = 0; trial < 100; ++trial) {
      const double eps = trial % 2 == 0 ? 0.5 : 0.25;
      const FluxPtr flux = trial % 4 < 2 ? e12 : burgers;
      const GaugeFn& phi = trial % 4 < 2 ? e12_phi : burgers_phi;
      const ApproxFlux fe = MakeApproxFlux(flux, eps);
      std::uniform_int_distribution<int> mdist(1, 20);
      const TrackerState s = InitTracker(RandomSteps(fe.subdivision(), mdist(rng), rng), fe);
      const std::vector<double> times = NonEventTimes(s, 4.0, {0.25, 0.5, 1.0, 2.0, 4.0}, 5);
      for (double t : times) {
        const TvBoundChecks tv = CheckTvBounds(s, t);
        ++checks;
        min_slack = std::min(min_slack, tv.positive.slack);
        bad_plus += tv.positive.slack < -1e-9;
        bad_total += !tv.total.pass;
        add(CheckOneSidedTracker(s, t, 200, seed++, 1e-9), eps);
      }
      audit.Run(s, times, phi, rng);
    }

    // On tracker states the inequality holds only up to eps/2 per rarefaction
    // fan crossed; the raw count is reported alongside.
    Report(3, exact_pairs >= 100000 && exact_fails == 0 && tracker.relaxed_failures == 0,
           Fmt("exact solutions: %g pairs, %g failures; ", static_cast<double>(exact_pairs),
               static_cast<double>(exact_fails)) +
               Fmt("tracker states: %g pairs, %g failures against (x-y)/t + (fans crossed) eps/2, "
                   "%g raw failures against (x-y)/t, worst raw excess %.3g x eps/2",
                   static_cast<double>(tracker.pairs), static_cast<double>(tracker.relaxed_failures),
                   static_cast<double>(tracker.failures), worst_ratio));
    Report(4, checks == 500 && bad_plus == 0 && bad_total == 0,
           Fmt("%g checks, TV+ failures %g, TV failures %g, min TV+ slack %.4g", static_cast<double>(checks),
               static_cast<double>(bad_plus), static_cast<double>(bad_total), min_slack));
  }

  // 5. Solution bounds: Burgers tight case and Example-12 runs.
  {
    const RiemannFan fan = SolveExact(burgers, -1.0, 1.0);
    const auto identity = [](double s) { return s; };
    const SolutionBoundChecks tight =
        CheckSolutionBounds(ExactProfile(fan, 1.0, -1.0, 1.0), identity, -1.0, 1.0, 1.0, 1.0, 0.0);
    bool pass = tight.positive.value == 2.0 && tight.positive.bound == 2.0;
    std::size_t checked = 0;
    std::size_t bad = 0;
    for (const char* name : {"example12", "example12-sine"}) {
      for (double eps : {0.5, 0.2, 0.1}) {
        Scenario sc = ResolveScenario(name);
        sc.eps = eps;
        const ApproxFlux fe = MakeApproxFlux(e12, eps);
        const TrackerState s = InitTracker(QuantizeInitial(sc.datum, sc.CellCount(), fe.subdivision()), fe);
        const double m0 = static_cast<double>(s.initial_front_count);
        const std::vector<double> times = NonEventTimes(s, 2.0, {0.5, 1.0, 2.0}, 8);
        TrackerState r = s;
        for (double t : times) {
          AdvanceTo(r, t);
          const auto b = CheckSolutionBounds(TakeSnapshot(r, t).Solution(), e12_phi, sc.alpha, sc.beta, t,
                                             InitialVelocitySup(s), m0 * eps);
          ++checked;
          bad += !b.positive.pass;
        }
        audit.Run(s, times, e12_phi, rng);
      }
    }
    pass = pass && bad == 0;
    Report(5, pass,
           Fmt("Burgers TV+u on [-1,1] = %.17g, bound %.17g; Example-12 TV^Phi+ checks %g, failures %g",
               tight.positive.value, tight.positive.bound, static_cast<double>(checked),
               static_cast<double>(bad)));
  }

  // 6. Phi pipeline.
  {
    const EnvelopeFunction power = BuildPhi(PowerFlux(3.0));
    double worst_power = 0.0;
    for (int i = 0; i <= 900; ++i) {
      const double h = 0.1 + 0.001 * i;
      worst_power = std::max(worst_power, std::abs(power(h) / (h * h * h) - 0.25) / 0.25);
    }
    double worst_e12 = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double s = 0.001 * i;
      worst_e12 = std::max(worst_e12, std::abs((*e12_env)(s) - oracle::Example12Phi(s)));
    }
    bool identity = true;
    for (int i = 0; i <= 2000; ++i) {
      const double s = 0.001 * i;
      identity = identity && (*burgers_env)(s) == s;
    }
    Report(6, worst_power <= 1e-6 && worst_e12 <= 1e-9 && identity,
           Fmt("power(3) max rel |Phi/h^3 - 1/4| = %.3g; Example-12 max |Phi - oracle| = %.3g; ", worst_power,
               worst_e12) +
               (identity ? "Burgers Phi is the identity" : "Burgers Phi is NOT the identity"));
  }

  // 7. Phi-variation DP against exhaustive enumeration.
  {
    const std::vector<GaugeFn> gauges{[](double s) { return s; }, [](double s) { return s * s; },
                                      [](double s) { return oracle::Example12Phi(s); }};
    std::uniform_int_distribution<int> len(1, 12);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<double> v(static_cast<std::size_t>(len(rng)));
      for (double& x : v) x = val(rng);
      const GaugeFn& g = gauges[static_cast<std::size_t>(trial) % 3];
      for (Sign sign : {Sign::kSigned, Sign::kPositive}) {
        mismatches += TvPhi(v, g, sign).value != oracle::BruteForceVariation(v, g, sign == Sign::kPositive);
      }
    }
    const std::vector<double> doc{0.0, 1.0, 0.5, 2.0};
    const VariationReport r = TvPhi(doc, gauges[1], Sign::kSigned);
    const bool witness = r.value == 4.0 && r.chain.size() == 2 && doc[r.chain[0]] == 0.0 && doc[r.chain[1]] == 2.0;
    Report(7, mismatches == 0 && witness,
           Fmt("500 sequences x 2 signs, %g mismatches; [0,1,0.5,2] with s^2 gives %g via values {%g,%g}",
               static_cast<double>(mismatches), r.value, r.chain.empty() ? -1.0 : doc[r.chain.front()],
               r.chain.empty() ? -1.0 : doc[r.chain.back()]));
  }

  // 8. Structural invariants over every run above plus the builtin scenarios.
  {
    for (const auto& name : BuiltinScenarioNames()) {
      const Scenario sc = ResolveScenario(name);
      const FluxPtr flux = BuildFlux(sc.flux, sc.bound);
      const ApproxFlux fe = MakeApproxFlux(flux, sc.eps);
      const TrackerState s = InitTracker(QuantizeInitial(sc.datum, sc.CellCount(), fe.subdivision()), fe);
      audit.Run(s, NonEventTimes(s, sc.times.back(), sc.times, 8), flux->name() == "burgers" ? burgers_phi : e12_phi,
                rng);
      if (!RunScenario(sc).Pass()) ++audit.chain;
    }
    Report(8, audit.Clean(),
           Fmt("%g runs, %g events, %g snapshots; ", static_cast<double>(audit.runs),
               static_cast<double>(audit.events), static_cast<double>(audit.snapshots)) +
               Fmt("RR/invariant %g, non-decreasing events %g, conservation %g, b(chi)!=u %g, ",
                   static_cast<double>(audit.rr), static_cast<double>(audit.non_decreasing),
                   static_cast<double>(audit.conservation), static_cast<double>(audit.inverse)) +
               Fmt("chain-bound or scenario failures %g", static_cast<double>(audit.chain)));
  }

  // 9. Smooth refinement of a rarefaction.
  {
    const ConvexFlux power = PowerFlux(3.0);
    std::size_t cases = 0;
    std::size_t bad = 0;
    double worst = 0.0;
    for (const ConvexFlux* f : {e12.get(), &power}) {
      for (auto [l, r] : {std::pair{-1.0, 1.0}, std::pair{-0.5, 0.75}, std::pair{0.1, 0.9}}) {
        for (int n : {2, 4, 8, 16, 32}) {
          const auto [an, bn] = RefineVelocity(*f, l, r, n);
          const double d = SupDistance(bn, f->Inverse(), bn.lo(), bn.hi());
          ++cases;
          bad += !(d <= (r - l) / n);
          worst = std::max(worst, d * n / (r - l));
        }
      }
    }
    Report(9, bad == 0,
           Fmt("%g cases, %g failures, max sup|b_n - b| / ((u_r - u_l)/n) = %.4g", static_cast<double>(cases),
               static_cast<double>(bad), worst));
  }

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
