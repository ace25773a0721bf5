// Numerical certificates for the one-sided and BV-type estimates.
//
// Each check compares a measured quantity against a bound and records the
// slack. Checks that hold only in the limit eps -> 0 carry an explicit
// finite-resolution allowance (m0 eps) and say so in their witness data.

#ifndef WFT_VERIFY_HPP_
#define WFT_VERIFY_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wft/phi.hpp"
#include "wft/riemann.hpp"
#include "wft/tracker.hpp"

namespace wft {

inline constexpr double kDefaultTolerance = 1e-9;

struct BoundCheck {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool pass = true;
  double tolerance = kDefaultTolerance;
  // Reported-only checks never fail a run.
  bool asserted = true;
  nlohmann::ordered_json witness = nlohmann::ordered_json::object();

  static BoundCheck Make(std::string name, double value, double bound,
                         double tolerance = kDefaultTolerance, bool asserted = true);
};

nlohmann::ordered_json ToJson(const BoundCheck& check);
nlohmann::ordered_json ToJson(const VariationReport& report);
// True unless some asserted check failed.
bool AllAssertedPass(const std::vector<BoundCheck>& checks);

// Times strictly between events: midpoints of the inter-event intervals in
// (0, horizon], plus the requested times, each moved by 1e-9 if it hits an
// event. The tracker must not be advanced past `horizon` yet; a copy is run.
std::vector<double> NonEventTimes(const TrackerState& state, double horizon,
                                  const std::vector<double>& requested, std::size_t max_count);

// sup |a(u0)| over the initial values, and the initial support radius.
double InitialVelocitySup(const TrackerState& state);
double InitialSupportRadius(const TrackerState& state);

// One check per maximal run of rarefaction fronts at time t (state advanced
// to t). The variant depends on whether the neighbours are shocks: none
// (exact equality for a centred fan), right, left, or both, with
// allowances 0, eps/4, eps/4, eps/2. Throws DomainError at an event time.
std::vector<BoundCheck> CheckModifiedOleinik(const TrackerState& state, double t,
                                             double tolerance = kDefaultTolerance);

struct TvBoundChecks {
  BoundCheck positive;  // TV+ chi <= L(t)/t + m0 eps/2
  BoundCheck total;     // TV chi <= C (1 + 1/t) + m0 eps
  BoundCheck support;   // L(t) <= 2A + 2t sup|a(u0)|
};

// Requires compactly supported data (equal far states).
TvBoundChecks CheckTvBounds(const TrackerState& state, double t, double tolerance = kDefaultTolerance);

struct SolutionBoundChecks {
  BoundCheck positive;  // TV^Phi+ on [alpha, beta] <= (beta - alpha)/t + allowance
  BoundCheck total;     // TV^Phi <= 2 (sup|a(u0)| + (beta - alpha)/t) + allowance
};

SolutionBoundChecks CheckSolutionBounds(const StepFunction& u, const GaugeFn& phi, double alpha,
                                        double beta, double t, double velocity_sup,
                                        double allowance, double tolerance = kDefaultTolerance);
// Same for a function given by linear pieces (an exact solution). Between
// knots such a function is monotone, so chains over piece endpoints suffice.
VariationReport TvPhiPieces(const std::vector<LinearPiece>& pieces, const GaugeFn& phi, double alpha,
                            double beta, Sign sign);
SolutionBoundChecks CheckSolutionBounds(const std::vector<LinearPiece>& u, const GaugeFn& phi,
                                        double alpha, double beta, double t, double velocity_sup,
                                        double allowance, double tolerance = kDefaultTolerance);

struct TimeContinuityChecks {
  BoundCheck lipschitz;  // int |chi(T1) - chi(T2)| against [C(1 + 1/tau) + m0 eps]|T2 - T1|, reported
  BoundCheck orlicz;     // int Phi(|u(T1) - u(T2)|) against the same, reported
  BoundCheck chain;      // int Phi(|u(T1) - u(T2)|) <= int |chi(T1) - chi(T2)|, asserted
};

// `state` must be at time <= t1; it is copied and advanced.
TimeContinuityChecks CheckTimeContinuity(const TrackerState& state, const GaugeFn& phi, double t1,
                                         double t2, double tau,
                                         double tolerance = kDefaultTolerance);

// TV^Phi(u) <= TV(chi) on a snapshot.
BoundCheck CheckChainBound(const Snapshot& snapshot, const GaugeFn& phi,
                           double tolerance = kDefaultTolerance);

struct OleinikWitness {
  double y;
  double x;
  double lhs;  // mean_lambda(u(x)) - mean_lambda(u(y))
  double rhs;  // (x - y)/t
};

struct OleinikSearch {
  std::vector<OleinikWitness> violations;
  std::size_t pairs = 0;
  // Pairs with both speeds in the lambda-mean range, and the violations
  // among them (always zero for an exact fan).
  std::size_t admissible_pairs = 0;
  std::size_t admissible_violations = 0;
  // Pairs checked against a^-(u(x)) - a^+(u(y)) <= (x - y)/t, and failures.
  std::size_t one_sided_pairs = 0;
  std::size_t one_sided_failures = 0;
};

// Grid search over x > y in the fan's support for the plain Oleinik
// inequality with the lambda-mean velocity.
OleinikSearch FindOleinikViolation(const RiemannFan& fan, double t, double lambda,
                                   std::size_t grid = 400, double tolerance = kDefaultTolerance);

struct OneSidedStats {
  std::size_t pairs = 0;
  std::size_t failures = 0;          // against (x - y)/t
  std::size_t relaxed_failures = 0;  // against (x - y)/t + runs * eps/2
  double worst_excess = 0.0;         // max of lhs - (x - y)/t
};

// a^-(u(x)) - a^+(u(y)) <= (x - y)/t on random pairs of an exact fan.
OneSidedStats CheckOneSidedExact(const RiemannFan& fan, double t, std::size_t pairs, std::uint64_t seed,
                                 double tolerance = kDefaultTolerance);
// Same on a tracker state. Each rarefaction run between y and x may add up
// to eps/2 to the left side, so the relaxed count uses that allowance.
OneSidedStats CheckOneSidedTracker(const TrackerState& state, double t, std::size_t pairs,
                                   std::uint64_t seed, double tolerance = kDefaultTolerance);

struct ConvergenceRow {
  double eps;
  int m;
  std::size_t states;
  std::size_t initial_fronts;
  double l1_error;
  double tv_plus_chi;
  double tv_chi;
  double max_gap;
};

struct ConvergenceStudy {
  double t;
  double radius;
  std::vector<ConvergenceRow> rows;
  bool monotone;  // each error <= 1.1 x the previous one
};

// Riemann data only (the exact reference). m = 0 selects the coupled
// default ceil(eps^(-1/2)).
ConvergenceStudy RunConvergenceStudy(const FluxPtr& flux, const DatumSpec& datum, double t,
                                     double radius, const std::vector<double>& eps_list, int m = 0);

}  // namespace wft

#endif  // WFT_VERIFY_HPP_
