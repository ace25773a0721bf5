// Front tracking for u_t + f_eps(u)_x = 0 with piecewise-constant data.
//
// Every front moves on a straight line. Collisions of adjacent fronts are
// found by scanning neighbouring pairs and resolved by a new approximate
// Riemann solve at the collision point. Between events the solution is a
// step function with values in the subdivision, so every quantity derived
// from it (mass, variations, the modified velocity chi) is exact.

#ifndef WFT_TRACKER_HPP_
#define WFT_TRACKER_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wft/profile.hpp"
#include "wft/riemann.hpp"

namespace wft {

// Initial datum description.
struct DatumSpec {
  enum class Kind { kRiemann, kSteps, kFunction };

  Kind kind = Kind::kRiemann;
  // kRiemann: left state for x < 0, right state for x >= 0.
  double left = 0.0;
  double right = 0.0;
  // kSteps: right-continuous step function.
  std::vector<double> breakpoints;
  std::vector<double> values;
  // kFunction: one of linear, sign, sine, hat, scaled by amplitude and
  // supported in [-support, support].
  std::string function;
  double amplitude = 1.0;
  double support = 1.0;

  static DatumSpec Riemann(double left, double right);
  static DatumSpec Steps(std::vector<double> breakpoints, std::vector<double> values);
  static DatumSpec Function(std::string name, double support, double amplitude = 1.0);

  bool operator==(const DatumSpec&) const = default;
};

// Names accepted by DatumSpec::Function.
std::vector<std::string> DatumFunctionNames();

// Exact value of a sampled datum (kFunction only).
double EvalDatumFunction(const DatumSpec& datum, double x);

// Default cell count coupled to eps: ceil(eps^(-1/2)).
int DefaultCellCount(double eps);

// Step data with values in the subdivision. Step and Riemann data keep their
// breakpoints and have each value rounded to the nearest subdivision state.
// Sampled functions are averaged over the cells of the grid
// x_i = -A + i h, h = 2A/m, and the averages are rounded; outside [-A, A] the
// value is the rounded 0. Ties go to the smaller magnitude.
StepFunction QuantizeInitial(const DatumSpec& datum, int m, const Subdivision& states);

struct Front {
  double x0;  // position at time t0
  double t0;
  double speed;
  std::size_t left;  // subdivision index of the left state
  std::size_t right;
  WaveKind kind;

  double Position(double t) const { return x0 + speed * (t - t0); }
};

enum class Interaction { kSS, kRS, kSR, kCancel };
const char* ToString(Interaction kind);

struct EventRecord {
  double time;
  double x;
  std::size_t first;  // index of the left incoming front before resolution
  std::vector<Front> incoming;
  std::vector<Front> outgoing;
  Interaction classification;
};

// A pending collision between fronts `first` and `first + 1`.
struct Event {
  double time;
  double x;
  std::size_t first;
};

struct TrackerState {
  double time = 0.0;
  std::vector<Front> fronts;  // ordered by position
  std::size_t far_left = 0;   // subdivision index of the state left of all fronts
  std::optional<ApproxFlux> approx;
  std::vector<EventRecord> events;
  std::size_t initial_front_count = 0;
  StepFunction initial;
  // Cap on the number of events, from the termination argument.
  std::size_t event_budget = 0;

  const ApproxFlux& fe() const { return *approx; }
  double State(std::size_t index) const { return approx->subdivision()[index]; }
  // Subdivision index of the state right of all fronts.
  std::size_t FarRight() const { return fronts.empty() ? far_left : fronts.back().right; }
};

TrackerState InitTracker(const StepFunction& steps, const ApproxFlux& fe);

// Earliest collision at or after the current time; simultaneous collisions
// (within 1e-12) are ordered leftmost first.
std::optional<Event> NextEvent(const TrackerState& state);
// Replaces the colliding pair by the approximate solution of (u1, u3).
// Throws InvariantViolation on a rarefaction-rarefaction collision.
void ResolveEvent(TrackerState& state, const Event& event);
// Processes every event with time <= t, then sets the current time to t.
void AdvanceTo(TrackerState& state, double t);
// Times of all processed events.
std::vector<double> EventTimes(const TrackerState& state);

// u(t, x), taking the right limit at a front. Requires t in
// [state.time, next event time].
double SampleSolution(const TrackerState& state, double t, double x);
// chi(t, x): a^+(u) if the region has a shock on its left and a rarefaction
// on its right, a^-(u) in the mirrored situation, and the mean otherwise.
double SampleChi(const TrackerState& state, double t, double x);

// One constant region of a snapshot; unbounded ends use +-infinity.
struct Region {
  double x_left;
  double x_right;
  double u;
  double chi;
  std::optional<WaveKind> left_kind;
  std::optional<WaveKind> right_kind;
};

struct Snapshot {
  double t;
  std::vector<Region> regions;  // regions of positive width, left to right

  StepFunction Solution() const;
  StepFunction Chi() const;
};

Snapshot TakeSnapshot(const TrackerState& state, double t);

// Mass balance: integral of u(t) - u(0) over a window containing every
// front, minus the flux entering through the window edges. Zero up to
// rounding; returned with the scale it should be compared against.
struct MassBalance {
  double defect;
  double scale;
};
MassBalance CheckConservation(const TrackerState& state, double t);

// Verifies ordering, value chaining, admissibility and subdivision
// membership. Throws InvariantViolation.
void CheckStructure(const TrackerState& state, double t);

}  // namespace wft

#endif  // WFT_TRACKER_HPP_
