// Piecewise-linear and piecewise-constant functions of one variable.
//
// These are the value types shared by every module: the generalized inverse
// b of the velocity and its modulus of continuity live in MonotoneProfile,
// functions with upward jumps (the velocity itself, the raw gauge phi) in
// JumpProfile, and solution snapshots in StepFunction.

#ifndef WFT_PROFILE_HPP_
#define WFT_PROFILE_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace wft {

// Knot abscissae closer than this are merged.
inline constexpr double kKnotTolerance = 1e-14;

struct Point {
  double x;
  double y;
};

// Continuous nondecreasing piecewise-linear function on [x_0, x_n].
class MonotoneProfile {
 public:
  MonotoneProfile() = default;
  explicit MonotoneProfile(std::vector<Point> knots);

  double operator()(double x) const;
  // Evaluates with x clamped into the domain.
  double EvalClamped(double x) const;
  // One-sided slopes; at a knot these differ in general.
  double SlopeLeft(double x) const;
  double SlopeRight(double x) const;

  double lo() const { return knots_.front().x; }
  double hi() const { return knots_.back().x; }
  const std::vector<Point>& knots() const { return knots_; }
  bool empty() const { return knots_.empty(); }

 private:
  // Index i with knots_[i].x <= x < knots_[i+1].x, clamped to [0, n-2].
  std::size_t Segment(double x) const;

  std::vector<Point> knots_;
};

// sup |p - q| over [lo, hi]; exact since the difference is piecewise linear.
double SupDistance(const MonotoneProfile& p, const MonotoneProfile& q, double lo, double hi);

// Piecewise-linear function with upward jumps at knots. Between knots x_k and
// x_{k+1} it is affine from plus_k to minus_{k+1}.
class JumpProfile {
 public:
  struct Knot {
    double x;
    double minus;
    double plus;
  };

  JumpProfile() = default;
  explicit JumpProfile(std::vector<Knot> knots);

  // (left limit, right limit) at x; equal away from jumps. At the domain
  // ends the stored minus/plus values are returned.
  std::pair<double, double> Limits(double x) const;
  double Left(double x) const { return Limits(x).first; }
  double Right(double x) const { return Limits(x).second; }
  // Index of the knot at x (within kKnotTolerance), or -1.
  std::ptrdiff_t KnotIndex(double x) const;

  double lo() const { return knots_.front().x; }
  double hi() const { return knots_.back().x; }
  const std::vector<Knot>& knots() const { return knots_; }

 private:
  std::vector<Knot> knots_;
};

// Right-continuous step function: values[k] on (breakpoints[k-1], breakpoints[k]),
// with values.front() on (-inf, breakpoints[0]) and values.back() beyond the
// last breakpoint.
class StepFunction {
 public:
  StepFunction() : values_{0.0} {}
  StepFunction(std::vector<double> breakpoints, std::vector<double> values);
  static StepFunction Constant(double value) { return StepFunction({}, {value}); }

  // Value at x; the right limit at a breakpoint.
  double operator()(double x) const;
  std::size_t PieceIndex(double x) const;

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  // Same function with equal neighbouring pieces fused.
  StepFunction Merged() const;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

// Linear segment y0 -> y1 over [x0, x1].
struct LinearPiece {
  double x0;
  double x1;
  double y0;
  double y1;
};

// Integral of g(|a - b|) over [lo, hi], summed piece by piece.
double IntegrateDifference(const StepFunction& a, const StepFunction& b, double lo, double hi,
                           const std::function<double(double)>& g);
// Integral of g(|a - b|) over the whole line. Requires g(|a-b|) to vanish
// on both unbounded pieces.
double IntegrateDifference(const StepFunction& a, const StepFunction& b,
                           const std::function<double(double)>& g);

// Exact L1 distance on [lo, hi] between a step function and a function given
// by consecutive linear pieces covering [lo, hi].
double L1Distance(const StepFunction& steps, std::span<const LinearPiece> pieces, double lo,
                  double hi);

// Exact integral of |alpha + beta*(x - x0)| over [x0, x1].
double IntegrateAbsLinear(double alpha, double beta, double x0, double x1);

}  // namespace wft

#endif  // WFT_PROFILE_HPP_
