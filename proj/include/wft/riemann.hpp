// Riemann problems: the exact self-similar solution for a convex flux with
// discontinuous velocity, and the approximate solver on a piecewise-linear
// interpolant f_eps of the flux over an eps-adapted state subdivision.

#ifndef WFT_RIEMANN_HPP_
#define WFT_RIEMANN_HPP_

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "wft/flux.hpp"
#include "wft/profile.hpp"

namespace wft {

enum class WaveKind { kShock, kRarefaction };
const char* ToString(WaveKind kind);

struct RiemannFan {
  enum class Kind { kEmpty, kShock, kRarefaction };

  FluxPtr flux;
  double left = 0.0;
  double right = 0.0;
  Kind kind = Kind::kEmpty;
  double speed = 0.0;       // shock only
  double left_edge = 0.0;   // rarefaction: a^-(left)
  double right_edge = 0.0;  // rarefaction: a^+(right)
};

RiemannFan SolveExact(const FluxPtr& flux, double left, double right);
// Solution at x/t = xi. At a shock the right state is returned.
double EvalExact(const RiemannFan& fan, double xi);
// The exact solution at time t > 0 for a fan centred at x = center, as
// consecutive linear pieces covering [lo, hi].
std::vector<LinearPiece> ExactProfile(const RiemannFan& fan, double t, double lo, double hi,
                                      double center = 0.0);

// States c_0 = -M < ... < c_p = M with a^-(c_{i+1}) - a^+(c_i) <= eps/4.
class Subdivision {
 public:
  Subdivision(std::vector<double> points, double eps);

  const std::vector<double>& points() const { return points_; }
  double eps() const { return eps_; }
  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  // Index of the subdivision point equal to v (within 1e-12), if any.
  std::optional<std::size_t> IndexOf(double v) const;
  // Index of the nearest point; ties go to the smaller magnitude.
  std::size_t Nearest(double v) const;
  double MaxGap() const;

 private:
  std::vector<double> points_;
  double eps_;
};

Subdivision BuildSubdivision(const ConvexFlux& flux, double eps);

// Continuous piecewise-linear interpolant of f on a subdivision.
class ApproxFlux {
 public:
  ApproxFlux(FluxPtr flux, Subdivision subdivision);

  const ConvexFlux& flux() const { return *flux_; }
  const FluxPtr& flux_ptr() const { return flux_; }
  const Subdivision& subdivision() const { return subdivision_; }
  double eps() const { return subdivision_.eps(); }
  // f(c_i).
  double Value(std::size_t i) const { return values_[i]; }
  // s_i = slope on (c_{i-1}, c_i), for 1 <= i <= p.
  double CellSlope(std::size_t i) const { return slopes_[i - 1]; }
  const std::vector<double>& slopes() const { return slopes_; }
  // Rankine-Hugoniot speed between two subdivision states (i != j).
  double ChordSpeed(std::size_t i, std::size_t j) const;
  // f_eps(u) at any state.
  double Eval(double u) const;

 private:
  FluxPtr flux_;
  Subdivision subdivision_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

ApproxFlux MakeApproxFlux(const FluxPtr& flux, double eps);

// Front produced by the approximate solver; states are subdivision indices.
struct WaveFront {
  std::size_t left;
  std::size_t right;
  double speed;
  WaveKind kind;
};

// Entropy solution of the Riemann problem for f_eps: a single shock when
// left > right, one rarefaction front per subdivision cell otherwise.
std::vector<WaveFront> SolveApprox(const ApproxFlux& fe, std::size_t left, std::size_t right);
// Same with state values; throws DomainError if a value is not in the subdivision.
std::vector<WaveFront> SolveApprox(const ApproxFlux& fe, double left, double right);

// Sampling speeds for a fan spanning subdivision states k < kp.
struct TildePoints {
  std::vector<double> interior;  // mean velocity at c_i, k < i < kp
  double left_mean;              // mean velocity at c_k
  double left_plus;              // a_eps^+(c_k) = s_{k+1}
  double right_mean;             // mean velocity at c_kp
  double right_minus;            // a_eps^-(c_kp) = s_kp
  double t;

  std::vector<double> InteriorPositions() const;
};

TildePoints ComputeTildePoints(const ApproxFlux& fe, std::size_t k, std::size_t kp, double t);

// Smooth-flux approximation of a rarefaction: a_n interpolates the mean
// velocity at v_i = left + (i/n)(right - left) and b_n is its inverse, so
// sup |b_n - b| <= (right - left)/n on the fan.
std::pair<MonotoneProfile, MonotoneProfile> RefineVelocity(const ConvexFlux& flux, double left,
                                                           double right, int n);

}  // namespace wft

#endif  // WFT_RIEMANN_HPP_
