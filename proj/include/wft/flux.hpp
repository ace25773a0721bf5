// Strictly convex Lipschitz fluxes described through their velocity a = f'.
//
// The velocity is nondecreasing with possible upward jumps. It is stored in a
// normal form: knots u_0 = -M < ... < u_K = M carrying the one-sided limits
// a^-(u_k) <= a^+(u_k), with a affine and strictly increasing between knots.
// The flux is the antiderivative of this velocity, so it is exactly piecewise
// quadratic. Closed forms that are not of this shape (power laws) are
// resolved by knot refinement and carry the refinement error.

#ifndef WFT_FLUX_HPP_
#define WFT_FLUX_HPP_

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "wft/profile.hpp"

namespace wft {

class MonotoneVelocity {
 public:
  struct Knot {
    double u;
    double minus;  // a^-(u)
    double plus;   // a^+(u)
  };

  // Knots must start at -M and end at M. Throws DomainError if the result
  // is not a strictly increasing set-valued map.
  explicit MonotoneVelocity(std::vector<Knot> knots);

  double bound() const { return bound_; }
  const std::vector<Knot>& knots() const { return knots_; }
  // (a^-(u), a^+(u)); throws DomainError for |u| > M.
  std::pair<double, double> Limits(double u) const;
  // Index of the knot at u, or -1.
  std::ptrdiff_t KnotIndex(double u) const;

 private:
  std::vector<Knot> knots_;
  double bound_ = 0.0;
};

class ConvexFlux {
 public:
  // The flux is anchored by f(u_ref) = f_ref.
  ConvexFlux(MonotoneVelocity velocity, std::string name, double u_ref = 0.0, double f_ref = 0.0);

  const std::string& name() const { return name_; }
  double bound() const { return velocity_.bound(); }
  const MonotoneVelocity& velocity() const { return velocity_; }

  std::pair<double, double> VelocityLimits(double u) const { return velocity_.Limits(u); }
  // lambda a^+(u) + (1 - lambda) a^-(u).
  double VelocityMean(double u, double lambda) const;
  double MeanVelocity(double u) const { return VelocityMean(u, 0.5); }
  double Eval(double u) const;

  // Generalized inverse b of the velocity on [a^-(-M), a^+(M)]. Built once.
  const MonotoneProfile& Inverse() const { return inverse_; }

  // Whether y lies in lambda-mean range {a_lambda(u) : |u| <= M}.
  bool InMeanRange(double y, double lambda, double tol = 1e-12) const;
  // sup |a| over [lo, hi], taking both one-sided limits.
  double VelocitySup(double lo, double hi) const;

  // Max pointwise velocity error of the knot representation against the
  // closed form it was built from; zero for exact representations.
  double representation_error() const { return representation_error_; }
  void set_representation_error(double e) { representation_error_ = e; }

 private:
  MonotoneVelocity velocity_;
  std::string name_;
  std::vector<double> knot_values_;  // f at each velocity knot
  MonotoneProfile inverse_;
  double representation_error_ = 0.0;
};

using FluxPtr = std::shared_ptr<const ConvexFlux>;

// b as a profile; the same object the flux caches.
const MonotoneProfile& GeneralizedInverse(const ConvexFlux& flux);

// Builtin constructors.
ConvexFlux BurgersFlux(double bound = 1.0);
// f = |u|^(1+p)/(1+p), velocity sign(u)|u|^p. Knots are refined geometrically
// so the relative velocity error is at most rel_tol outside a small core
// around 0 of width 1e-3 M.
ConvexFlux PowerFlux(double p, double bound = 1.0, double rel_tol = 5e-7);
// f = u^2 + |u|, velocity 2u + sign(u).
ConvexFlux Example12Flux(double bound = 1.0);
// a(u) = delta u + sum_{n=1..terms} 2^-n H(u - r_n) with r_n an enumeration
// of the rationals in (-M, M) (0, 1/2, -1/2, 1/3, -1/3, 2/3, ...).
ConvexFlux AtomicFlux(int terms, double delta = 1e-6, double bound = 1.0);

// The rational sequence used by AtomicFlux, scaled to (-bound, bound).
std::vector<double> AtomicJumpLocations(int terms, double bound);

std::vector<std::string> BuiltinFluxNames();

}  // namespace wft

#endif  // WFT_FLUX_HPP_
