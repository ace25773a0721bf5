// The regularity gauge Phi and generalized variations.
//
// Phi is built from the generalized inverse b of the velocity in three steps:
// the modulus of continuity omega[b], its generalized inverse phi, and the
// lower convex envelope of phi. For finite sequences the Phi-variation is a
// supremum over subsequences ("chains"); convexity of Phi makes coarse chains
// beat fine ones on oscillating data, so it is optimized by dynamic
// programming rather than summed over neighbours.

#ifndef WFT_PHI_HPP_
#define WFT_PHI_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wft/flux.hpp"
#include "wft/profile.hpp"

namespace wft {

// Convex nondecreasing piecewise-linear gauge on [0, upper] with Phi(0) = 0.
class EnvelopeFunction {
 public:
  EnvelopeFunction() = default;
  explicit EnvelopeFunction(std::vector<Point> knots);
  static EnvelopeFunction Identity(double upper);

  // Throws DomainError outside [0, upper].
  double operator()(double s) const;
  double upper() const { return profile_.hi(); }
  const MonotoneProfile& profile() const { return profile_; }

 private:
  MonotoneProfile profile_;
};

// Exact omega[b](h) = sup_x (b(x + h) - b(x)) for h in [0, width of domain].
double ModulusAt(const MonotoneProfile& b, double h);
// omega[b] as a profile on [0, b.hi() - b.lo()].
MonotoneProfile ModulusOfContinuity(const MonotoneProfile& b);
// phi(y) = inf{h : y <= omega(h)}; upward jumps where omega has plateaus.
JumpProfile PhiRaw(const MonotoneProfile& omega);
// Lower convex envelope of the closure of the graph of phi.
EnvelopeFunction LowerConvexEnvelope(const JumpProfile& phi);

struct Gauge {
  MonotoneProfile omega;
  JumpProfile phi;
  EnvelopeFunction envelope;
};

Gauge BuildGauge(const ConvexFlux& flux);
EnvelopeFunction BuildPhi(const ConvexFlux& flux);

enum class Sign { kSigned, kPositive };

enum class VariationMode { kTV, kTVPlus, kTVPhi, kTVPhiPlus };
std::string ToString(VariationMode mode);

struct VariationReport {
  VariationMode mode = VariationMode::kTV;
  double value = 0.0;
  std::vector<std::size_t> chain;  // indices into the evaluated sequence
  std::optional<std::pair<double, double>> interval;
  std::optional<double> bound;
  std::optional<double> slack;

  void SetBound(double b) {
    bound = b;
    slack = b - value;
  }
};

using GaugeFn = std::function<double(double)>;

// Sup over chains i_1 < ... < i_k of sum Phi(|v_{i_{j+1}} - v_{i_j}|) (signed)
// or sum Phi((v_{i_{j+1}} - v_{i_j})^+) (positive). O(n^2).
VariationReport TvPhi(std::span<const double> values, const GaugeFn& phi, Sign sign);
// Classical TV / TV+, i.e. TvPhi with the identity gauge.
VariationReport Tv(std::span<const double> values, Sign sign);
// Re-evaluates a chain; left-to-right summation, as in TvPhi.
double EvaluateChain(std::span<const double> values, std::span<const std::size_t> chain,
                     const GaugeFn& phi, Sign sign);

// Phi-variation of a step function over [alpha, beta]: the sup over
// subdivisions reduces to chains of the pieces met by [alpha, beta].
VariationReport TvPhiInterval(const StepFunction& f, const GaugeFn& phi, double alpha, double beta,
                              Sign sign);

}  // namespace wft

#endif  // WFT_PHI_HPP_
