#include "wft/flux.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "wft/errors.hpp"

namespace wft {

MonotoneVelocity::MonotoneVelocity(std::vector<Knot> knots) {
  if (knots.size() < 2) throw DomainError("velocity needs at least two knots");
  for (const Knot& k : knots) {
    if (!std::isfinite(k.u) || !std::isfinite(k.minus) || !std::isfinite(k.plus)) {
      throw DomainError("velocity knot is not finite");
    }
    if (k.minus > k.plus) throw DomainError("velocity jump must be upward (a- <= a+)");
    if (!knots_.empty() && k.u - knots_.back().u <= kKnotTolerance) {
      if (k.u < knots_.back().u - kKnotTolerance) throw DomainError("velocity knots not increasing");
      if (k.minus < knots_.back().minus || k.minus > knots_.back().plus) {
        throw DomainError("velocity: conflicting duplicate knot");
      }
      knots_.back().plus = std::max(knots_.back().plus, k.plus);
      continue;
    }
    knots_.push_back(k);
  }
  if (knots_.size() < 2) throw DomainError("velocity needs a nondegenerate state interval");
  bound_ = knots_.back().u;
  if (!(bound_ > 0.0) || std::abs(knots_.front().u + bound_) > 1e-12 * bound_) {
    throw DomainError("velocity knots must span a symmetric interval [-M, M]");
  }
  knots_.front().u = -bound_;
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    if (!(knots_[i].plus < knots_[i + 1].minus)) {
      throw DomainError("velocity must be strictly increasing between knots (flux has an affine piece)");
    }
  }
}

std::ptrdiff_t MonotoneVelocity::KnotIndex(double u) const {
  auto it = std::lower_bound(knots_.begin(), knots_.end(), u - kKnotTolerance,
                             [](const Knot& k, double v) { return k.u < v; });
  if (it != knots_.end() && std::abs(it->u - u) <= kKnotTolerance) return it - knots_.begin();
  return -1;
}

std::pair<double, double> MonotoneVelocity::Limits(double u) const {
  if (!(std::abs(u) <= bound_ * (1.0 + 1e-12))) {
    throw DomainError("state " + std::to_string(u) + " outside [-M, M]");
  }
  const std::ptrdiff_t k = KnotIndex(u);
  if (k >= 0) return {knots_[k].minus, knots_[k].plus};
  auto it = std::upper_bound(knots_.begin(), knots_.end(), u,
                             [](double v, const Knot& kn) { return v < kn.u; });
  const Knot& b = *it;
  const Knot& a = *(it - 1);
  const double v = a.plus + (u - a.u) / (b.u - a.u) * (b.minus - a.plus);
  return {v, v};
}

namespace {

// Integral of the velocity over [knot i, u] for u in segment i.
double PartialIntegral(const MonotoneVelocity::Knot& a, const MonotoneVelocity::Knot& b, double u) {
  const double d = u - a.u;
  const double slope = (b.minus - a.plus) / (b.u - a.u);
  return d * a.plus + 0.5 * slope * d * d;
}

MonotoneProfile BuildInverse(const MonotoneVelocity& v) {
  std::vector<Point> pts;
  pts.reserve(2 * v.knots().size());
  for (const auto& k : v.knots()) {
    pts.push_back({k.minus, k.u});
    if (k.plus > k.minus) pts.push_back({k.plus, k.u});
  }
  return MonotoneProfile(std::move(pts));
}

}  // namespace

ConvexFlux::ConvexFlux(MonotoneVelocity velocity, std::string name, double u_ref, double f_ref)
    : velocity_(std::move(velocity)), name_(std::move(name)) {
  const auto& ks = velocity_.knots();
  if (std::abs(u_ref) > velocity_.bound()) throw DomainError("flux anchor outside [-M, M]");
  knot_values_.assign(ks.size(), 0.0);
  for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
    knot_values_[i + 1] = knot_values_[i] + 0.5 * (ks[i].plus + ks[i + 1].minus) * (ks[i + 1].u - ks[i].u);
  }
  // Shift so that f(u_ref) = f_ref.
  const double raw = Eval(u_ref);
  for (double& f : knot_values_) f += f_ref - raw;
  inverse_ = BuildInverse(velocity_);
}

double ConvexFlux::VelocityMean(double u, double lambda) const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("mean weight must lie in [0, 1]");
  const auto [am, ap] = velocity_.Limits(u);
  return lambda * ap + (1.0 - lambda) * am;
}

double ConvexFlux::Eval(double u) const {
  const auto& ks = velocity_.knots();
  if (!(std::abs(u) <= bound() * (1.0 + 1e-12))) throw DomainError("flux evaluated outside [-M, M]");
  const std::ptrdiff_t k = velocity_.KnotIndex(u);
  if (k >= 0) return knot_values_[k];
  auto it = std::upper_bound(ks.begin(), ks.end(), u,
                             [](double v, const MonotoneVelocity::Knot& kn) { return v < kn.u; });
  const std::size_t i = static_cast<std::size_t>(it - ks.begin()) - 1;
  return knot_values_[i] + PartialIntegral(ks[i], ks[i + 1], u);
}

bool ConvexFlux::InMeanRange(double y, double lambda, double tol) const {
  const MonotoneProfile& b = inverse_;
  if (y < b.lo() - tol || y > b.hi() + tol) return false;
  const double u = b.EvalClamped(y);
  return std::abs(VelocityMean(u, lambda) - y) <= tol;
}

double ConvexFlux::VelocitySup(double lo, double hi) const {
  if (lo > hi) std::swap(lo, hi);
  const auto [lm, lp] = velocity_.Limits(lo);
  const auto [hm, hp] = velocity_.Limits(hi);
  // The velocity is monotone, so extremes sit at the interval ends.
  return std::max({std::abs(lm), std::abs(lp), std::abs(hm), std::abs(hp)});
}

const MonotoneProfile& GeneralizedInverse(const ConvexFlux& flux) { return flux.Inverse(); }

ConvexFlux BurgersFlux(double bound) {
  if (!(bound > 0.0)) throw DomainError("burgers: M must be positive");
  return ConvexFlux(MonotoneVelocity({{-bound, -bound, -bound}, {0.0, 0.0, 0.0}, {bound, bound, bound}}),
                    "burgers");
}

namespace {

// Largest relative error of the chord of u^p over [u, r u], scale free.
double ChordRelativeError(double p, double r) {
  double worst = 0.0;
  for (int i = 1; i < 64; ++i) {
    const double th = i / 64.0;
    const double x = 1.0 + th * (r - 1.0);
    const double chord = (1.0 - th) + th * std::pow(r, p);
    worst = std::max(worst, chord / std::pow(x, p) - 1.0);
  }
  return worst;
}

}  // namespace

ConvexFlux PowerFlux(double p, double bound, double rel_tol) {
  if (!(p >= 1.0)) throw DomainError("power: exponent p must be >= 1");
  if (!(bound > 0.0)) throw DomainError("power: M must be positive");
  if (!(rel_tol > 0.0)) throw DomainError("power: tolerance must be positive");
  char buf[64];
  std::snprintf(buf, sizeof buf, "power(%g)", p);
  const std::string name = buf;
  auto vel = [p](double u) { return std::copysign(std::pow(std::abs(u), p), u); };
  if (p == 1.0) {
    ConvexFlux f = BurgersFlux(bound);
    return ConvexFlux(f.velocity(), name);
  }
  // Ratio r with chord error rel_tol, by bisection on a monotone function.
  double lo = 1.0;
  double hi = 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ChordRelativeError(p, mid) > rel_tol ? hi : lo) = mid;
  }
  const double ratio = lo;
  const double core = 1e-3 * bound;
  std::vector<double> positive;
  for (double u = bound; u > core; u /= ratio) positive.push_back(u);
  const int core_cells = 16;
  const double smallest = positive.back();
  for (int i = core_cells - 1; i >= 1; --i) positive.push_back(smallest * i / core_cells);
  std::vector<double> us;
  us.reserve(2 * positive.size() + 1);
  for (double u : positive) us.push_back(-u);
  us.push_back(0.0);
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) us.push_back(*it);
  std::vector<MonotoneVelocity::Knot> knots;
  knots.reserve(us.size());
  for (double u : us) {
    const double a = vel(u);
    knots.push_back({u, a, a});
  }
  ConvexFlux flux(MonotoneVelocity(std::move(knots)), name);
  double err = 0.0;
  const auto& ks = flux.velocity().knots();
  for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
    const double mid = 0.5 * (ks[i].u + ks[i + 1].u);
    err = std::max(err, std::abs(flux.VelocityLimits(mid).first - vel(mid)));
  }
  flux.set_representation_error(err);
  return flux;
}

ConvexFlux Example12Flux(double bound) {
  if (!(bound > 0.0)) throw DomainError("example12: M must be positive");
  const double edge = 2.0 * bound + 1.0;
  return ConvexFlux(MonotoneVelocity({{-bound, -edge, -edge}, {0.0, -1.0, 1.0}, {bound, edge, edge}}),
                    "example12");
}

std::vector<double> AtomicJumpLocations(int terms, double bound) {
  std::vector<double> r;
  if (terms <= 0) return r;
  r.push_back(0.0);
  for (int q = 2; static_cast<int>(r.size()) < terms; ++q) {
    for (int p = 1; p < q && static_cast<int>(r.size()) < terms; ++p) {
      if (std::gcd(p, q) != 1) continue;
      r.push_back(bound * p / q);
      if (static_cast<int>(r.size()) < terms) r.push_back(-bound * p / q);
    }
  }
  return r;
}

ConvexFlux AtomicFlux(int terms, double delta, double bound) {
  if (terms < 0) throw DomainError("atomic: number of terms must be >= 0");
  if (!(delta > 0.0)) throw DomainError("atomic: ramp delta must be positive (strict convexity)");
  if (!(bound > 0.0)) throw DomainError("atomic: M must be positive");
  const std::vector<double> loc = AtomicJumpLocations(terms, bound);
  std::vector<std::pair<double, double>> jumps;  // (location, size)
  for (std::size_t n = 0; n < loc.size(); ++n) jumps.push_back({loc[n], std::ldexp(1.0, -static_cast<int>(n + 1))});
  std::sort(jumps.begin(), jumps.end());
  std::vector<MonotoneVelocity::Knot> knots;
  knots.push_back({-bound, -delta * bound, -delta * bound});
  double below = 0.0;  // sum of jump sizes strictly left of the current point
  for (const auto& [u, size] : jumps) {
    const double am = delta * u + below;
    knots.push_back({u, am, am + size});
    below += size;
  }
  knots.push_back({bound, delta * bound + below, delta * bound + below});
  return ConvexFlux(MonotoneVelocity(std::move(knots)),
                    "atomic(" + std::to_string(terms) + ")");
}

std::vector<std::string> BuiltinFluxNames() {
  return {"burgers", "power(p)", "example12", "atomic(N, delta)"};
}

}  // namespace wft
