#include "wft/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wft/errors.hpp"

namespace wft {

namespace {

constexpr double kDomainSlack = 1e-12;

}  // namespace

MonotoneProfile::MonotoneProfile(std::vector<Point> knots) {
  if (knots.empty()) throw DomainError("MonotoneProfile: no knots");
  knots_.reserve(knots.size());
  for (const Point& p : knots) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw DomainError("MonotoneProfile: non-finite knot");
    }
    if (!knots_.empty()) {
      const Point& last = knots_.back();
      if (p.x < last.x - kKnotTolerance) throw DomainError("MonotoneProfile: abscissae not increasing");
      if (p.x - last.x <= kKnotTolerance) {
        knots_.back().y = std::max(last.y, p.y);
        continue;
      }
      if (p.y < last.y - 1e-12 * std::max(1.0, std::abs(last.y))) {
        throw DomainError("MonotoneProfile: values decreasing");
      }
    }
    knots_.push_back({p.x, knots_.empty() ? p.y : std::max(p.y, knots_.back().y)});
  }
}

std::size_t MonotoneProfile::Segment(double x) const {
  if (knots_.size() < 2) return 0;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                             [](double v, const Point& p) { return v < p.x; });
  std::size_t i = it == knots_.begin() ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
  return std::min(i, knots_.size() - 2);
}

double MonotoneProfile::operator()(double x) const {
  if (knots_.empty()) throw DomainError("MonotoneProfile: empty");
  const double span = std::max(1.0, hi() - lo());
  if (x < lo() - kDomainSlack * span || x > hi() + kDomainSlack * span) {
    throw DomainError("MonotoneProfile: argument outside domain");
  }
  return EvalClamped(x);
}

double MonotoneProfile::EvalClamped(double x) const {
  if (x <= lo()) return knots_.front().y;
  if (x >= hi()) return knots_.back().y;
  const std::size_t i = Segment(x);
  const Point& a = knots_[i];
  const Point& b = knots_[i + 1];
  if (x == a.x) return a.y;
  const double w = (x - a.x) / (b.x - a.x);
  return a.y + w * (b.y - a.y);
}

double MonotoneProfile::SlopeRight(double x) const {
  if (knots_.size() < 2 || x >= hi()) return 0.0;
  std::size_t i = Segment(std::max(x, lo()));
  if (x < lo()) i = 0;
  const Point& a = knots_[i];
  const Point& b = knots_[i + 1];
  return (b.y - a.y) / (b.x - a.x);
}

double MonotoneProfile::SlopeLeft(double x) const {
  if (knots_.size() < 2 || x <= lo()) return 0.0;
  if (x > hi()) return SlopeLeft(hi());
  std::size_t i = Segment(x);
  if (knots_[i].x == x && i > 0) --i;
  const Point& a = knots_[i];
  const Point& b = knots_[i + 1];
  return (b.y - a.y) / (b.x - a.x);
}

double SupDistance(const MonotoneProfile& p, const MonotoneProfile& q, double lo, double hi) {
  if (!(lo <= hi)) throw DomainError("SupDistance: empty interval");
  std::vector<double> xs{lo, hi};
  for (const Point& k : p.knots()) if (k.x > lo && k.x < hi) xs.push_back(k.x);
  for (const Point& k : q.knots()) if (k.x > lo && k.x < hi) xs.push_back(k.x);
  double sup = 0.0;
  for (double x : xs) sup = std::max(sup, std::abs(p.EvalClamped(x) - q.EvalClamped(x)));
  return sup;
}

JumpProfile::JumpProfile(std::vector<Knot> knots) {
  if (knots.empty()) throw DomainError("JumpProfile: no knots");
  for (const Knot& k : knots) {
    if (!std::isfinite(k.x) || !std::isfinite(k.minus) || !std::isfinite(k.plus)) {
      throw DomainError("JumpProfile: non-finite knot");
    }
    if (k.minus > k.plus) throw DomainError("JumpProfile: downward jump");
    if (!knots_.empty()) {
      Knot& last = knots_.back();
      if (k.x < last.x - kKnotTolerance) throw DomainError("JumpProfile: abscissae not increasing");
      if (k.x - last.x <= kKnotTolerance) {
        last.plus = std::max(last.plus, k.plus);
        continue;
      }
    }
    knots_.push_back(k);
  }
}

std::ptrdiff_t JumpProfile::KnotIndex(double x) const {
  auto it = std::lower_bound(knots_.begin(), knots_.end(), x - kKnotTolerance,
                             [](const Knot& k, double v) { return k.x < v; });
  if (it != knots_.end() && std::abs(it->x - x) <= kKnotTolerance) return it - knots_.begin();
  return -1;
}

std::pair<double, double> JumpProfile::Limits(double x) const {
  const std::ptrdiff_t k = KnotIndex(x);
  if (k >= 0) return {knots_[k].minus, knots_[k].plus};
  if (x < lo() || x > hi()) throw DomainError("JumpProfile: argument outside domain");
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                             [](double v, const Knot& k) { return v < k.x; });
  const Knot& b = *it;
  const Knot& a = *(it - 1);
  const double w = (x - a.x) / (b.x - a.x);
  const double v = a.plus + w * (b.minus - a.plus);
  return {v, v};
}

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.size() != breakpoints_.size() + 1) {
    throw DomainError("StepFunction: need one more value than breakpoints");
  }
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (breakpoints_[i] < breakpoints_[i - 1]) {
      throw DomainError("StepFunction: breakpoints not sorted");
    }
  }
}

std::size_t StepFunction::PieceIndex(double x) const {
  return static_cast<std::size_t>(
      std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x) - breakpoints_.begin());
}

double StepFunction::operator()(double x) const { return values_[PieceIndex(x)]; }

StepFunction StepFunction::Merged() const {
  std::vector<double> bp;
  std::vector<double> vals{values_.front()};
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    const double v = values_[i + 1];
    if (v == vals.back()) continue;
    // Zero-width pieces carry no measure; the later value wins.
    if (!bp.empty() && bp.back() == breakpoints_[i]) {
      vals.back() = v;
      if (vals.size() >= 2 && vals[vals.size() - 2] == v) {
        vals.pop_back();
        bp.pop_back();
      }
      continue;
    }
    bp.push_back(breakpoints_[i]);
    vals.push_back(v);
  }
  return StepFunction(std::move(bp), std::move(vals));
}

double IntegrateDifference(const StepFunction& a, const StepFunction& b, double lo, double hi,
                           const std::function<double(double)>& g) {
  if (!(lo < hi)) throw DomainError("IntegrateDifference: empty interval");
  std::vector<double> cuts{lo, hi};
  for (double x : a.breakpoints()) if (x > lo && x < hi) cuts.push_back(x);
  for (double x : b.breakpoints()) if (x > lo && x < hi) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double w = cuts[i + 1] - cuts[i];
    if (w <= 0.0) continue;
    const double mid = cuts[i] + 0.5 * w;
    total += g(std::abs(a(mid) - b(mid))) * w;
  }
  return total;
}

double IntegrateDifference(const StepFunction& a, const StepFunction& b,
                           const std::function<double(double)>& g) {
  if (g(std::abs(a.values().front() - b.values().front())) != 0.0 ||
      g(std::abs(a.values().back() - b.values().back())) != 0.0) {
    throw DomainError("IntegrateDifference: integrand does not vanish at infinity");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const StepFunction* s : {&a, &b}) {
    if (s->breakpoints().empty()) continue;
    lo = std::min(lo, s->breakpoints().front());
    hi = std::max(hi, s->breakpoints().back());
  }
  if (!(lo < hi)) return 0.0;
  return IntegrateDifference(a, b, lo, hi, g);
}

double IntegrateAbsLinear(double alpha, double beta, double x0, double x1) {
  const double w = x1 - x0;
  if (w <= 0.0) return 0.0;
  const double v0 = alpha;
  const double v1 = alpha + beta * w;
  if ((v0 >= 0.0) == (v1 >= 0.0) || v0 == 0.0 || v1 == 0.0) {
    return 0.5 * std::abs(v0 + v1) * w;
  }
  // Sign change at the root; two triangles.
  const double root = v0 / (v0 - v1) * w;
  return 0.5 * (std::abs(v0) * root + std::abs(v1) * (w - root));
}

double L1Distance(const StepFunction& steps, std::span<const LinearPiece> pieces, double lo,
                  double hi) {
  if (!(lo < hi)) throw DomainError("L1Distance: empty interval");
  double total = 0.0;
  for (const LinearPiece& p : pieces) {
    const double a = std::max(lo, p.x0);
    const double b = std::min(hi, p.x1);
    if (a >= b) continue;
    const double slope = p.x1 > p.x0 ? (p.y1 - p.y0) / (p.x1 - p.x0) : 0.0;
    std::vector<double> cuts{a, b};
    for (double x : steps.breakpoints()) if (x > a && x < b) cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double x0 = cuts[i];
      const double x1 = cuts[i + 1];
      if (x1 <= x0) continue;
      const double c = steps(0.5 * (x0 + x1));
      const double line0 = p.y0 + slope * (x0 - p.x0);
      total += IntegrateAbsLinear(line0 - c, slope, x0, x1);
    }
  }
  return total;
}

}  // namespace wft
