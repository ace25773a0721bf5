#include "wft/riemann.hpp"

#include <algorithm>
#include <cmath>

#include "wft/errors.hpp"

namespace wft {

const char* ToString(WaveKind kind) {
  return kind == WaveKind::kShock ? "shock" : "rarefaction";
}

RiemannFan SolveExact(const FluxPtr& flux, double left, double right) {
  if (!flux) throw DomainError("SolveExact: null flux");
  const double m = flux->bound();
  if (std::abs(left) > m * (1 + 1e-12) || std::abs(right) > m * (1 + 1e-12)) {
    throw DomainError("Riemann states outside [-M, M]");
  }
  RiemannFan fan;
  fan.flux = flux;
  fan.left = left;
  fan.right = right;
  if (left > right) {
    fan.kind = RiemannFan::Kind::kShock;
    fan.speed = (flux->Eval(right) - flux->Eval(left)) / (right - left);
  } else if (left < right) {
    fan.kind = RiemannFan::Kind::kRarefaction;
    fan.left_edge = flux->VelocityLimits(left).first;
    fan.right_edge = flux->VelocityLimits(right).second;
  }
  return fan;
}

double EvalExact(const RiemannFan& fan, double xi) {
  switch (fan.kind) {
    case RiemannFan::Kind::kEmpty:
      return fan.left;
    case RiemannFan::Kind::kShock:
      return xi < fan.speed ? fan.left : fan.right;
    case RiemannFan::Kind::kRarefaction:
      if (xi < fan.left_edge) return fan.left;
      if (xi > fan.right_edge) return fan.right;
      return std::clamp(fan.flux->Inverse().EvalClamped(xi), fan.left, fan.right);
  }
  return fan.left;
}

std::vector<LinearPiece> ExactProfile(const RiemannFan& fan, double t, double lo, double hi,
                                      double center) {
  if (!(t > 0.0)) throw DomainError("ExactProfile: t must be positive");
  if (!(lo < hi)) throw DomainError("ExactProfile: empty window");
  std::vector<LinearPiece> raw;
  auto constant = [&](double a, double b, double v) { raw.push_back({a, b, v, v}); };
  switch (fan.kind) {
    case RiemannFan::Kind::kEmpty:
      constant(lo, hi, fan.left);
      break;
    case RiemannFan::Kind::kShock: {
      const double xs = center + fan.speed * t;
      constant(lo, xs, fan.left);
      constant(xs, hi, fan.right);
      break;
    }
    case RiemannFan::Kind::kRarefaction: {
      const double xa = center + fan.left_edge * t;
      const double xb = center + fan.right_edge * t;
      constant(lo, xa, fan.left);
      std::vector<Point> inner{{fan.left_edge, fan.left}};
      for (const Point& k : fan.flux->Inverse().knots()) {
        if (k.x > fan.left_edge && k.x < fan.right_edge) inner.push_back(k);
      }
      inner.push_back({fan.right_edge, fan.right});
      for (std::size_t i = 0; i + 1 < inner.size(); ++i) {
        raw.push_back({center + inner[i].x * t, center + inner[i + 1].x * t, inner[i].y, inner[i + 1].y});
      }
      constant(xb, hi, fan.right);
      break;
    }
  }
  std::vector<LinearPiece> out;
  for (const LinearPiece& p : raw) {
    const double a = std::max(lo, p.x0);
    const double b = std::min(hi, p.x1);
    if (a >= b) continue;
    const double slope = p.x1 > p.x0 ? (p.y1 - p.y0) / (p.x1 - p.x0) : 0.0;
    out.push_back({a, b, p.y0 + slope * (a - p.x0), p.y0 + slope * (b - p.x0)});
  }
  return out;
}

Subdivision::Subdivision(std::vector<double> points, double eps)
    : points_(std::move(points)), eps_(eps) {
  if (!(eps_ > 0.0)) throw DomainError("subdivision: eps must be positive");
  if (points_.size() < 2) throw DomainError("subdivision needs at least two states");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i] > points_[i - 1])) throw DomainError("subdivision not strictly increasing");
  }
}

std::optional<std::size_t> Subdivision::IndexOf(double v) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), v - 1e-12);
  if (it != points_.end() && std::abs(*it - v) <= 1e-12) {
    return static_cast<std::size_t>(it - points_.begin());
  }
  return std::nullopt;
}

std::size_t Subdivision::Nearest(double v) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), v);
  if (it == points_.begin()) return 0;
  if (it == points_.end()) return points_.size() - 1;
  const std::size_t hi = static_cast<std::size_t>(it - points_.begin());
  const std::size_t lo = hi - 1;
  const double dlo = v - points_[lo];
  const double dhi = points_[hi] - v;
  if (std::abs(dlo - dhi) <= 1e-12 * std::max(1.0, std::abs(v))) {
    return std::abs(points_[lo]) <= std::abs(points_[hi]) ? lo : hi;
  }
  return dlo < dhi ? lo : hi;
}

double Subdivision::MaxGap() const {
  double g = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i) g = std::max(g, points_[i] - points_[i - 1]);
  return g;
}

namespace {

// sup{v > c : a^-(v) <= threshold}, exact on the affine velocity pieces.
double NextState(const MonotoneVelocity& vel, double c, double threshold) {
  const auto& ks = vel.knots();
  auto it = std::upper_bound(ks.begin(), ks.end(), c,
                             [](double v, const MonotoneVelocity::Knot& k) { return v < k.u; });
  for (std::size_t k = static_cast<std::size_t>(it - ks.begin()); k < ks.size(); ++k) {
    const auto& prev = ks[k - 1];
    const auto& cur = ks[k];
    if (cur.minus > threshold) {
      // Crossing inside (max(prev.u, c), cur.u).
      if (prev.plus > threshold) return std::max(prev.u, c);
      const double v = prev.u + (threshold - prev.plus) / (cur.minus - prev.plus) * (cur.u - prev.u);
      const double snapped = std::abs(v - cur.u) <= kKnotTolerance ? cur.u : v;
      return std::clamp(snapped, std::max(prev.u, c), cur.u);
    }
    if (cur.plus > threshold) return cur.u;
  }
  return ks.back().u;
}

}  // namespace

Subdivision BuildSubdivision(const ConvexFlux& flux, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("eps must be positive");
  const MonotoneVelocity& vel = flux.velocity();
  const double m = flux.bound();
  std::vector<double> pts{-m};
  double c = -m;
  while (c < m) {
    const double threshold = vel.Limits(c).second + 0.25 * eps;
    const double next = NextState(vel, c, threshold);
    if (!(next > c)) throw InvariantViolation("subdivision made no progress (eps too small)");
    pts.push_back(next);
    c = next;
  }
  pts.back() = m;
  return Subdivision(std::move(pts), eps);
}

ApproxFlux::ApproxFlux(FluxPtr flux, Subdivision subdivision)
    : flux_(std::move(flux)), subdivision_(std::move(subdivision)) {
  if (!flux_) throw DomainError("ApproxFlux: null flux");
  const auto& c = subdivision_.points();
  values_.reserve(c.size());
  for (double v : c) values_.push_back(flux_->Eval(v));
  for (std::size_t i = 1; i < c.size(); ++i) {
    slopes_.push_back((values_[i] - values_[i - 1]) / (c[i] - c[i - 1]));
  }
  for (std::size_t i = 1; i < slopes_.size(); ++i) {
    if (!(slopes_[i] > slopes_[i - 1])) throw InvariantViolation("f_eps slopes not strictly increasing");
  }
}

double ApproxFlux::ChordSpeed(std::size_t i, std::size_t j) const {
  if (i == j) throw DomainError("ChordSpeed: equal states");
  if (i > j) std::swap(i, j);
  const auto& c = subdivision_.points();
  return (values_[j] - values_[i]) / (c[j] - c[i]);
}

double ApproxFlux::Eval(double u) const {
  const auto& c = subdivision_.points();
  if (u < c.front() - 1e-12 || u > c.back() + 1e-12) throw DomainError("f_eps outside [-M, M]");
  auto it = std::upper_bound(c.begin(), c.end(), u);
  if (it == c.end()) return values_.back();
  if (it == c.begin()) return values_.front();
  const std::size_t i = static_cast<std::size_t>(it - c.begin());
  return values_[i - 1] + slopes_[i - 1] * (u - c[i - 1]);
}

ApproxFlux MakeApproxFlux(const FluxPtr& flux, double eps) {
  return ApproxFlux(flux, BuildSubdivision(*flux, eps));
}

std::vector<WaveFront> SolveApprox(const ApproxFlux& fe, std::size_t left, std::size_t right) {
  const std::size_t n = fe.subdivision().size();
  if (left >= n || right >= n) throw DomainError("SolveApprox: state index out of range");
  std::vector<WaveFront> out;
  if (left > right) {
    out.push_back({left, right, fe.ChordSpeed(left, right), WaveKind::kShock});
  } else {
    for (std::size_t i = left + 1; i <= right; ++i) {
      out.push_back({i - 1, i, fe.CellSlope(i), WaveKind::kRarefaction});
    }
  }
  return out;
}

std::vector<WaveFront> SolveApprox(const ApproxFlux& fe, double left, double right) {
  const auto l = fe.subdivision().IndexOf(left);
  const auto r = fe.subdivision().IndexOf(right);
  if (!l || !r) throw DomainError("SolveApprox: states must belong to the subdivision");
  return SolveApprox(fe, *l, *r);
}

std::vector<double> TildePoints::InteriorPositions() const {
  std::vector<double> x;
  x.reserve(interior.size());
  for (double xi : interior) x.push_back(xi * t);
  return x;
}

TildePoints ComputeTildePoints(const ApproxFlux& fe, std::size_t k, std::size_t kp, double t) {
  if (!(t > 0.0)) throw DomainError("tilde points need t > 0");
  if (!(k < kp) || kp >= fe.subdivision().size()) throw DomainError("tilde points need a fan k < kp");
  const ConvexFlux& f = fe.flux();
  const Subdivision& b = fe.subdivision();
  TildePoints tp;
  tp.t = t;
  for (std::size_t i = k + 1; i < kp; ++i) tp.interior.push_back(f.MeanVelocity(b[i]));
  tp.left_mean = f.MeanVelocity(b[k]);
  tp.left_plus = fe.CellSlope(k + 1);
  tp.right_mean = f.MeanVelocity(b[kp]);
  tp.right_minus = fe.CellSlope(kp);
  return tp;
}

std::pair<MonotoneProfile, MonotoneProfile> RefineVelocity(const ConvexFlux& flux, double left,
                                                           double right, int n) {
  if (!(left < right)) throw DomainError("RefineVelocity needs left < right");
  if (n < 1) throw DomainError("RefineVelocity needs n >= 1");
  std::vector<Point> a_n;
  std::vector<Point> b_n;
  for (int i = 0; i <= n; ++i) {
    const double v = i == n ? right : left + (static_cast<double>(i) / n) * (right - left);
    const double a = flux.MeanVelocity(v);
    a_n.push_back({v, a});
    b_n.push_back({a, v});
  }
  return {MonotoneProfile(std::move(a_n)), MonotoneProfile(std::move(b_n))};
}

}  // namespace wft
