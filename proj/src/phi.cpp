#include "wft/phi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wft/errors.hpp"

namespace wft {

EnvelopeFunction::EnvelopeFunction(std::vector<Point> knots) {
  if (knots.empty() || knots.front().x != 0.0 || knots.front().y != 0.0) {
    throw DomainError("envelope must start at (0, 0)");
  }
  profile_ = MonotoneProfile(std::move(knots));
  const auto& ks = profile_.knots();
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
    const double s = (ks[i + 1].y - ks[i].y) / (ks[i + 1].x - ks[i].x);
    if (s < prev - 1e-9 * std::max(1.0, std::abs(prev))) throw DomainError("envelope is not convex");
    prev = s;
  }
}

EnvelopeFunction EnvelopeFunction::Identity(double upper) {
  if (!(upper > 0.0)) throw DomainError("identity gauge needs a positive domain");
  return EnvelopeFunction({{0.0, 0.0}, {upper, upper}});
}

double EnvelopeFunction::operator()(double s) const {
  if (profile_.empty()) throw DomainError("empty envelope");
  if (s < 0.0 || s > upper() * (1.0 + 1e-12)) {
    throw DomainError("gauge argument " + std::to_string(s) + " outside [0, " +
                      std::to_string(upper()) + "]");
  }
  return profile_.EvalClamped(s);
}

namespace {

// omega(h) together with its one-sided derivatives. omega is the upper
// envelope of the window functions h -> b(y_i + h) - b(y_i) and
// h -> b(y_i) - b(y_i - h), because for fixed h the window difference is
// piecewise linear in its left end with kinks only where an end hits a knot.
struct ModulusEval {
  double value;
  double dleft;
  double dright;
};

class ModulusEvaluator {
 public:
  explicit ModulusEvaluator(const MonotoneProfile& b) {
    for (const Point& p : b.knots()) {
      ys_.push_back(p.x);
      vs_.push_back(p.y);
    }
    for (std::size_t k = 0; k + 1 < ys_.size(); ++k) {
      slopes_.push_back((vs_[k + 1] - vs_[k]) / (ys_[k + 1] - ys_[k]));
    }
    width_ = ys_.back() - ys_.front();
    snap_ = 1e-14 * std::max(1.0, std::max(std::abs(ys_.front()), std::abs(ys_.back())));
    value_tol_ = 1e-13 * std::max(1.0, vs_.back() - vs_.front());
  }

  double width() const { return width_; }
  double value_tol() const { return value_tol_; }

  ModulusEval operator()(double h) const {
    const std::size_t n = ys_.size();
    h = std::clamp(h, 0.0, width_);
    if (n < 2) return {0.0, 0.0, 0.0};
    // Windows have either the left or the right end on a knot. Ranges of
    // consecutive knots are explored depth first; b is nondecreasing, so the
    // widest span of a range bounds all its windows and most ranges are cut.
    double best = 0.0;
    std::vector<Candidate> near;
    auto add = [&](const Candidate& c) {
      if (c.value < best - value_tol_) return;
      best = std::max(best, c.value);
      near.push_back(c);
    };
    auto bound = [&](std::size_t s, std::size_t e, bool right_end) {
      return right_end ? vs_[e - 1] - EvalB(ys_[s] - h) : EvalB(ys_[e - 1] + h) - vs_[s];
    };
    std::vector<Range> stack;
    stack.push_back({0, n, false, bound(0, n, false)});
    stack.push_back({0, n, true, bound(0, n, true)});
    while (!stack.empty()) {
      const Range r = stack.back();
      stack.pop_back();
      if (r.bound < best - value_tol_) continue;
      if (r.end - r.start > kLeaf) {
        const std::size_t mid = r.start + (r.end - r.start) / 2;
        Range lo{r.start, mid, r.right_end, bound(r.start, mid, r.right_end)};
        Range hi{mid, r.end, r.right_end, bound(mid, r.end, r.right_end)};
        if (lo.bound > hi.bound) std::swap(lo, hi);
        stack.push_back(lo);
        stack.push_back(hi);
        continue;
      }
      if (!r.right_end) {
        std::size_t j = SegmentAt(ys_[r.start] + h);
        for (std::size_t i = r.start; i < r.end; ++i) {
          const double z = ys_[i] + h;
          if (z > ys_.back() + snap_) break;
          while (j + 1 < n && ys_[j + 1] <= z + snap_) ++j;
          const Probe pr = ProbeAt(j, z);
          add({pr.value - vs_[i], pr.slope_left, pr.slope_right});
        }
      } else {
        std::size_t j = SegmentAt(ys_[r.start] - h);
        for (std::size_t i = r.start; i < r.end; ++i) {
          const double z = ys_[i] - h;
          if (z < ys_.front() - snap_) continue;
          while (j + 1 < n && ys_[j + 1] <= z + snap_) ++j;
          const Probe pr = ProbeAt(j, z);
          // Increasing h moves z to the left.
          add({vs_[i] - pr.value, pr.slope_right, pr.slope_left});
        }
      }
    }
    double dl = std::numeric_limits<double>::infinity();
    double dr = 0.0;
    for (const Candidate& c : near) {
      if (c.value < best - value_tol_) continue;
      dl = std::min(dl, c.dleft);
      dr = std::max(dr, c.dright);
    }
    if (!std::isfinite(dl)) dl = 0.0;
    return {best, dl, dr};
  }

 private:
  static constexpr std::size_t kLeaf = 16;

  struct Range {
    std::size_t start;
    std::size_t end;
    bool right_end;
    double bound;
  };
  struct Candidate {
    double value;
    double dleft;
    double dright;
  };
  struct Probe {
    double value;
    double slope_left;
    double slope_right;
  };

  double EvalB(double z) const {
    if (z <= ys_.front()) return vs_.front();
    if (z >= ys_.back()) return vs_.back();
    const std::size_t j = SegmentAt(z);
    return vs_[j] + slopes_[j] * (z - ys_[j]);
  }

  // j with ys_[j] <= z + snap < ys_[j+1], clamped to a valid segment start.
  std::size_t SegmentAt(double z) const {
    auto it = std::upper_bound(ys_.begin(), ys_.end(), z + snap_);
    if (it == ys_.begin()) return 0;
    return std::min(static_cast<std::size_t>(it - ys_.begin()) - 1, ys_.size() - 1);
  }

  // b and its one-sided slopes at z, where ys_[j] <= z (+snap) < ys_[j+1].
  Probe ProbeAt(std::size_t j, double z) const {
    const std::size_t n = ys_.size();
    const double seg_right = j + 1 < n ? slopes_[j] : 0.0;
    if (std::abs(z - ys_[j]) <= snap_) {
      const double seg_left = j > 0 ? slopes_[j - 1] : 0.0;
      return {vs_[j], seg_left, seg_right};
    }
    if (j + 1 >= n) return {vs_.back(), 0.0, 0.0};
    const double v = vs_[j] + slopes_[j] * (z - ys_[j]);
    return {v, slopes_[j], slopes_[j]};
  }

  std::vector<double> ys_;
  std::vector<double> vs_;
  std::vector<double> slopes_;
  double width_ = 0.0;
  double snap_ = 0.0;
  double value_tol_ = 0.0;
};

bool SlopesMatch(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

double ModulusAt(const MonotoneProfile& b, double h) {
  ModulusEvaluator eval(b);
  if (h < 0.0 || h > eval.width() * (1.0 + 1e-12)) throw DomainError("modulus argument outside [0, width]");
  return eval(h).value;
}

MonotoneProfile ModulusOfContinuity(const MonotoneProfile& b) {
  ModulusEvaluator omega(b);
  const double width = omega.width();
  if (!(width > 0.0)) return MonotoneProfile({{0.0, 0.0}});
  const double tol = omega.value_tol();
  const double min_width = 1e-12 * width;

  // Adaptive reconstruction of a piecewise-linear function from exact values
  // and one-sided slopes. An interval is accepted when a single line, or two
  // lines meeting at the intersection of the end tangents, reproduces the
  // function and its slopes; otherwise it is split.
  struct Interval {
    double h1;
    ModulusEval e1;
    double h2;
    ModulusEval e2;
  };
  std::vector<Point> out{{0.0, 0.0}};
  std::vector<Interval> stack{{0.0, omega(0.0), width, omega(width)}};
  stack.front().e1.value = 0.0;
  while (!stack.empty()) {
    Interval iv = stack.back();
    stack.pop_back();
    const double dh = iv.h2 - iv.h1;
    const double d1 = iv.e1.dright;
    const double d2 = iv.e2.dleft;
    if (dh <= min_width) {
      out.push_back({iv.h2, iv.e2.value});
      continue;
    }
    if (SlopesMatch(d1, d2) && std::abs(iv.e1.value + d1 * dh - iv.e2.value) <= tol) {
      const double mid = iv.h1 + 0.5 * dh;
      const ModulusEval em = omega(mid);
      if (std::abs(em.value - (iv.e1.value + 0.5 * d1 * dh)) <= tol) {
        out.push_back({iv.h2, iv.e2.value});
        continue;
      }
      stack.push_back({mid, em, iv.h2, iv.e2});
      stack.push_back({iv.h1, iv.e1, mid, em});
      continue;
    }
    double split = iv.h1 + 0.5 * dh;
    if (!SlopesMatch(d1, d2)) {
      const double hs = (iv.e2.value - iv.e1.value + d1 * iv.h1 - d2 * iv.h2) / (d1 - d2);
      if (hs > iv.h1 + 1e-3 * dh && hs < iv.h2 - 1e-3 * dh) {
        const ModulusEval es = omega(hs);
        const double line = iv.e1.value + d1 * (hs - iv.h1);
        if (std::abs(es.value - line) <= tol && SlopesMatch(es.dleft, d1) && SlopesMatch(es.dright, d2)) {
          out.push_back({hs, es.value});
          out.push_back({iv.h2, iv.e2.value});
          continue;
        }
        split = hs;
      }
    }
    const ModulusEval es = omega(split);
    stack.push_back({split, es, iv.h2, iv.e2});
    stack.push_back({iv.h1, iv.e1, split, es});
  }
  // Drop interior knots that sit on a straight line.
  std::vector<Point> pruned;
  for (const Point& p : out) {
    while (pruned.size() >= 2) {
      const Point& a = pruned[pruned.size() - 2];
      const Point& m = pruned.back();
      const double s1 = (m.y - a.y) / (m.x - a.x);
      const double s2 = (p.y - m.y) / (p.x - m.x);
      if (SlopesMatch(s1, s2) && std::abs(a.y + s1 * (p.x - a.x) - p.y) <= tol) {
        pruned.pop_back();
      } else {
        break;
      }
    }
    pruned.push_back(p);
  }
  return MonotoneProfile(std::move(pruned));
}

JumpProfile PhiRaw(const MonotoneProfile& omega) {
  const auto& ks = omega.knots();
  const double tol = 1e-13 * std::max(1.0, ks.back().y);
  std::vector<JumpProfile::Knot> out;
  std::size_t i = 0;
  while (i < ks.size()) {
    std::size_t j = i;
    while (j + 1 < ks.size() && ks[j + 1].y - ks[i].y <= tol) ++j;
    out.push_back({ks[i].y, ks[i].x, ks[j].x});
    i = j + 1;
  }
  return JumpProfile(std::move(out));
}

EnvelopeFunction LowerConvexEnvelope(const JumpProfile& phi) {
  std::vector<Point> pts;
  for (const auto& k : phi.knots()) {
    pts.push_back({k.x, k.minus});
    if (k.plus > k.minus) pts.push_back({k.x, k.plus});
  }
  // Andrew's monotone chain, lower half; points already sorted by (x, y).
  std::vector<Point> hull;
  for (const Point& p : pts) {
    if (!hull.empty() && p.x == hull.back().x) continue;  // keep the lowest value at x
    while (hull.size() >= 2) {
      const Point& a = hull[hull.size() - 2];
      const Point& b = hull.back();
      const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
      if (cross <= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }
  hull.front() = {0.0, 0.0};
  return EnvelopeFunction(std::move(hull));
}

Gauge BuildGauge(const ConvexFlux& flux) {
  Gauge g;
  g.omega = ModulusOfContinuity(flux.Inverse());
  g.phi = PhiRaw(g.omega);
  g.envelope = LowerConvexEnvelope(g.phi);
  return g;
}

EnvelopeFunction BuildPhi(const ConvexFlux& flux) { return BuildGauge(flux).envelope; }

std::string ToString(VariationMode mode) {
  switch (mode) {
    case VariationMode::kTV: return "TV";
    case VariationMode::kTVPlus: return "TV+";
    case VariationMode::kTVPhi: return "TV^Phi";
    case VariationMode::kTVPhiPlus: return "TV^Phi+";
  }
  return "?";
}

namespace {

double Increment(double from, double to, Sign sign) {
  const double d = to - from;
  return sign == Sign::kSigned ? std::abs(d) : std::max(d, 0.0);
}

}  // namespace

double EvaluateChain(std::span<const double> values, std::span<const std::size_t> chain,
                     const GaugeFn& phi, Sign sign) {
  double total = 0.0;
  for (std::size_t j = 1; j < chain.size(); ++j) {
    total += phi(Increment(values[chain[j - 1]], values[chain[j]], sign));
  }
  return total;
}

VariationReport TvPhi(std::span<const double> values, const GaugeFn& phi, Sign sign) {
  VariationReport rep;
  rep.mode = sign == Sign::kSigned ? VariationMode::kTVPhi : VariationMode::kTVPhiPlus;
  const std::size_t n = values.size();
  if (n == 0) return rep;
  // best[i]: largest chain sum ending at i; prev[i]: predecessor in that chain.
  std::vector<double> best(n, 0.0);
  std::vector<std::size_t> prev(n, n);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double cand = best[j] + phi(Increment(values[j], values[i], sign));
      if (cand > best[i]) {
        best[i] = cand;
        prev[i] = j;
      }
    }
  }
  std::size_t end = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (best[i] > best[end]) end = i;
  }
  rep.value = best[end];
  for (std::size_t k = end; k != n; k = prev[k]) rep.chain.push_back(k);
  std::reverse(rep.chain.begin(), rep.chain.end());
  return rep;
}

VariationReport Tv(std::span<const double> values, Sign sign) {
  VariationReport rep;
  rep.mode = sign == Sign::kSigned ? VariationMode::kTV : VariationMode::kTVPlus;
  for (std::size_t i = 0; i < values.size(); ++i) {
    rep.chain.push_back(i);
    if (i > 0) rep.value += Increment(values[i - 1], values[i], sign);
  }
  return rep;
}

VariationReport TvPhiInterval(const StepFunction& f, const GaugeFn& phi, double alpha, double beta,
                              Sign sign) {
  if (!(alpha < beta)) throw DomainError("variation interval needs alpha < beta");
  const std::size_t first = f.PieceIndex(alpha);
  const std::size_t last = f.PieceIndex(beta);
  std::span<const double> pieces(f.values().data() + first, last - first + 1);
  VariationReport rep = TvPhi(pieces, phi, sign);
  for (std::size_t& c : rep.chain) c += first;
  rep.interval = std::make_pair(alpha, beta);
  return rep;
}

}  // namespace wft
