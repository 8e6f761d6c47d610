#include "niklab/geometry.hpp"

#include <algorithm>

namespace niklab {

namespace {

double wrap_to_2pi(double theta) {
  double d = std::fmod(theta, kTwoPi);
  if (d < 0) d += kTwoPi;
  return d;
}

}  // namespace

double arc_gap(const Arc& a, const Arc& b) {
  if (a.full_circle() || b.full_circle()) return 0.0;
  // Work with start angles in [0, 2pi) and the arcs' angular lengths.
  const double sa = wrap_to_2pi(a.alpha), la = a.length();
  const double sb = wrap_to_2pi(b.alpha), lb = b.length();
  // Gap going forward from the end of a to the start of b, and vice versa.
  double fwd = wrap_to_2pi(sb - (sa + la));
  double bwd = wrap_to_2pi(sa - (sb + lb));
  // Overlap when one start lies inside the other arc.
  auto inside = [](double start, double len, double theta) {
    return wrap_to_2pi(theta - start) < len;
  };
  if (inside(sa, la, sb) || inside(sb, lb, sa)) return 0.0;
  return std::min(fwd, bwd);
}

bool arc_interiors_disjoint(const Arc& a, const Arc& b) {
  if (a.full_circle() && b.full_circle()) return false;
  const double sa = wrap_to_2pi(a.alpha), la = a.length();
  const double sb = wrap_to_2pi(b.alpha), lb = b.length();
  auto strictly_inside = [](double start, double len, double theta) {
    double d = wrap_to_2pi(theta - start);
    return d > 1e-15 && d < len - 1e-15;
  };
  if (strictly_inside(sa, la, sb) || strictly_inside(sa, la, sb + lb)) return false;
  if (strictly_inside(sb, lb, sa) || strictly_inside(sb, lb, sa + la)) return false;
  // Identical spans also overlap.
  if (std::abs(wrap_to_2pi(sa - sb)) < 1e-15 && std::abs(la - lb) < 1e-15) return false;
  return true;
}

std::pair<double, double> largest_uncovered_gap(const std::vector<Arc>& arcs) {
  if (arcs.empty()) return {0.0, kTwoPi};
  struct Span {
    double start, end;  // end may exceed 2pi for wrap-around
  };
  std::vector<Span> spans;
  spans.reserve(arcs.size());
  for (const Arc& a : arcs) {
    if (a.full_circle()) return {0.0, 0.0};
    double s = wrap_to_2pi(a.alpha);
    spans.push_back({s, s + a.length()});
  }
  std::sort(spans.begin(), spans.end(),
            [](const Span& x, const Span& y) { return x.start < y.start; });
  // Merge on the circle: walk sorted starts, tracking coverage; the wrap-around
  // is handled by extending the first span by 2pi at the end.
  std::vector<Span> merged;
  for (const Span& s : spans) {
    if (!merged.empty() && s.start <= merged.back().end + 1e-15)
      merged.back().end = std::max(merged.back().end, s.end);
    else
      merged.push_back(s);
  }
  if (merged.size() > 1) {
    // Fold a trailing span that wraps past 2pi into the head.
    if (merged.back().end >= merged.front().start + kTwoPi - 1e-15) {
      merged.front().start = merged.back().start - kTwoPi;
      merged.front().end = std::max(merged.front().end, merged.back().end - kTwoPi);
      merged.pop_back();
    }
  }
  double best_len = -1.0, best_start = 0.0;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    const Span& cur = merged[i];
    const Span& nxt = merged[(i + 1) % merged.size()];
    double next_start = nxt.start + (i + 1 == merged.size() ? kTwoPi : 0.0);
    double len = next_start - cur.end;
    if (len > best_len) {
      best_len = len;
      best_start = cur.end;
    }
  }
  if (best_len < 0) best_len = 0.0;
  return {wrap_to_2pi(best_start), best_len};
}

double distance_to_arc(Complex z, const Arc& s) {
  const double r = std::abs(z);
  if (r == 0.0) return 1.0;
  double theta = std::arg(z);
  if (s.contains_angle(theta)) return std::abs(r - 1.0);
  const Complex za = std::polar(1.0, s.alpha);
  const Complex zb = std::polar(1.0, s.beta);
  return std::min(std::abs(z - za), std::abs(z - zb));
}

}  // namespace niklab
