#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "niklab/errors.hpp"

namespace niklab {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Closed bounded interval [lo, hi] on the real line, lo < hi.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return x >= lo && x <= hi; }

  void validate() const {
    if (!(std::isfinite(lo) && std::isfinite(hi)) || !(lo < hi))
      raise(ErrorCode::InvalidGeometry, "interval requires finite lo < hi");
  }
};

/// Arc {e^{i theta} : alpha <= theta <= beta} with 0 < beta - alpha <= 2*pi.
struct Arc {
  double alpha = 0.0;
  double beta = kTwoPi;

  double length() const { return beta - alpha; }
  double mid() const { return 0.5 * (alpha + beta); }
  bool full_circle() const { return beta - alpha >= kTwoPi - 1e-15; }

  /// Membership of an angle, modulo 2*pi.
  bool contains_angle(double theta) const {
    double d = std::fmod(theta - alpha, kTwoPi);
    if (d < 0) d += kTwoPi;
    return d <= beta - alpha + 1e-15;
  }

  void validate() const {
    if (!(std::isfinite(alpha) && std::isfinite(beta)))
      raise(ErrorCode::InvalidGeometry, "arc endpoints must be finite");
    if (!(beta - alpha > 0.0) || beta - alpha > kTwoPi + 1e-12)
      raise(ErrorCode::InvalidGeometry, "arc requires 0 < beta - alpha <= 2*pi");
  }
};

/// Branch cut direction for the square root: arg is taken in [t0, t0 + 2*pi).
struct BranchCut {
  double t0 = -3.141592653589793238462643383279;
};

/// arg(z) normalized into [t0, t0 + 2*pi).
inline double branch_arg(Complex z, const BranchCut& cut) {
  double a = std::arg(z);
  double shifted = std::fmod(a - cut.t0, kTwoPi);
  if (shifted < 0) shifted += kTwoPi;
  return cut.t0 + shifted;
}

/// |z|^{1/2} exp(i arg_{[t0,t0+2pi)}(z) / 2). Throws on z = 0.
inline Complex sqrt_branch(Complex z, const BranchCut& cut) {
  if (z == Complex(0.0, 0.0))
    raise(ErrorCode::ZeroArgument, "sqrt_branch: z must be nonzero");
  const double r = std::sqrt(std::abs(z));
  const double half = 0.5 * branch_arg(z, cut);
  return Complex(r * std::cos(half), r * std::sin(half));
}

/// z^{d/2} with the branch-consistent square root; d is the doubled exponent.
inline Complex pow_half(Complex z, int doubled_exp, const BranchCut& cut) {
  if (doubled_exp == 0) return Complex(1.0, 0.0);
  if (z == Complex(0.0, 0.0))
    raise(ErrorCode::ZeroArgument, "pow_half: z must be nonzero");
  if (doubled_exp % 2 == 0) return std::pow(z, doubled_exp / 2);
  // z^{d/2} = |z|^{d/2} exp(i d arg/2) with the same branch as sqrt_branch.
  const double r = std::pow(std::abs(z), 0.5 * doubled_exp);
  const double a = 0.5 * doubled_exp * branch_arg(z, cut);
  return Complex(r * std::cos(a), r * std::sin(a));
}

inline double interval_gap(const Interval& a, const Interval& b) {
  if (a.hi <= b.lo) return b.lo - a.hi;
  if (b.hi <= a.lo) return a.lo - b.hi;
  return 0.0;  // overlapping interiors
}

inline bool interiors_disjoint(const Interval& a, const Interval& b) {
  return a.hi <= b.lo || b.hi <= a.lo;
}

/// Angular gap between two arcs on the circle (0 when interiors overlap).
double arc_gap(const Arc& a, const Arc& b);
bool arc_interiors_disjoint(const Arc& a, const Arc& b);

/// Largest open angular gap left uncovered by the arcs; returns (start, length).
/// length == 0 means the union covers the whole circle.
std::pair<double, double> largest_uncovered_gap(const std::vector<Arc>& arcs);

/// Distance from a complex point to an interval viewed as a segment in C.
inline double distance_to_interval(Complex z, const Interval& s) {
  const double x = std::clamp(z.real(), s.lo, s.hi);
  return std::abs(z - Complex(x, 0.0));
}

/// Distance from a complex point to the arc on the unit circle.
double distance_to_arc(Complex z, const Arc& s);

}  // namespace niklab
