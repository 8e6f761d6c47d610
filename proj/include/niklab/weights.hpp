#pragma once

#include <vector>

#include "niklab/errors.hpp"

namespace niklab {

enum class WeightKind { Uniform, Polynomial, Cosine, Custom };

/// Density against dx on an interval, or against d(theta) on an arc.
/// The kind value must be nonnegative on the support; `sign` flips the measure.
///
///   Uniform         w(t) = 1
///   Polynomial      w(t) = sum_k coeffs[k] t^k
///   Cosine          w(t) = (1 + amplitude*cos t) / (2*pi)
///   Custom          tabulated values on a uniform grid over the support,
///                   linearly interpolated
struct WeightSpec {
  WeightKind kind = WeightKind::Uniform;
  std::vector<double> coeffs;   // Polynomial
  double amplitude = 0.0;       // Cosine, |amplitude| <= 1
  std::vector<double> values;   // Custom
  int sign = +1;

  /// Kind value at parameter t; `lo`/`hi` locate the Custom table.
  double eval(double t, double lo, double hi) const;

  void validate() const;
};

}  // namespace niklab
