#pragma once

#include <vector>

#include "niklab/geometry.hpp"
#include "niklab/weights.hpp"

namespace niklab {

/// Nodes strictly inside the mapped support; weights positive, with the
/// magnitude of the weight function already folded in.
struct QuadratureRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1] (Golub-Welsch).
QuadratureRule gauss_legendre(int order);

/// Gauss-Legendre rule mapped to the interval, weight values folded in.
/// Exact to degree 2*order - 1 for the Uniform weight.
QuadratureRule build_quadrature(const Interval& support, const WeightSpec& weight,
                                int order);

/// Same on an arc; nodes are angles in (alpha, beta).
QuadratureRule build_quadrature(const Arc& support, const WeightSpec& weight,
                                int order);

}  // namespace niklab
