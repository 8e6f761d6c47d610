#include "niklab/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace niklab {

QuadratureRule gauss_legendre(int order) {
  if (order < 1) raise(ErrorCode::InvalidGeometry, "quadrature order must be >= 1");
  QuadratureRule rule;
  rule.order = order;
  if (order == 1) {
    rule.nodes = {0.0};
    rule.weights = {2.0};
    return rule;
  }
  // Golub-Welsch: eigen-decompose the Jacobi matrix of the Legendre weight.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double off = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k - 1, k) = off;
    jacobi(k, k - 1) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    rule.nodes[i] = eig.eigenvalues()(i);
    const double first = eig.eigenvectors()(0, i);
    rule.weights[i] = 2.0 * first * first;
  }
  return rule;
}

namespace {

QuadratureRule mapped_rule(double lo, double hi, const WeightSpec& weight, int order) {
  weight.validate();
  if (weight.kind == WeightKind::Custom &&
      static_cast<int>(weight.values.size()) < order)
    raise(ErrorCode::UnsupportedWeight,
          "custom weight table shorter than the quadrature order");
  QuadratureRule base = gauss_legendre(order);
  QuadratureRule rule;
  rule.order = order;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  for (int i = 0; i < order; ++i) {
    const double x = mid + half * base.nodes[i];
    const double w = weight.eval(x, lo, hi);
    if (w < 0.0)
      raise(ErrorCode::InvalidWeight, "weight must be sign-definite on its support");
    rule.nodes[i] = x;
    rule.weights[i] = half * base.weights[i] * w;
  }
  return rule;
}

}  // namespace

QuadratureRule build_quadrature(const Interval& support, const WeightSpec& weight,
                                int order) {
  support.validate();
  return mapped_rule(support.lo, support.hi, weight, order);
}

QuadratureRule build_quadrature(const Arc& support, const WeightSpec& weight,
                                int order) {
  support.validate();
  return mapped_rule(support.alpha, support.beta, weight, order);
}

}  // namespace niklab
