#include "niklab/measure.hpp"

#include <cmath>

namespace niklab {

// ---------------------------------------------------------------------------
// RealMeasure

RealMeasure RealMeasure::from_weight(const Interval& support, const WeightSpec& weight,
                                     int quad_order, int table_order) {
  support.validate();
  RealMeasure mu;
  mu.support_ = support;
  mu.weight_ = weight;
  mu.quad_ = build_quadrature(support, weight, quad_order);
  mu.node_weights_.resize(mu.quad_.nodes.size());
  for (std::size_t i = 0; i < mu.quad_.nodes.size(); ++i)
    mu.node_weights_[i] = weight.sign * mu.quad_.weights[i];
  mu.finish(table_order);
  return mu;
}

RealMeasure RealMeasure::from_nodes(const Interval& support, std::vector<double> nodes,
                                    std::vector<double> signed_weights,
                                    int table_order) {
  support.validate();
  if (nodes.size() != signed_weights.size() || nodes.empty())
    raise(ErrorCode::SizeMismatch, "from_nodes: nodes and weights must match");
  RealMeasure mu;
  mu.support_ = support;
  mu.weight_.kind = WeightKind::Uniform;
  mu.quad_.order = static_cast<int>(nodes.size());
  mu.quad_.nodes = std::move(nodes);
  mu.quad_.weights.resize(signed_weights.size());
  for (std::size_t i = 0; i < signed_weights.size(); ++i)
    mu.quad_.weights[i] = std::abs(signed_weights[i]);
  mu.node_weights_ = std::move(signed_weights);
  mu.finish(table_order);
  mu.weight_.sign = mu.sign();
  return mu;
}

RealMeasure RealMeasure::with_extra_factor(std::function<double(double)> factor,
                                           int table_order) const {
  RealMeasure mu;
  mu.support_ = support_;
  mu.weight_ = weight_;
  mu.quad_ = quad_;
  if (extra_) {
    auto prev = extra_;
    mu.extra_ = [prev, factor](double x) { return prev(x) * factor(x); };
  } else {
    mu.extra_ = factor;
  }
  mu.node_weights_.resize(quad_.nodes.size());
  for (std::size_t i = 0; i < quad_.nodes.size(); ++i)
    mu.node_weights_[i] = node_weights_[i] * factor(quad_.nodes[i]);
  mu.finish(table_order);
  return mu;
}

void RealMeasure::finish(int table_order) {
  table_.resize(static_cast<std::size_t>(table_order) + 1);
  std::vector<double> pow(quad_.nodes.size(), 1.0);
  for (int k = 0; k <= table_order; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < quad_.nodes.size(); ++i) {
      acc += node_weights_[i] * pow[i];
      pow[i] *= quad_.nodes[i];
    }
    table_[static_cast<std::size_t>(k)] = acc;
  }
  mass_ = table_[0];
  if (mass_ == 0.0)
    raise(ErrorCode::InvalidWeight, "measure must have nonzero total mass");
}

double RealMeasure::moment(int k) const {
  if (k < 0) raise(ErrorCode::OrderExceeded, "real moments need k >= 0");
  if (k < static_cast<int>(table_.size())) return table_[static_cast<std::size_t>(k)];
  if (!lazy_ok_)
    raise(ErrorCode::OrderExceeded,
          "moment order " + std::to_string(k) + " beyond the precomputed table");
  return integrate([k](double x) { return std::pow(x, k); });
}

Complex RealMeasure::m_function(int j, Complex z, double clearance) const {
  if (j < 0) raise(ErrorCode::OrderExceeded, "m_function needs j >= 0");
  if (distance_to_interval(z, support_) < clearance)
    raise(ErrorCode::TooCloseToSupport, "m_function: z too close to the support");
  Complex acc(0.0, 0.0);
  for (std::size_t i = 0; i < quad_.nodes.size(); ++i) {
    const double t = quad_.nodes[i];
    acc += node_weights_[i] * std::pow(t, j) / (t - z);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// CircleMeasure

CircleMeasure CircleMeasure::from_weight(const Arc& support, const WeightSpec& weight,
                                         int quad_order, const BranchCut& branch,
                                         int table_order) {
  support.validate();
  CircleMeasure mu;
  mu.support_ = support;
  mu.weight_ = weight;
  mu.branch_ = branch;
  mu.quad_ = build_quadrature(support, weight, quad_order);
  mu.node_weights_.resize(mu.quad_.nodes.size());
  for (std::size_t i = 0; i < mu.quad_.nodes.size(); ++i)
    mu.node_weights_[i] = Complex(weight.sign * mu.quad_.weights[i], 0.0);
  mu.finish(table_order);
  return mu;
}

CircleMeasure CircleMeasure::with_extra_factor(std::function<Complex(Complex)> factor,
                                               int table_order) const {
  CircleMeasure mu;
  mu.support_ = support_;
  mu.weight_ = weight_;
  mu.branch_ = branch_;
  mu.quad_ = quad_;
  if (extra_) {
    auto prev = extra_;
    mu.extra_ = [prev, factor](Complex z) { return prev(z) * factor(z); };
  } else {
    mu.extra_ = factor;
  }
  mu.node_weights_.resize(znodes_.size());
  for (std::size_t i = 0; i < znodes_.size(); ++i)
    mu.node_weights_[i] = node_weights_[i] * factor(znodes_[i]);
  mu.finish(table_order);
  return mu;
}

CircleMeasure CircleMeasure::with_branch(const BranchCut& branch) const {
  CircleMeasure mu(*this);
  mu.branch_ = branch;
  mu.finish(table_halfmax() / 2);
  return mu;
}

void CircleMeasure::finish(int table_order) {
  znodes_.resize(quad_.nodes.size());
  for (std::size_t i = 0; i < quad_.nodes.size(); ++i)
    znodes_[i] = std::polar(1.0, quad_.nodes[i]);
  const int halfmax = 2 * table_order;
  table_.assign(static_cast<std::size_t>(2 * halfmax) + 1, Complex(0.0, 0.0));
  // z^{m/2} at a node is e^{i m theta' / 2} with theta' the branch-normalized
  // angle, so the whole table follows from the half-step phases.
  std::vector<Complex> halfstep(znodes_.size());
  for (std::size_t i = 0; i < znodes_.size(); ++i)
    halfstep[i] = std::polar(1.0, 0.5 * branch_arg(znodes_[i], branch_));
  std::vector<Complex> pow(znodes_.size(), Complex(1.0, 0.0));
  for (int m = 0; m <= halfmax; ++m) {
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < znodes_.size(); ++i) {
      acc += node_weights_[i] * pow[i];
      pow[i] *= halfstep[i];
    }
    table_[static_cast<std::size_t>(halfmax + m)] = acc;
    if (m > 0) {
      // c_{-m/2} = conj(c_{m/2}) holds only for real node weights; brackets
      // keep tiny imaginary parts, so integrate the conjugate phase exactly.
      Complex accn(0.0, 0.0);
      for (std::size_t i = 0; i < znodes_.size(); ++i) {
        const Complex p = pow[i] / halfstep[i];
        accn += node_weights_[i] * Complex(p.real(), -p.imag());
      }
      table_[static_cast<std::size_t>(halfmax - m)] = accn;
    }
  }
  mass_ = table_[static_cast<std::size_t>(halfmax)];
  if (std::abs(mass_) == 0.0)
    raise(ErrorCode::InvalidWeight, "measure must have nonzero total mass");
}

Complex CircleMeasure::moment2(int m) const {
  const int halfmax = table_halfmax();
  if (m >= -halfmax && m <= halfmax)
    return table_[static_cast<std::size_t>(m + halfmax)];
  if (!lazy_ok_)
    raise(ErrorCode::OrderExceeded,
          "doubled moment index " + std::to_string(m) + " beyond the table");
  const BranchCut cut = branch_;
  return integrate([m, cut](Complex z) { return pow_half(z, m, cut); });
}

void CircleMeasure::require_clear(Complex z, double clearance) const {
  if (distance_to_arc(z, support_) < clearance)
    raise(ErrorCode::TooCloseToSupport, "evaluation point too close to the support");
}

Complex CircleMeasure::caratheodory(Complex z, double clearance) const {
  require_clear(z, clearance);
  Complex acc(0.0, 0.0);
  for (std::size_t i = 0; i < znodes_.size(); ++i)
    acc += node_weights_[i] * (znodes_[i] + z) / (znodes_[i] - z);
  return acc;
}

Complex CircleMeasure::m_function(Complex z, double clearance) const {
  if (z == Complex(0.0, 0.0))
    raise(ErrorCode::ZeroArgument, "m_function: z must be nonzero");
  return (mass_ - caratheodory(z, clearance)) / (2.0 * z);
}

Complex CircleMeasure::cauchy(Complex z, double clearance) const {
  require_clear(z, clearance);
  Complex acc(0.0, 0.0);
  for (std::size_t i = 0; i < znodes_.size(); ++i)
    acc += node_weights_[i] / (z - znodes_[i]);
  return acc;
}

// ---------------------------------------------------------------------------

double moment_real(const RealMeasure& mu, int k) { return mu.moment(k); }

Complex moment_circle(const CircleMeasure& mu, int k) { return mu.moment(k); }

Complex m_function_real(const RealMeasure& mu, int j, Complex z, double clearance) {
  return mu.m_function(j, z, clearance);
}

Complex caratheodory(const CircleMeasure& mu, Complex z, double clearance) {
  return mu.caratheodory(z, clearance);
}

Complex m_function_circle(const CircleMeasure& mu, Complex z, double clearance) {
  return mu.m_function(z, clearance);
}

}  // namespace niklab
