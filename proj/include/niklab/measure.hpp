#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "niklab/geometry.hpp"
#include "niklab/quadrature.hpp"
#include "niklab/weights.hpp"

namespace niklab {

inline constexpr double kDefaultClearance = 1e-8;

/// Sign-definite measure on an interval, dmu = sign * w(x) * extra(x) dx,
/// carried operationally as a fixed node/weight set. Moments are tabulated
/// eagerly; reads beyond the table recompute on the fly when `lazy_ok` is set
/// and throw OrderExceeded otherwise. Immutable after construction.
class RealMeasure {
 public:
  static RealMeasure from_weight(const Interval& support, const WeightSpec& weight,
                                 int quad_order, int table_order = 64);

  /// Measure given directly by nodes and signed weights (used for discrete
  /// spectral reconstructions). Nodes need not be distinct from endpoints.
  static RealMeasure from_nodes(const Interval& support, std::vector<double> nodes,
                                std::vector<double> signed_weights,
                                int table_order = 64);

  /// New measure with the node weights multiplied by `factor` and the factor
  /// composed onto the existing one.
  RealMeasure with_extra_factor(std::function<double(double)> factor,
                                int table_order = 64) const;

  const Interval& support() const { return support_; }
  const WeightSpec& weight() const { return weight_; }
  const QuadratureRule& quad() const { return quad_; }
  const std::vector<double>& nodes() const { return quad_.nodes; }
  const std::vector<double>& node_weights() const { return node_weights_; }
  const std::function<double(double)>& extra_factor() const { return extra_; }

  double mass() const { return mass_; }
  int sign() const { return mass_ >= 0.0 ? +1 : -1; }
  int table_order() const { return static_cast<int>(table_.size()) - 1; }
  bool lazy_ok() const { return lazy_ok_; }
  void set_lazy(bool lazy) { lazy_ok_ = lazy; }

  /// c_k = int x^k dmu(x).
  double moment(int k) const;

  template <class F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < quad_.nodes.size(); ++i)
      acc += node_weights_[i] * f(quad_.nodes[i]);
    return acc;
  }

  /// int t^j dmu(t) / (t - z); requires dist(z, support) >= clearance.
  Complex m_function(int j, Complex z, double clearance = kDefaultClearance) const;

 private:
  RealMeasure() = default;
  void finish(int table_order);

  Interval support_;
  WeightSpec weight_;
  QuadratureRule quad_;
  std::function<double(double)> extra_;
  std::vector<double> node_weights_;
  std::vector<double> table_;
  double mass_ = 0.0;
  bool lazy_ok_ = true;
};

/// Sign-definite measure on an arc, dmu = sign * w(theta) * extra(e^{i theta})
/// d(theta). Moments are stored with doubled indices: table entry m holds
/// c_{m/2} = int z^{m/2} dmu, with z^{1/2} taken on the measure's branch, so
/// half-integer moments are first-class. Immutable after construction.
class CircleMeasure {
 public:
  static CircleMeasure from_weight(const Arc& support, const WeightSpec& weight,
                                   int quad_order, const BranchCut& branch,
                                   int table_order = 48);

  CircleMeasure with_extra_factor(std::function<Complex(Complex)> factor,
                                  int table_order = 48) const;

  /// Same measure with the half-integer moment table rebuilt on another branch.
  CircleMeasure with_branch(const BranchCut& branch) const;

  const Arc& support() const { return support_; }
  const WeightSpec& weight() const { return weight_; }
  const QuadratureRule& quad() const { return quad_; }
  const BranchCut& branch() const { return branch_; }
  const std::vector<double>& angles() const { return quad_.nodes; }
  const std::vector<Complex>& znodes() const { return znodes_; }
  const std::vector<Complex>& node_weights() const { return node_weights_; }
  const std::function<Complex(Complex)>& extra_factor() const { return extra_; }

  Complex mass() const { return mass_; }
  double mass_real() const { return mass_.real(); }
  int sign() const { return mass_.real() >= 0.0 ? +1 : -1; }
  /// Largest doubled index stored in the table.
  int table_halfmax() const { return (static_cast<int>(table_.size()) - 1) / 2; }
  bool lazy_ok() const { return lazy_ok_; }
  void set_lazy(bool lazy) { lazy_ok_ = lazy; }

  /// c_k = int z^k dmu(z), integer k (either sign).
  Complex moment(int k) const { return moment2(2 * k); }

  /// c_{m/2} = int z^{m/2} dmu(z) with the doubled index m.
  Complex moment2(int m) const;

  template <class F>
  Complex integrate(F&& f) const {
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < znodes_.size(); ++i)
      acc += node_weights_[i] * f(znodes_[i]);
    return acc;
  }

  /// F(z) = int (w + z)/(w - z) dmu(w); requires dist(z, support) >= clearance.
  Complex caratheodory(Complex z, double clearance = kDefaultClearance) const;

  /// (mass - F(z)) / (2z), which equals int dmu(w)/(z - w); z != 0.
  Complex m_function(Complex z, double clearance = kDefaultClearance) const;

  /// Direct quadrature of int dmu(w)/(z - w) (cross-check path).
  Complex cauchy(Complex z, double clearance = kDefaultClearance) const;

 private:
  CircleMeasure() = default;
  void finish(int table_order);
  void require_clear(Complex z, double clearance) const;

  Arc support_;
  WeightSpec weight_;
  QuadratureRule quad_;
  BranchCut branch_;
  std::function<Complex(Complex)> extra_;
  std::vector<Complex> znodes_;
  std::vector<Complex> node_weights_;
  std::vector<Complex> table_;  // doubled indices -halfmax..halfmax
  Complex mass_{0.0, 0.0};
  bool lazy_ok_ = true;
};

// Free functions with the laboratory's operation names.
double moment_real(const RealMeasure& mu, int k);
Complex moment_circle(const CircleMeasure& mu, int k);
Complex m_function_real(const RealMeasure& mu, int j, Complex z,
                        double clearance = kDefaultClearance);
Complex caratheodory(const CircleMeasure& mu, Complex z,
                     double clearance = kDefaultClearance);
Complex m_function_circle(const CircleMeasure& mu, Complex z,
                          double clearance = kDefaultClearance);

}  // namespace niklab
