#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "niklab/multi_index.hpp"
#include "niklab/nikishin.hpp"

namespace niklab {
namespace detkit {

enum class Exec { Serial, Parallel };

/// Strictly ordered evaluation points: increasing reals, or angles whose
/// branch-normalized values increase.
struct OrderedTuple {
  std::vector<double> points;

  static OrderedTuple reals(std::vector<double> pts);
  static OrderedTuple angles(std::vector<double> thetas, const BranchCut& cut);
};

struct FunctionFamilyRL {
  std::vector<std::function<double(double)>> entries;
  std::vector<std::string> labels;
};

struct FunctionFamilyUC {
  std::vector<std::function<Complex(Complex)>> entries;
  std::vector<std::string> labels;
  BranchCut branch;
};

/// det(f_j(x_k)). Rows are functions, columns are points.
double chebyshev_det(const FunctionFamilyRL& family, const OrderedTuple& tuple);
Complex chebyshev_det(const FunctionFamilyUC& family, const OrderedTuple& tuple);

/// Determinant of the row-normalized sample matrix (each row divided by its
/// largest absolute entry): same phase and sign, underflow deferred.
double chebyshev_det_scaled(const FunctionFamilyRL& family, const OrderedTuple& tuple);
Complex chebyshev_det_scaled(const FunctionFamilyUC& family, const OrderedTuple& tuple);

/// { x^p rn_j(x) : p < n_j, j = 1..r } in chain order.
FunctionFamilyRL at_family_rl(const NikishinSystem& system, const MultiIndex& n);

/// { z^{-(n_j-1)/2 + i} rn_j(z) : i < n_j, j = 1..r }; half powers ride the
/// system branch.
FunctionFamilyUC at_family_uc(const NikishinSystem& system, const MultiIndex& n);

/// Atomic measure for the exact exchange-identity checks.
struct DiscreteMeasure {
  std::vector<double> locations;
  std::vector<double> masses;

  void validate() const;
  int size() const { return static_cast<int>(locations.size()); }
};

using FuncList = std::vector<std::function<double(double)>>;

/// det of [A stacked over (int f_j g_k dmu)], A of shape (N - M) x N.
double andreief_lhs(const std::vector<std::vector<double>>& a_block, const FuncList& f,
                    const FuncList& g, const DiscreteMeasure& mu);
double andreief_lhs(const std::vector<std::vector<double>>& a_block, const FuncList& f,
                    const FuncList& g, const RealMeasure& mu);

/// Exact combinatorial evaluation of the exchanged side: sum over increasing
/// atom M-tuples of det[A; g(y)] det[f(y)] times the mass product. Guarded
/// against blowup (atoms <= 12, M <= 6).
double andreief_rhs(const std::vector<std::vector<double>>& a_block, const FuncList& f,
                    const FuncList& g, const DiscreteMeasure& mu);

/// Closed product form of the polynomial/Cauchy-kernel sampling determinant:
/// (-1)^{n1 n2 + n2(n2-1)/2} prod(t_k - t_j) prod(z_k - z_j) / prod(t_k - z_j).
double cauchy_vandermonde_closed(const std::vector<double>& t,
                                 const std::vector<double>& z, int n1, int n2);

/// The same determinant assembled entry by entry (dense oracle route).
double cauchy_vandermonde_dense(const std::vector<double>& t,
                                const std::vector<double>& z, int n1, int n2);

enum class SignVerdict { ConstantSign, SignChange, Vanishing };

struct SignReport {
  SignVerdict verdict = SignVerdict::ConstantSign;
  int sign = 0;
  double min_scaled_abs = 0.0;
  int trials = 0;
};

/// Evaluates U over random ordered tuples of the first support. The index is
/// required to satisfy the almost-nonincreasing condition unless
/// `enforce_condition` is cleared for exploration.
SignReport sign_check_rl(const NikishinSystem& system, const MultiIndex& n, int trials,
                         std::mt19937_64& rng, bool enforce_condition = true,
                         Exec exec = Exec::Parallel);

struct PhaseReport {
  static constexpr int kUnresolved = -1;
  std::vector<double> phases;
  double mean_phase = 0.0;
  double max_deviation = 0.0;
  int l_mod4 = kUnresolved;
};

/// Phases of U over random ordered tuples; l_mod4 resolved when the mean
/// phase sits within 1e-3 of a quarter turn. Mixed-parity indices run in
/// exploratory mode (their deviation carries no guarantee).
PhaseReport phase_check_uc(const NikishinSystem& system, const MultiIndex& n,
                           int trials, std::mt19937_64& rng,
                           Exec exec = Exec::Parallel);

/// Random strictly increasing tuple in the support parameter.
std::vector<double> draw_sorted(std::mt19937_64& rng, double lo, double hi, int count);

}  // namespace detkit
}  // namespace niklab
