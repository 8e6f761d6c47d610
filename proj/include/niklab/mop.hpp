#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>

#include "niklab/multi_index.hpp"
#include "niklab/nikishin.hpp"

namespace niklab {
namespace mop {

/// Stacked block moment matrix on the real line: block j holds rows
/// (c^{(j)}_p, ..., c^{(j)}_{p + |n| - 1}) for p < n_j.
struct GeneralizedHankel {
  MultiIndex index;
  std::vector<Eigen::MatrixXd> blocks;
  Eigen::MatrixXd assembled;
};

/// Circle analogue; block j row i starts at subscript (n_j - |n|)/2 - i.
/// Subscripts are half-integers whenever n_j and |n| differ in parity; they
/// are evaluated through the doubled-index moment tables on the system branch.
struct GeneralizedToeplitz {
  MultiIndex index;
  std::vector<Eigen::MatrixXcd> blocks;
  Eigen::MatrixXcd assembled;
};

GeneralizedHankel hankel_matrix(const NikishinSystem& system, const MultiIndex& n);

/// Assembly from explicit moment sequences (tables[j][k] = c^{(j)}_k).
GeneralizedHankel hankel_from_moments(const std::vector<std::vector<double>>& tables,
                                      const MultiIndex& n);

GeneralizedToeplitz toeplitz_matrix(const NikishinSystem& system, const MultiIndex& n,
                                    bool allow_mixed_parity = false);

enum class Verdict { Normal, Singular, Inconclusive };

std::string to_string(Verdict verdict);

/// Invertibility decision for a moment matrix. The singular values are taken
/// after a two-sided change to orthonormalized polynomial bases on the first
/// support (exactly tracked triangular factors), which keeps genuinely
/// invertible desk-scale matrices away from the underflow cliff; `det` is the
/// determinant of the original assembled matrix recovered from that route,
/// `det_raw` the direct elimination value kept as a diagnostic.
struct NormalityVerdict {
  Complex det{0.0, 0.0};
  Complex det_raw{0.0, 0.0};
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double scaled_min = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<double> residual;  // relative orthogonality residual of the solve
};

inline constexpr double kNormalThreshold = 1e-10;
inline constexpr double kSingularThreshold = 1e-12;

NormalityVerdict normality_rl(const NikishinSystem& system, const MultiIndex& n);
NormalityVerdict normality_uc(const NikishinSystem& system, const MultiIndex& n);

/// Verdict for an explicitly assembled real matrix over the given support
/// hull (the perturbation route enters here).
NormalityVerdict assess_hankel(const GeneralizedHankel& matrix, const Interval& hull);
NormalityVerdict assess_toeplitz(const GeneralizedToeplitz& matrix, const Arc& hull);

/// Monic type II polynomial, coefficients low -> high, leading 1.
struct TypeIIPolyRL {
  MultiIndex index;
  std::vector<double> coeffs;
  double residual = 0.0;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  double eval(double x) const;
};

/// phi(z) = z^{|n|/2} + ... + kappa z^{-|n|/2} with doubled exponents
/// half_offsets[i] = -|n| + 2i; evaluation multiplies an integer Laurent part
/// by the branch square root when |n| is odd.
struct LaurentPolyUC {
  MultiIndex index;
  std::vector<int> half_offsets;
  std::vector<Complex> coeffs;
  BranchCut branch;
  double residual = 0.0;

  Complex eval(Complex z) const;
};

TypeIIPolyRL type2_poly_rl(const NikishinSystem& system, const MultiIndex& n);
LaurentPolyUC laurent_poly_uc(const NikishinSystem& system, const MultiIndex& n,
                              bool allow_mixed_parity = false);

/// c~^{(1)}_m = c^{(1)}_m + sum_j k_j c^{(2)}_{m+j}; output length is
/// mu1_moments.size() truncated to what mu2_moments supports.
std::vector<double> perturb_moments(const std::vector<double>& mu1_moments,
                                    const std::vector<double>& mu2_moments,
                                    const std::vector<double>& kcoeffs);

/// Determinants of the r = 2 moment matrix before and after the polynomial
/// perturbation of mu_1 by mu_2; requires n_1 <= n_2 - s.
std::pair<double, double> perturbation_det_check(const NikishinSystem& system,
                                                 const MultiIndex& n,
                                                 const std::vector<double>& kcoeffs);

/// Roots via companion-matrix eigenvalues, sorted by (Re, Im). For Laurent
/// polynomials the lifted ordinary polynomial z^{|n|/2} phi(z) is used, with
/// an exactly vanishing low end deflated to a single zero root.
std::vector<Complex> zeros(const TypeIIPolyRL& poly);
std::vector<Complex> zeros(const LaurentPolyUC& poly);

}  // namespace mop
}  // namespace niklab
