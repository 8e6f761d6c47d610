#pragma once

#include <vector>

#include "niklab/measure.hpp"

namespace niklab {
namespace spectral {

/// Recurrence data x p_k = p_{k+1} + b_{k+1} p_k + a_k^2 p_{k-1}, 1-indexed:
/// a[0] is a_1, b[0] is b_1. All a_k > 0 for a positive measure.
struct JacobiCoeffs {
  std::vector<double> a;
  std::vector<double> b;

  int count() const { return static_cast<int>(std::min(a.size(), b.size())); }
};

struct VerblunskyCoeffs {
  std::vector<Complex> alpha;

  int count() const { return static_cast<int>(alpha.size()); }
};

/// First N coefficient pairs from raw moments (classical moment recurrences,
/// long-double internals). Needs moments up to order 2N. Throws
/// LossOfPositivity when a computed a_k^2 fails to be positive.
JacobiCoeffs jacobi_from_moments(const std::vector<double>& moments, int N);

/// Same data by the node-level orthogonalization over the measure's rule.
/// Much deeper stable range than the raw-moment path; used by the flip and
/// stripping machinery. Normalizes the measure internally.
JacobiCoeffs jacobi_from_measure(const RealMeasure& mu, int N);

/// Drop (a_1, b_1); the spectral data of the once-stripped operator.
JacobiCoeffs strip_jacobi(const JacobiCoeffs& coeffs);

/// Moments of the probability measure with these coefficients: c_k is the
/// (0,0) entry of the k-th power of the truncated tridiagonal matrix.
/// Truncation must satisfy count >= K/2 + 1.
std::vector<double> moments_from_jacobi(const JacobiCoeffs& coeffs, int K);

/// Gauss discretization of the probability measure of the coefficients:
/// eigenvalues and squared first eigenvector components of the n x n
/// truncation. Matches the first 2n - 1 moments exactly.
struct DiscretizedMeasure {
  std::vector<double> nodes;
  std::vector<double> weights;
};
DiscretizedMeasure gauss_from_jacobi(const JacobiCoeffs& coeffs, int n);

/// | 1/m(z) - (b_1 - z - a_1^2 m^{(1)}(z)) | for the normalized measure.
/// m^{(1)} is evaluated from stripped-coefficient reconstructions: an
/// asymptotic moment series beyond twice the support radius, a discretized
/// spectral measure inside it.
double stripping_residual(const RealMeasure& mu, Complex z,
                          double clearance = kDefaultClearance);

/// alpha_0..alpha_{N-1} by the Szego recursion on moment inner products.
/// `moments` holds c_0..c_M (M >= N); c_{-k} = conj(c_k) is assumed, which
/// holds for every real measure. Throws ModulusViolation if |alpha_n| >= 1.
VerblunskyCoeffs verblunsky_from_moments(const std::vector<Complex>& moments, int N);

/// alpha_n -> -alpha_n elementwise.
VerblunskyCoeffs aleksandrov_flip(const VerblunskyCoeffs& coeffs);

/// c_0..c_K of the probability measure with these coefficients, read off the
/// powers of the truncated five-diagonal canonical unitary matrix. Needs
/// at least K + 1 coefficients.
std::vector<Complex> moments_from_verblunsky(const VerblunskyCoeffs& coeffs, int K);

/// Convolves the Taylor series of F_mu with the series built from the
/// sign-flipped recurrence data and returns the maximal deviation of the
/// product from the constant series 1, through the given order.
double reciprocal_F_check(const CircleMeasure& mu, int order);

}  // namespace spectral
}  // namespace niklab
