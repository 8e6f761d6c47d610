#include "niklab/spectral.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace niklab {
namespace spectral {

JacobiCoeffs jacobi_from_moments(const std::vector<double>& moments, int N) {
  if (N < 1) raise(ErrorCode::OrderExceeded, "need N >= 1");
  if (static_cast<int>(moments.size()) < 2 * N + 1)
    raise(ErrorCode::OrderExceeded,
          "jacobi_from_moments needs moments up to order 2N");
  if (moments[0] == 0.0)
    raise(ErrorCode::LossOfPositivity, "zero total mass");

  // Classical moment recurrence with a sliding sigma table. Long double
  // buys a few digits against the notorious Hankel conditioning.
  const int width = 2 * N + 1;
  std::vector<long double> nu(moments.begin(), moments.begin() + width);
  for (auto& v : nu) v /= moments[0];

  std::vector<long double> alpha(N), beta(N + 1);
  std::vector<long double> sig_prev(width, 0.0L), sig_cur(nu);
  alpha[0] = nu[1];
  beta[0] = 1.0L;
  std::vector<long double> a2(N), b(N);
  b[0] = static_cast<double>(alpha[0]);
  for (int k = 1; k <= N; ++k) {
    std::vector<long double> sig_next(width, 0.0L);
    for (int l = k; l <= 2 * N - k; ++l) {
      sig_next[l] = sig_cur[l + 1] - alpha[k - 1] * sig_cur[l] -
                    beta[k - 1] * sig_prev[l];
    }
    beta[k] = sig_next[k] / sig_cur[k - 1];
    if (!(beta[k] > 0.0L))
      raise(ErrorCode::LossOfPositivity,
            "a_" + std::to_string(k) + "^2 <= 0; moments not positive to this depth");
    a2[k - 1] = beta[k];
    if (k < N) {
      alpha[k] = sig_next[k + 1] / sig_next[k] - sig_cur[k] / sig_cur[k - 1];
      b[k] = static_cast<double>(alpha[k]);
    }
    sig_prev.swap(sig_cur);
    sig_cur.swap(sig_next);
  }

  JacobiCoeffs out;
  out.a.resize(N);
  out.b.resize(N);
  for (int k = 0; k < N; ++k) {
    out.a[k] = std::sqrt(static_cast<double>(a2[k]));
    out.b[k] = static_cast<double>(b[k]);
  }
  return out;
}

JacobiCoeffs jacobi_from_measure(const RealMeasure& mu, int N) {
  const auto& x = mu.nodes();
  const int m = static_cast<int>(x.size());
  if (N < 1 || N > m / 2)
    raise(ErrorCode::OrderExceeded, "depth too large for the quadrature rule");
  const double mass = mu.mass();
  std::vector<double> v(mu.node_weights());
  for (auto& w : v) w /= mass;  // probability weights; positive for a
                                // sign-definite measure

  std::vector<double> q_prev(m, 0.0), q(m, 1.0), r(m);
  JacobiCoeffs out;
  out.a.reserve(N);
  out.b.reserve(N);
  double a_prev = 0.0;
  for (int k = 0; k < N; ++k) {
    double bk = 0.0;
    for (int i = 0; i < m; ++i) bk += v[i] * x[i] * q[i] * q[i];
    out.b.push_back(bk);
    double norm2 = 0.0;
    for (int i = 0; i < m; ++i) {
      r[i] = x[i] * q[i] - bk * q[i] - a_prev * q_prev[i];
      norm2 += v[i] * r[i] * r[i];
    }
    if (!(norm2 > 0.0))
      raise(ErrorCode::LossOfPositivity, "orthogonalization broke down");
    const double ak = std::sqrt(norm2);
    out.a.push_back(ak);
    for (int i = 0; i < m; ++i) {
      q_prev[i] = q[i];
      q[i] = r[i] / ak;
    }
    a_prev = ak;
  }
  return out;
}

JacobiCoeffs strip_jacobi(const JacobiCoeffs& coeffs) {
  if (coeffs.count() < 2)
    raise(ErrorCode::TooShort, "stripping needs at least two coefficient pairs");
  JacobiCoeffs out;
  out.a.assign(coeffs.a.begin() + 1, coeffs.a.end());
  out.b.assign(coeffs.b.begin() + 1, coeffs.b.end());
  return out;
}

std::vector<double> moments_from_jacobi(const JacobiCoeffs& coeffs, int K) {
  if (K < 0) raise(ErrorCode::OrderExceeded, "K must be >= 0");
  const int need = K / 2 + 1;
  const int n = coeffs.count();
  if (n < need)
    raise(ErrorCode::TruncationTooSmall,
          "truncation size " + std::to_string(n) + " < K/2 + 1");
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    jac(i, i) = coeffs.b[static_cast<std::size_t>(i)];
    if (i + 1 < n) {
      jac(i, i + 1) = coeffs.a[static_cast<std::size_t>(i)];
      jac(i + 1, i) = coeffs.a[static_cast<std::size_t>(i)];
    }
  }
  std::vector<double> out(static_cast<std::size_t>(K) + 1);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  v(0) = 1.0;
  out[0] = 1.0;
  for (int k = 1; k <= K; ++k) {
    v = jac * v;
    out[static_cast<std::size_t>(k)] = v(0);
  }
  return out;
}

DiscretizedMeasure gauss_from_jacobi(const JacobiCoeffs& coeffs, int n) {
  if (n < 1 || n > coeffs.count())
    raise(ErrorCode::TruncationTooSmall, "not enough coefficients");
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    jac(i, i) = coeffs.b[static_cast<std::size_t>(i)];
    if (i + 1 < n) {
      jac(i, i + 1) = coeffs.a[static_cast<std::size_t>(i)];
      jac(i + 1, i) = coeffs.a[static_cast<std::size_t>(i)];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jac);
  DiscretizedMeasure out;
  out.nodes.resize(static_cast<std::size_t>(n));
  out.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out.nodes[static_cast<std::size_t>(i)] = eig.eigenvalues()(i);
    const double first = eig.eigenvectors()(0, i);
    out.weights[static_cast<std::size_t>(i)] = first * first;
  }
  return out;
}

namespace {

/// m-function of the (probability) measure behind `coeffs`, evaluated via the
/// moment series far out and via the Gauss discretization near the support.
Complex m_from_coeffs(const JacobiCoeffs& coeffs, const Interval& support, Complex z) {
  const double center = support.mid();
  const double radius = 0.5 * support.length();
  if (std::abs(z - center) > 2.0 * radius) {
    const int K = 2 * (coeffs.count() - 1);
    std::vector<double> raw = moments_from_jacobi(coeffs, K);
    // Centered moments, then m(z) = -sum M_k / (z - c)^{k+1}.
    std::vector<double> centered(raw.size(), 0.0);
    for (std::size_t k = 0; k < raw.size(); ++k) {
      double acc = 0.0;
      // (x - c)^k = sum_j C(k,j) x^j (-c)^{k-j}
      std::vector<double> coef(k + 1);
      coef[0] = 1.0;
      for (std::size_t j = 1; j <= k; ++j)
        coef[j] = coef[j - 1] * static_cast<double>(k - j + 1) / static_cast<double>(j);
      for (std::size_t j = 0; j <= k; ++j)
        acc += coef[j] * std::pow(-center, static_cast<double>(k - j)) * raw[j];
      centered[k] = acc;
    }
    Complex inv = 1.0 / (z - center);
    Complex term = inv, acc(0.0, 0.0);
    for (std::size_t k = 0; k < centered.size(); ++k) {
      acc -= centered[k] * term;
      term *= inv;
    }
    return acc;
  }
  DiscretizedMeasure g = gauss_from_jacobi(coeffs, coeffs.count());
  Complex acc(0.0, 0.0);
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    acc += g.weights[i] / (g.nodes[i] - z);
  return acc;
}

}  // namespace

double stripping_residual(const RealMeasure& mu, Complex z, double clearance) {
  if (distance_to_interval(z, mu.support()) < clearance)
    raise(ErrorCode::TooCloseToSupport, "stripping residual needs z off the support");
  const int depth = std::min(18, static_cast<int>(mu.nodes().size()) / 2);
  JacobiCoeffs coeffs = jacobi_from_measure(mu, depth);
  const double b1 = coeffs.b[0];
  const double a1 = coeffs.a[0];
  JacobiCoeffs stripped = strip_jacobi(coeffs);
  const Complex m = mu.m_function(0, z, clearance) / mu.mass();
  const Complex m1 = m_from_coeffs(stripped, mu.support(), z);
  return std::abs(1.0 / m - (b1 - z - a1 * a1 * m1));
}

VerblunskyCoeffs verblunsky_from_moments(const std::vector<Complex>& moments, int N) {
  if (N < 1) raise(ErrorCode::OrderExceeded, "need N >= 1");
  if (static_cast<int>(moments.size()) < N + 1)
    raise(ErrorCode::OrderExceeded, "need moments c_0..c_N");
  if (moments[0] == Complex(0.0, 0.0))
    raise(ErrorCode::LossOfPositivity, "zero total mass");
  std::vector<Complex> c(moments);
  for (auto& v : c) v /= moments[0];
  auto cm = [&](int k) -> Complex {  // c_k with c_{-k} = conj(c_k)
    return k >= 0 ? c[static_cast<std::size_t>(k)]
                  : std::conj(c[static_cast<std::size_t>(-k)]);
  };
  auto dot_one = [&](const std::vector<Complex>& poly) {
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i)
      acc += poly[i] * cm(static_cast<int>(i));
    return acc;
  };

  VerblunskyCoeffs out;
  out.alpha.reserve(static_cast<std::size_t>(N));
  std::vector<Complex> phi{Complex(1.0, 0.0)};  // monic, low -> high
  for (int n = 0; n < N; ++n) {
    std::vector<Complex> zphi(phi.size() + 1, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < phi.size(); ++i) zphi[i + 1] = phi[i];
    std::vector<Complex> star(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i)
      star[i] = std::conj(phi[phi.size() - 1 - i]);
    const Complex den = dot_one(star);
    if (std::abs(den) == 0.0)
      raise(ErrorCode::LossOfPositivity, "degenerate norm in the recursion");
    const Complex alpha_bar = dot_one(zphi) / den;
    const Complex alpha = std::conj(alpha_bar);
    if (!(std::abs(alpha) < 1.0))
      raise(ErrorCode::ModulusViolation,
            "|alpha_" + std::to_string(n) + "| >= 1; moments not from a positive measure");
    out.alpha.push_back(alpha);
    std::vector<Complex> next(zphi);
    for (std::size_t i = 0; i < star.size(); ++i) next[i] -= alpha_bar * star[i];
    phi.swap(next);
  }
  return out;
}

VerblunskyCoeffs aleksandrov_flip(const VerblunskyCoeffs& coeffs) {
  VerblunskyCoeffs out;
  out.alpha.reserve(coeffs.alpha.size());
  for (const Complex& a : coeffs.alpha) out.alpha.push_back(-a);
  return out;
}

std::vector<Complex> moments_from_verblunsky(const VerblunskyCoeffs& coeffs, int K) {
  if (K < 0) raise(ErrorCode::OrderExceeded, "K must be >= 0");
  const int size = K + 2;
  if (coeffs.count() < K + 1)
    raise(ErrorCode::TruncationTooSmall,
          "need at least K + 1 recurrence coefficients");
  using CMat = Eigen::MatrixXcd;
  CMat lfac = CMat::Identity(size, size);
  CMat mfac = CMat::Identity(size, size);
  auto place = [&](CMat& target, int j) {
    const Complex a = coeffs.alpha[static_cast<std::size_t>(j)];
    const double rho = std::sqrt(std::max(0.0, 1.0 - std::norm(a)));
    target(j, j) = std::conj(a);
    target(j, j + 1) = rho;
    target(j + 1, j) = rho;
    target(j + 1, j + 1) = -a;
  };
  for (int j = 0; j + 1 < size && j < coeffs.count(); j += 2) place(lfac, j);
  for (int j = 1; j + 1 < size && j < coeffs.count(); j += 2) place(mfac, j);
  CMat cmv = lfac * mfac;
  std::vector<Complex> out(static_cast<std::size_t>(K) + 1);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(size);
  v(0) = Complex(1.0, 0.0);
  out[0] = Complex(1.0, 0.0);
  for (int k = 1; k <= K; ++k) {
    v = cmv * v;
    out[static_cast<std::size_t>(k)] = v(0);
  }
  return out;
}

double reciprocal_F_check(const CircleMeasure& mu, int order) {
  if (order < 0) raise(ErrorCode::OrderExceeded, "order must be >= 0");
  if (order > 0 && 2 * (order + 1) > 2 * mu.table_halfmax() && !mu.lazy_ok())
    raise(ErrorCode::OrderExceeded, "order beyond the moment table");
  const Complex mass = mu.mass();
  // F(z) = 1 + 2 sum_{k>=1} c_{-k} z^k for the normalized measure.
  std::vector<Complex> fser(static_cast<std::size_t>(order) + 1, Complex(0.0, 0.0));
  fser[0] = Complex(1.0, 0.0);
  for (int k = 1; k <= order; ++k) fser[static_cast<std::size_t>(k)] = 2.0 * mu.moment(-k) / mass;

  std::vector<Complex> normalized(static_cast<std::size_t>(order) + 2);
  for (int k = 0; k <= order + 1; ++k)
    normalized[static_cast<std::size_t>(k)] = mu.moment(k) / mass;
  VerblunskyCoeffs alpha = verblunsky_from_moments(normalized, order + 1);
  std::vector<Complex> flipped = moments_from_verblunsky(aleksandrov_flip(alpha), order);
  std::vector<Complex> gser(static_cast<std::size_t>(order) + 1, Complex(0.0, 0.0));
  gser[0] = Complex(1.0, 0.0);
  for (int k = 1; k <= order; ++k)
    gser[static_cast<std::size_t>(k)] = 2.0 * std::conj(flipped[static_cast<std::size_t>(k)]);

  double dev = 0.0;
  for (int k = 0; k <= order; ++k) {
    Complex prod(0.0, 0.0);
    for (int j = 0; j <= k; ++j)
      prod += fser[static_cast<std::size_t>(j)] * gser[static_cast<std::size_t>(k - j)];
    const Complex expect = (k == 0) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
    dev = std::max(dev, std::abs(prod - expect));
  }
  return dev;
}

}  // namespace spectral
}  // namespace niklab
