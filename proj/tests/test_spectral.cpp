#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "niklab/spectral.hpp"

using namespace niklab;
using namespace niklab::spectral;

namespace {

RealMeasure uniform_on(double lo, double hi, int order = 200) {
  return RealMeasure::from_weight(Interval{lo, hi}, WeightSpec{}, order);
}

CircleMeasure cosine_circle(double amplitude = 1.0, int order = 200) {
  WeightSpec w;
  w.kind = WeightKind::Cosine;
  w.amplitude = amplitude;
  return CircleMeasure::from_weight(Arc{0.0, kTwoPi}, w, order, BranchCut{});
}

std::vector<double> moment_vector(const RealMeasure& mu, int kmax) {
  std::vector<double> out(static_cast<std::size_t>(kmax) + 1);
  for (int k = 0; k <= kmax; ++k) out[static_cast<std::size_t>(k)] = mu.moment(k);
  return out;
}

std::vector<Complex> moment_vector(const CircleMeasure& mu, int kmax) {
  std::vector<Complex> out(static_cast<std::size_t>(kmax) + 1);
  for (int k = 0; k <= kmax; ++k) out[static_cast<std::size_t>(k)] = mu.moment(k);
  return out;
}

}  // namespace

TEST_CASE("recurrence data of the uniform measure on [0,1]") {
  const auto coeffs = jacobi_from_moments(moment_vector(uniform_on(0.0, 1.0), 12), 4);
  CHECK(coeffs.b[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(coeffs.a[0] * coeffs.a[0] == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
  CHECK(coeffs.b[1] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(coeffs.a[1] * coeffs.a[1] == doctest::Approx(1.0 / 15.0).epsilon(1e-10));
}

TEST_CASE("moment and measure extraction agree") {
  const RealMeasure mu = uniform_on(0.0, 1.0);
  const auto from_moments = jacobi_from_moments(moment_vector(mu, 16), 6);
  const auto from_measure = jacobi_from_measure(mu, 6);
  for (int k = 0; k < 6; ++k) {
    CHECK(from_moments.b[static_cast<std::size_t>(k)] ==
          doctest::Approx(from_measure.b[static_cast<std::size_t>(k)]).epsilon(1e-8));
    CHECK(from_moments.a[static_cast<std::size_t>(k)] ==
          doctest::Approx(from_measure.a[static_cast<std::size_t>(k)]).epsilon(1e-8));
  }
}

TEST_CASE("symmetric measures have centered recurrence") {
  const auto coeffs = jacobi_from_moments(moment_vector(uniform_on(-1.0, 1.0), 12), 5);
  for (double b : coeffs.b) CHECK(std::abs(b) < 1e-10);
}

TEST_CASE("positivity loss is reported") {
  CHECK_THROWS_AS((void)jacobi_from_moments({1.0, 0.0, 0.0}, 1), Error);
}

TEST_CASE("stripping drops the first pair") {
  const auto coeffs = jacobi_from_measure(uniform_on(0.0, 1.0), 6);
  const auto stripped = strip_jacobi(coeffs);
  CHECK(stripped.count() == 5);
  CHECK(stripped.b[0] == doctest::Approx(coeffs.b[1]));
  CHECK(stripped.a[0] == doctest::Approx(coeffs.a[1]));
  const auto twice = strip_jacobi(strip_jacobi(coeffs));
  CHECK(twice.b[0] == doctest::Approx(coeffs.b[2]));

  JacobiCoeffs constant;
  constant.a = {0.5, 0.5, 0.5};
  constant.b = {0.0, 0.0, 0.0};
  const auto shifted = strip_jacobi(constant);
  CHECK(shifted.a[0] == doctest::Approx(0.5));
  CHECK(shifted.b[0] == doctest::Approx(0.0));

  JacobiCoeffs tiny;
  tiny.a = {0.5};
  tiny.b = {0.0};
  CHECK_THROWS_AS((void)strip_jacobi(tiny), Error);
}

TEST_CASE("moments from the truncated operator") {
  const RealMeasure mu = uniform_on(0.0, 1.0);
  const auto coeffs = jacobi_from_measure(mu, 8);
  const auto rebuilt = moments_from_jacobi(coeffs, 10);
  CHECK(rebuilt[0] == doctest::Approx(1.0));
  CHECK(rebuilt[1] == doctest::Approx(coeffs.b[0]));
  for (int k = 0; k <= 10; ++k)
    CHECK(rebuilt[static_cast<std::size_t>(k)] ==
          doctest::Approx(mu.moment(k)).epsilon(1e-9));

  JacobiCoeffs small;
  small.a = {0.3, 0.3};
  small.b = {0.0, 0.0};
  CHECK_THROWS_AS((void)moments_from_jacobi(small, 10), Error);
}

TEST_CASE("round trip through the moment recurrences") {
  const RealMeasure mu = uniform_on(0.0, 1.0);
  const auto coeffs = jacobi_from_moments(moment_vector(mu, 12), 6);
  const auto rebuilt = moments_from_jacobi(coeffs, 10);
  for (int k = 0; k <= 10; ++k)
    CHECK(rebuilt[static_cast<std::size_t>(k)] ==
          doctest::Approx(mu.moment(k)).epsilon(1e-9));
}

TEST_CASE("stripping residual is small off the support") {
  const RealMeasure mu = uniform_on(0.0, 1.0);
  CHECK(stripping_residual(mu, Complex(2.0, 0.0)) < 1e-9);
  CHECK(stripping_residual(mu, Complex(0.0, 1.0)) < 1e-9);
  for (const Complex z : {Complex(1.7, 0.9), Complex(-0.4, 1.2)}) {
    const double up = stripping_residual(mu, z);
    const double down = stripping_residual(mu, std::conj(z));
    CHECK(up == doctest::Approx(down).epsilon(1e-10));
    CHECK(up < 1e-9);
  }
  CHECK_THROWS_AS((void)stripping_residual(mu, Complex(0.5, 0.0)), Error);
}

TEST_CASE("stripping residual at twenty separated points") {
  const RealMeasure mu = uniform_on(0.0, 1.0);
  int count = 0;
  for (int i = 0; count < 20; ++i) {
    const Complex z(-1.5 + 0.35 * i, (i % 2 == 0) ? 0.8 : -0.6);
    if (distance_to_interval(z, mu.support()) < 0.5) continue;
    CHECK(stripping_residual(mu, z) < 1e-9);
    ++count;
  }
}

TEST_CASE("free-case recurrence data vanishes") {
  const CircleMeasure leb = cosine_circle(0.0);
  const auto alphas = verblunsky_from_moments(moment_vector(leb, 9), 8);
  for (const Complex& a : alphas.alpha) CHECK(std::abs(a) < 1e-13);
}

TEST_CASE("cosine weight recurrence data") {
  const CircleMeasure cosw = cosine_circle();
  const auto alphas = verblunsky_from_moments(moment_vector(cosw, 9), 8);
  // First value from the 1x1 solve: Phi_1(z) = z - c_1, alpha_0 = -conj(Phi_1(0)).
  CHECK(alphas.alpha[0].real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(alphas.alpha[0].imag()) < 1e-13);
  for (int n = 0; n < 8; ++n) {
    const double expected = (n % 2 == 0 ? 1.0 : -1.0) / (n + 2.0);
    CHECK(alphas.alpha[static_cast<std::size_t>(n)].real() ==
          doctest::Approx(expected).epsilon(1e-9));
    CHECK(std::abs(alphas.alpha[static_cast<std::size_t>(n)].imag()) < 1e-10);
    CHECK(std::abs(alphas.alpha[static_cast<std::size_t>(n)]) < 1.0);
  }
}

TEST_CASE("moduli beyond one fail loudly") {
  CHECK_THROWS_AS(
      (void)verblunsky_from_moments({Complex(1.0, 0.0), Complex(2.0, 0.0)}, 1), Error);
}

TEST_CASE("sign flip involution") {
  const auto alphas = verblunsky_from_moments(moment_vector(cosine_circle(), 7), 6);
  const auto flipped = aleksandrov_flip(alphas);
  CHECK(flipped.alpha[0].real() == doctest::Approx(-0.5).epsilon(1e-12));
  const auto back = aleksandrov_flip(flipped);
  for (std::size_t n = 0; n < 6; ++n) {
    CHECK(std::abs(back.alpha[n] - alphas.alpha[n]) < 1e-15);
    CHECK(std::abs(flipped.alpha[n]) == doctest::Approx(std::abs(alphas.alpha[n])));
  }

  VerblunskyCoeffs zeros;
  zeros.alpha.assign(5, Complex(0.0, 0.0));
  const auto same = aleksandrov_flip(zeros);
  for (const Complex& a : same.alpha) CHECK(std::abs(a) == 0.0);
}

TEST_CASE("unitary truncation reproduces moments") {
  VerblunskyCoeffs zeros;
  zeros.alpha.assign(10, Complex(0.0, 0.0));
  const auto free = moments_from_verblunsky(zeros, 8);
  CHECK(free[0] == Complex(1.0, 0.0));
  for (int k = 1; k <= 8; ++k)
    CHECK(std::abs(free[static_cast<std::size_t>(k)]) < 1e-14);

  const CircleMeasure cosw = cosine_circle();
  const auto alphas = verblunsky_from_moments(moment_vector(cosw, 10), 9);
  const auto rebuilt = moments_from_verblunsky(alphas, 8);
  for (int k = 0; k <= 8; ++k)
    CHECK(std::abs(rebuilt[static_cast<std::size_t>(k)] - cosw.moment(k)) < 1e-9);

  VerblunskyCoeffs short_list;
  short_list.alpha.assign(3, Complex(0.0, 0.0));
  CHECK_THROWS_AS((void)moments_from_verblunsky(short_list, 8), Error);
}

TEST_CASE("reciprocal series check") {
  const CircleMeasure leb = cosine_circle(0.0);
  CHECK(reciprocal_F_check(leb, 8) < 1e-13);
  CHECK(reciprocal_F_check(leb, 0) == doctest::Approx(0.0));

  const CircleMeasure cosw = cosine_circle();
  CHECK(reciprocal_F_check(cosw, 8) < 1e-9);
  CHECK(reciprocal_F_check(cosw, 0) == doctest::Approx(0.0));
}
