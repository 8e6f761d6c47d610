#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "niklab/mop.hpp"
#include "niklab/nikishin.hpp"
#include "niklab/spectral.hpp"

using namespace niklab;

namespace {

RealMeasure uniform_on(double lo, double hi, int order = 200) {
  return RealMeasure::from_weight(Interval{lo, hi}, WeightSpec{}, order);
}

CircleMeasure uniform_arc(double alpha, double beta, int order = 200) {
  return CircleMeasure::from_weight(Arc{alpha, beta}, WeightSpec{}, order, BranchCut{});
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int depth = 26) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fhi, double fmid, double whole,
          int d) -> double {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
    const double flm = f(lm), frm = f(rm);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol)
      return left + right + (left + right - whole) / 15.0;
    return rec(lo, mid, flo, fmid, flm, left, d - 1) +
           rec(mid, hi, fmid, fhi, frm, right, d - 1);
  };
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return rec(a, b, fa, fb, fm, whole, depth);
}

NikishinSystem real_r2() {
  return build_system(
      GeneratorChainRL::from_measures({uniform_on(0.0, 1.0), uniform_on(2.0, 3.0)}));
}

NikishinSystem real_r3() {
  return build_system(GeneratorChainRL::from_measures(
      {uniform_on(0.0, 1.0), uniform_on(2.0, 3.0), uniform_on(4.0, 5.0)}));
}

NikishinSystem circle_r2() {
  return build_system(
      GeneratorChainUC::from_measures({uniform_arc(0.3, 1.3), uniform_arc(2.0, 3.0)}));
}

}  // namespace

TEST_CASE("bracket mass against the log antiderivative and the adaptive oracle") {
  const RealMeasure bracket = bracket_rl(uniform_on(0.0, 1.0), uniform_on(2.0, 3.0));
  const double exact = 3.0 * std::log(3.0) - 4.0 * std::log(2.0);
  const double adaptive = adaptive_simpson(
      [](double x) { return std::log((3.0 - x) / (2.0 - x)); }, 0.0, 1.0);
  CHECK(bracket.mass() == doctest::Approx(exact).epsilon(1e-11));
  CHECK(bracket.mass() == doctest::Approx(adaptive).epsilon(1e-11));
  CHECK(bracket.mass() > 0.0);
  CHECK(bracket.sign() == +1);
}

TEST_CASE("bracket sign flips when the second support sits to the left") {
  const RealMeasure bracket = bracket_rl(uniform_on(2.0, 3.0), uniform_on(0.0, 1.0));
  CHECK(bracket.sign() == -1);
}

TEST_CASE("bracket rejects overlapping and near-touching supports") {
  CHECK_THROWS_AS((void)bracket_rl(uniform_on(0.0, 1.5), uniform_on(1.0, 2.0)), Error);
  CHECK_THROWS_AS((void)bracket_rl(uniform_on(0.0, 1.0), uniform_on(1.0 + 1e-9, 2.0)),
                  Error);
  BuildOptions touching;
  touching.touching_ok = true;
  const RealMeasure ok =
      bracket_rl(uniform_on(0.0, 1.0), uniform_on(1.0 + 1e-9, 2.0), touching);
  CHECK(ok.mass() > 0.0);
}

TEST_CASE("circle bracket factor is real on the first arc") {
  const CircleMeasure s1 = uniform_arc(0.3, 1.3);
  const CircleMeasure s2 = uniform_arc(2.0, 3.0);
  const CircleMeasure bracket = bracket_uc(s1, s2);
  for (int i = 0; i < 50; ++i) {
    const double theta = 0.3 + (i + 0.5) / 50.0;
    const Complex v = bracket.extra_factor()(std::polar(1.0, theta));
    CHECK(std::abs(v.imag()) <= 1e-10 * std::max(1.0, std::abs(v)));
  }
  // Total mass two ways: the eager moment table against a fresh quadrature sum.
  const Complex direct = bracket.integrate([](Complex) { return Complex(1.0, 0.0); });
  CHECK(std::abs(bracket.moment(0) - direct) < 1e-10);
}

TEST_CASE("disjoint arcs accepted, overlapping rejected") {
  CHECK_NOTHROW((void)bracket_uc(uniform_arc(0.3, 1.3), uniform_arc(2.0, 3.0)));
  CHECK_THROWS_AS((void)bracket_uc(uniform_arc(0.3, 2.3), uniform_arc(2.0, 3.0)),
                  Error);
}

TEST_CASE("r=1 system is the base case") {
  const NikishinSystem sys =
      build_system(GeneratorChainRL::from_measures({uniform_on(0.0, 1.0)}));
  CHECK(sys.r() == 1);
  CHECK(sys.rn_rl.size() == 1);
  CHECK(sys.rn_rl[0](0.37) == doctest::Approx(1.0));
  CHECK(sys.mus_rl[0].moment(2) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("r=2 Radon-Nikodym factor is the log ratio") {
  const NikishinSystem sys = real_r2();
  CHECK(sys.rn_rl[1](0.5) == doctest::Approx(std::log(2.5 / 1.5)).epsilon(1e-12));
}

TEST_CASE("r=3 chain factor matches the nested quadrature oracle") {
  const NikishinSystem sys = real_r3();
  auto inner_m = [](double t) { return std::log((5.0 - t) / (4.0 - t)); };
  for (double x : {0.1, 0.5, 0.9}) {
    const double oracle = adaptive_simpson(
        [&](double t) { return inner_m(t) / (t - x); }, 2.0, 3.0, 1e-13);
    CHECK(sys.rn_rl[2](x) == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("associativity: third measure moments by direct double quadrature") {
  const NikishinSystem sys = real_r3();
  auto inner_m = [](double t) { return std::log((5.0 - t) / (4.0 - t)); };
  for (int k = 0; k <= 4; ++k) {
    const double oracle = adaptive_simpson(
        [&](double x) {
          const double mid = adaptive_simpson(
              [&](double t) { return inner_m(t) / (t - x); }, 2.0, 3.0, 1e-13);
          return std::pow(x, k) * mid;
        },
        0.0, 1.0, 1e-12);
    CHECK(sys.mus_rl[2].moment(k) == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("derived measures are sign-definite along the chain") {
  const NikishinSystem sys = real_r3();
  for (std::size_t j = 0; j < sys.rn_rl.size(); ++j) {
    int sign = 0;
    for (int i = 0; i < 200; ++i) {
      const double x = (i + 0.5) / 200.0;
      const double v = sys.rn_rl[j](x);
      REQUIRE(v != 0.0);
      if (sign == 0) sign = v > 0 ? 1 : -1;
      CHECK((v > 0 ? 1 : -1) == sign);
    }
  }

  const NikishinSystem uc = circle_r2();
  int sign = 0;
  for (int i = 0; i < 200; ++i) {
    const double theta = 0.3 + (i + 0.5) / 200.0;
    const Complex v = uc.rn_uc[1](std::polar(1.0, theta));
    CHECK(std::abs(v.imag()) <= 1e-10 * std::max(1.0, std::abs(v)));
    if (sign == 0) sign = v.real() > 0 ? 1 : -1;
    CHECK((v.real() > 0 ? 1 : -1) == sign);
  }
}

TEST_CASE("automatic branch point sits in the largest uncovered gap") {
  const NikishinSystem sys = circle_r2();
  // Arcs [0.3,1.3] and [2.0,3.0] leave (3.0, 2pi+0.3) as the largest gap.
  const double expected = 0.5 * (3.0 + kTwoPi + 0.3);
  CHECK(sys.branch.t0 == doctest::Approx(expected).epsilon(1e-12));
  for (const Arc& arc : {Arc{0.3, 1.3}, Arc{2.0, 3.0}})
    CHECK_FALSE(arc.contains_angle(sys.branch.t0));
}

TEST_CASE("user t0 inside a support arc is rejected") {
  auto chain = GeneratorChainUC::from_measures(
      {uniform_arc(0.3, 1.3), uniform_arc(2.0, 3.0)}, 2.5);
  CHECK_THROWS_AS((void)build_system(chain), Error);
  auto fine = GeneratorChainUC::from_measures(
      {uniform_arc(0.3, 1.3), uniform_arc(2.0, 3.0)}, 4.5);
  CHECK(build_system(fine).branch.t0 == doctest::Approx(4.5));
}

TEST_CASE("branch square root is continuous along the support arcs") {
  const NikishinSystem sys = circle_r2();
  for (const Arc& arc : {Arc{0.3, 1.3}, Arc{2.0, 3.0}}) {
    Complex prev = sqrt_branch(std::polar(1.0, arc.alpha), sys.branch);
    for (int i = 1; i <= 400; ++i) {
      const double theta = arc.alpha + arc.length() * i / 400.0;
      const Complex cur = sqrt_branch(std::polar(1.0, theta), sys.branch);
      CHECK(std::abs(cur - prev) < 0.05);
      prev = cur;
    }
  }
}

TEST_CASE("F nonvanishing report") {
  const CircleMeasure s2 = uniform_arc(2.0, 3.0);
  const FReport report = check_F_nonvanishing(s2, Arc{0.3, 1.3}, 64);
  CHECK(report.min_abs >= 0.0);
  CHECK(report.nonvanishing);

  const FReport tiny = check_F_nonvanishing(s2, Arc{0.3, 1.3}, 2);
  CHECK(tiny.gridsize == 2);
  CHECK(tiny.min_abs >= 0.0);
  CHECK_THROWS_AS((void)check_F_nonvanishing(s2, Arc{0.3, 1.3}, 1), Error);
}

TEST_CASE("F of a symmetric generator vanishes at the mirror angle") {
  // For the uniform generator on [2,3] the factor iF is odd around 2.5 + pi,
  // so a first arc starting exactly there fails the nonvanishing check while
  // the system itself still builds (the factor keeps one sign inside).
  const double star = 2.5 + 3.141592653589793;
  const CircleMeasure s1 = uniform_arc(star, star + 0.5);
  const CircleMeasure s2 = uniform_arc(2.0, 3.0);
  const NikishinSystem sys = build_system(GeneratorChainUC::from_measures({s1, s2}));
  const FReport report = check_F_nonvanishing(s2, sys.first_arc(), 101);
  CHECK_FALSE(report.nonvanishing);
  CHECK(report.min_abs < 1e-10);
  CHECK_THROWS_AS((void)flip_r2_uc(sys), Error);
}

TEST_CASE("real flip reproduces the stripped-relation moments") {
  const NikishinSystem sys = real_r2();
  const NikishinSystem flipped = flip_r2_rl(sys);
  REQUIRE(flipped.r() == 2);

  const RealMeasure& sigma2 = sys.sigmas_rl[1];
  const RealMeasure& mu2 = sys.mus_rl[1];
  const auto coeffs = spectral::jacobi_from_measure(sigma2, 2);
  const double b1 = coeffs.b[0];
  const double c0 = sigma2.mass();
  for (int k = 0; k <= 8; ++k) {
    const double oracle = mu2.integrate([&](double x) {
      const double m2 = sigma2.m_function(0, Complex(x, 0.0), 0.0).real();
      return std::pow(x, k) * (1.0 / m2 - (b1 - x) / c0);
    });
    CHECK(flipped.mus_rl[1].moment(k) == doctest::Approx(oracle).epsilon(1e-8));
  }
  // The flipped generator is a negative measure living on the second support.
  CHECK(flipped.sigmas_rl[1].sign() == -1);
  for (double node : flipped.sigmas_rl[1].nodes()) {
    CHECK(node >= 2.0);
    CHECK(node <= 3.0);
  }
}

TEST_CASE("flipped generator matches the stripping relation off the support") {
  const NikishinSystem sys = real_r2();
  const NikishinSystem flipped = flip_r2_rl(sys);
  const RealMeasure& sigma2 = sys.sigmas_rl[1];
  const RealMeasure& tilde = flipped.sigmas_rl[1];
  const auto coeffs = spectral::jacobi_from_measure(sigma2, 18);
  const double b1 = coeffs.b[0];
  const double c0 = sigma2.mass();
  for (int t = 0; t < 10; ++t) {
    const Complex z(1.0 + 0.2 * t, t % 2 == 0 ? 0.8 : -0.8);
    const Complex lhs = tilde.m_function(0, z, 0.0);
    const Complex rhs = 1.0 / sigma2.m_function(0, z, 0.0) - (b1 - z) / c0;
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }
}

TEST_CASE("flip of flip reproduces the verdict table on a 3x3 grid") {
  const NikishinSystem sys = real_r2();
  const NikishinSystem twice = flip_r2_rl(flip_r2_rl(sys));
  for (int n1 = 1; n1 <= 3; ++n1)
    for (int n2 = 1; n2 <= 3; ++n2) {
      const MultiIndex n{n1, n2};
      const auto v0 =
          mop::assess_hankel(mop::hankel_matrix(sys, n), sys.first_interval());
      const auto v1 =
          mop::assess_hankel(mop::hankel_matrix(twice, n), twice.first_interval());
      CHECK(v0.verdict == v1.verdict);
      CHECK(v0.verdict == mop::Verdict::Normal);
    }
}

TEST_CASE("circle flip recovers the first measure and swaps verdicts") {
  const NikishinSystem sys = circle_r2();
  const NikishinSystem flipped = flip_r2_uc(sys);

  const CircleMeasure& sigma2 = sys.sigmas_uc[1];
  for (int i = 0; i < 10; ++i) {
    const Complex z = std::polar(1.0, 0.3 + 0.1 * i);
    const Complex f = sigma2.caratheodory(z, 0.0);
    CHECK(std::abs(f * (1.0 / f) - Complex(1.0, 0.0)) < 1e-15);
  }

  for (int k = -10; k <= 10; ++k) {
    const Complex orig = sys.mus_uc[0].moment(k);
    const Complex got = flipped.mus_uc[1].moment(k);
    CHECK(std::abs(got - orig) <= 1e-10 * std::max(1.0, std::abs(orig)));
  }

  for (const auto& n : {MultiIndex{1, 3}, MultiIndex{2, 4}, MultiIndex{3, 3}}) {
    const auto direct =
        mop::assess_toeplitz(mop::toeplitz_matrix(sys, n), sys.first_arc());
    const MultiIndex swapped{n.parts[1], n.parts[0]};
    const auto via_flip = mop::assess_toeplitz(mop::toeplitz_matrix(flipped, swapped),
                                               flipped.first_arc());
    CHECK(direct.verdict == via_flip.verdict);
  }
}

TEST_CASE("flip arity guards") {
  CHECK_THROWS_AS((void)flip_r2_rl(real_r3()), Error);
  CHECK_THROWS_AS((void)flip_r2_rl(circle_r2()), Error);
  CHECK_THROWS_AS((void)flip_r2_uc(real_r2()), Error);
}
