#include "niklab/identity.hpp"

#include <cmath>
#include <random>

#include "niklab/detkit.hpp"
#include "niklab/mop.hpp"
#include "niklab/spectral.hpp"

namespace niklab {
namespace identity {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> random_poly(std::mt19937_64& rng, int maxdeg) {
  std::uniform_int_distribution<int> degd(0, maxdeg);
  std::uniform_real_distribution<double> coefd(-1.0, 1.0);
  std::vector<double> coeffs(static_cast<std::size_t>(degd(rng)) + 1);
  for (auto& c : coeffs) c = coefd(rng);
  return coeffs;
}

std::function<double(double)> poly_fn(std::vector<double> coeffs) {
  return [coeffs](double t) {
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * t + coeffs[k];
    return acc;
  };
}

}  // namespace

IdentityReport check_andreief(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> bignd(1, 6);
  std::uniform_int_distribution<int> atomsd(1, 8);
  std::uniform_real_distribution<double> massd(0.1, 1.0);
  std::uniform_real_distribution<double> entryd(-1.0, 1.0);

  IdentityReport report;
  report.name = "andreief";
  report.trials = trials;
  report.tol = 1e-12;
  for (int t = 0; t < trials; ++t) {
    const int bign = bignd(rng);
    const int m = std::uniform_int_distribution<int>(1, bign)(rng);
    const int atoms = atomsd(rng);

    detkit::DiscreteMeasure mu;
    mu.locations = detkit::draw_sorted(rng, -1.0, 1.0, atoms);
    mu.masses.resize(static_cast<std::size_t>(atoms));
    for (auto& w : mu.masses) w = massd(rng);

    detkit::FuncList f, g;
    for (int j = 0; j < m; ++j) f.push_back(poly_fn(random_poly(rng, 3)));
    for (int k = 0; k < bign; ++k) g.push_back(poly_fn(random_poly(rng, 3)));
    std::vector<std::vector<double>> a_block(
        static_cast<std::size_t>(bign - m),
        std::vector<double>(static_cast<std::size_t>(bign)));
    for (auto& row : a_block)
      for (auto& v : row) v = entryd(rng);

    const double lhs = detkit::andreief_lhs(a_block, f, g, mu);
    const double rhs = detkit::andreief_rhs(a_block, f, g, mu);
    report.max_dev =
        std::max(report.max_dev, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
  }
  report.pass = report.max_dev <= report.tol;
  return report;
}

IdentityReport check_cauchy_vandermonde(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  IdentityReport report;
  report.name = "cauchy-vandermonde";
  report.trials = trials;
  report.tol = 1e-10;
  for (int t = 0; t < trials; ++t) {
    int n1 = 0, n2 = 0;
    while (n1 + n2 < 1)
      n1 = std::uniform_int_distribution<int>(0, 5)(rng),
      n2 = std::uniform_int_distribution<int>(0, 4)(rng);
    if (n1 + n2 > 8) {
      --t;
      continue;
    }
    auto separated = [&rng](double lo, double hi, int count) {
      while (true) {
        auto pts = detkit::draw_sorted(rng, lo, hi, count);
        bool ok = true;
        for (std::size_t i = 1; i < pts.size(); ++i)
          if (pts[i] - pts[i - 1] < 1e-3) ok = false;
        if (ok) return pts;
      }
    };
    const auto tpts = separated(0.0, 1.0, n1 + n2);
    const auto zpts = separated(2.0, 3.0, n2);
    const double closed = detkit::cauchy_vandermonde_closed(tpts, zpts, n1, n2);
    const double dense = detkit::cauchy_vandermonde_dense(tpts, zpts, n1, n2);
    report.max_dev =
        std::max(report.max_dev, std::abs(closed - dense) / std::abs(closed));
  }
  report.pass = report.max_dev <= report.tol;
  return report;
}

IdentityReport check_stripping(const NikishinSystem& system, int points,
                               std::uint64_t seed) {
  if (system.kind != SystemKind::RealLine)
    raise(ErrorCode::KindMismatch, "stripping runs on real-line systems");
  const RealMeasure& mu = system.mus_rl.front();
  const Interval sup = mu.support();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> xd(sup.lo - 2.0, sup.hi + 2.0);
  std::uniform_real_distribution<double> yd(-2.0, 2.0);

  IdentityReport report;
  report.name = "stripping";
  report.trials = points;
  report.tol = 1e-9;
  int accepted = 0;
  while (accepted < points) {
    const Complex z(xd(rng), yd(rng));
    if (distance_to_interval(z, sup) < 0.5) continue;
    report.max_dev = std::max(report.max_dev, spectral::stripping_residual(mu, z));
    ++accepted;
  }
  const auto coeffs = spectral::jacobi_from_measure(mu, 2);
  report.details.emplace_back("b1", fmt(coeffs.b[0]));
  report.details.emplace_back("a1_sq", fmt(coeffs.a[0] * coeffs.a[0]));
  report.pass = report.max_dev <= report.tol;
  return report;
}

namespace {

IdentityReport check_flip_rl(const NikishinSystem& system) {
  IdentityReport report;
  report.name = "flip";
  report.tol = 1e-8;

  const NikishinSystem flipped = flip_r2_rl(system);
  const RealMeasure& sigma2 = system.sigmas_rl[1];
  const RealMeasure& mu2 = system.mus_rl[1];
  const double c0 = sigma2.mass();
  const auto coeffs = spectral::jacobi_from_measure(sigma2, 2);
  const double b1 = coeffs.b[0];

  // Oracle for the flipped moments straight from the stripping relation:
  // m_{flip}(x) = 1/m_{sigma2}(x) - (b1 - x)/c0, everything by quadrature.
  const int kmax = 12;
  for (int k = 0; k <= kmax; ++k) {
    const double oracle = mu2.integrate([&](double x) {
      const double m2 = sigma2.m_function(0, Complex(x, 0.0), 0.0).real();
      return std::pow(x, k) * (1.0 / m2 - (b1 - x) / c0);
    });
    const double got = flipped.mus_rl[1].moment(k);
    report.max_dev = std::max(report.max_dev,
                              std::abs(got - oracle) / std::max(1.0, std::abs(oracle)));
  }

  // Determinant transport: det H_(n1,n2) of the original equals the flipped
  // system's det H_(n2,n1) up to the block-swap sign, for n1 <= n2 - 1.
  int pairs = 0;
  for (int n1 = 0; n1 <= 3; ++n1)
    for (int n2 = n1 + 1; n1 + n2 <= 8 && n2 <= 5; ++n2) {
      const MultiIndex orig{n1, n2};
      const MultiIndex swapped{n2, n1};
      const double det_orig =
          mop::assess_hankel(mop::hankel_matrix(system, orig), system.first_interval())
              .det.real();
      const double det_flip =
          mop::assess_hankel(mop::hankel_matrix(flipped, swapped),
                             flipped.first_interval())
              .det.real();
      const double sign = (n1 * n2) % 2 == 0 ? 1.0 : -1.0;
      report.max_dev =
          std::max(report.max_dev, std::abs(det_flip - sign * det_orig) /
                                       std::max(std::abs(det_orig), 1e-300));
      ++pairs;
    }
  report.trials = kmax + 1 + pairs;
  report.pass = report.max_dev <= report.tol;
  return report;
}

IdentityReport check_flip_uc(const NikishinSystem& system) {
  IdentityReport report;
  report.name = "flip";
  report.tol = 1e-8;

  const NikishinSystem flipped = flip_r2_uc(system);
  // The recovered first measure must reproduce mu_1 = sigma_1.
  const int kmax = 12;
  for (int k = -kmax; k <= kmax; ++k) {
    const Complex orig = system.mus_uc[0].moment(k);
    const Complex got = flipped.mus_uc[1].moment(k);
    report.max_dev = std::max(report.max_dev,
                              std::abs(got - orig) / std::max(1.0, std::abs(orig)));
  }

  // Verdict agreement between (n1, n2) and the flipped (n2, n1).
  int pairs = 0;
  for (int n1 = 1; n1 <= 4; ++n1)
    for (int n2 = n1; n1 + n2 <= 8; ++n2) {
      if ((n1 & 1) != (n2 & 1)) continue;
      const auto v1 = mop::assess_toeplitz(
          mop::toeplitz_matrix(system, MultiIndex{n1, n2}), system.first_arc());
      const auto v2 = mop::assess_toeplitz(
          mop::toeplitz_matrix(flipped, MultiIndex{n2, n1}), flipped.first_arc());
      if (v1.verdict != v2.verdict) report.max_dev = 1.0;
      ++pairs;
    }
  report.trials = 2 * kmax + 1 + pairs;
  report.details.emplace_back("verdict_pairs", std::to_string(pairs));
  report.pass = report.max_dev <= report.tol;
  return report;
}

}  // namespace

IdentityReport check_flip(const NikishinSystem& system) {
  if (system.r() != 2)
    raise(ErrorCode::WrongArity, "the flip identity needs r = 2");
  return system.kind == SystemKind::RealLine ? check_flip_rl(system)
                                             : check_flip_uc(system);
}

IdentityReport check_phase(const NikishinSystem& system, int trials,
                           std::uint64_t seed,
                           const std::optional<MultiIndex>& index_override) {
  if (system.kind != SystemKind::Circle)
    raise(ErrorCode::KindMismatch, "phase runs on circle systems");
  MultiIndex n;
  if (index_override.has_value()) {
    n = *index_override;
  } else {
    std::vector<int> parts(static_cast<std::size_t>(system.r()), 1);
    parts[0] = 3;
    n = MultiIndex(parts);
  }
  std::mt19937_64 rng(seed);
  const auto phase = detkit::phase_check_uc(system, n, trials, rng);

  IdentityReport report;
  report.name = "phase";
  report.trials = trials;
  report.tol = 1e-6;
  report.max_dev = phase.max_deviation;
  report.details.emplace_back("index", n.to_string());
  report.details.emplace_back("mean_phase", fmt(phase.mean_phase));
  report.details.emplace_back("l_mod4", std::to_string(phase.l_mod4));
  report.pass = report.max_dev <= report.tol;
  return report;
}

IdentityReport check_sign(const NikishinSystem& system, int trials,
                          std::uint64_t seed,
                          const std::optional<MultiIndex>& index_override) {
  if (system.kind != SystemKind::RealLine)
    raise(ErrorCode::KindMismatch, "sign runs on real-line systems");
  MultiIndex n;
  if (index_override.has_value()) {
    n = *index_override;
  } else {
    std::vector<int> parts(static_cast<std::size_t>(system.r()), 2);
    parts.back() = system.r() > 1 ? 1 : 2;
    n = MultiIndex(parts);
  }
  std::mt19937_64 rng(seed);
  const auto sign = detkit::sign_check_rl(system, n, trials, rng,
                                          /*enforce_condition=*/!index_override);

  IdentityReport report;
  report.name = "sign";
  report.trials = trials;
  report.tol = 0.5;
  report.max_dev = sign.verdict == detkit::SignVerdict::ConstantSign ? 0.0 : 1.0;
  report.details.emplace_back("index", n.to_string());
  report.details.emplace_back("sign", std::to_string(sign.sign));
  report.details.emplace_back("min_scaled_abs", fmt(sign.min_scaled_abs));
  report.pass = report.max_dev <= report.tol;
  return report;
}

IdentityReport check_perturbation(const NikishinSystem& system, int trials,
                                  std::uint64_t seed) {
  if (system.kind != SystemKind::RealLine || system.r() != 2)
    raise(ErrorCode::KindMismatch, "perturbation runs on real-line r = 2 systems");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> sd(0, 2);
  std::uniform_real_distribution<double> kd(-1.0, 1.0);

  IdentityReport report;
  report.name = "perturbation";
  report.trials = trials;
  report.tol = 1e-10;
  for (int t = 0; t < trials; ++t) {
    const int s = sd(rng);
    std::vector<double> kcoeffs(static_cast<std::size_t>(s) + 1);
    for (auto& k : kcoeffs) k = kd(rng);
    int n2 = std::uniform_int_distribution<int>(s, 7)(rng);
    int n1 = std::uniform_int_distribution<int>(0, n2 - s)(rng);
    if (n1 + n2 < 1 || n1 + n2 > 8) {
      --t;
      continue;
    }
    const auto [det0, det1] =
        mop::perturbation_det_check(system, MultiIndex{n1, n2}, kcoeffs);
    report.max_dev = std::max(
        report.max_dev, std::abs(det0 - det1) / std::max(std::abs(det0), 1e-300));
  }
  report.pass = report.max_dev <= report.tol;
  return report;
}

IdentityReport run_identity(const std::string& which, const NikishinSystem* system,
                            int trials, std::uint64_t seed,
                            const std::optional<MultiIndex>& index_override) {
  auto need_system = [&]() -> const NikishinSystem& {
    if (!system)
      raise(ErrorCode::SchemaError, "identity '" + which + "' needs a system spec");
    return *system;
  };
  if (which == "andreief") return check_andreief(trials, seed);
  if (which == "cauchy-vandermonde") return check_cauchy_vandermonde(trials, seed);
  if (which == "stripping") return check_stripping(need_system(), std::max(trials, 1), seed);
  if (which == "flip") return check_flip(need_system());
  if (which == "phase") return check_phase(need_system(), trials, seed, index_override);
  if (which == "sign") return check_sign(need_system(), trials, seed, index_override);
  if (which == "perturbation") return check_perturbation(need_system(), trials, seed);
  raise(ErrorCode::SchemaError, "unknown identity '" + which + "'");
}

}  // namespace identity
}  // namespace niklab
