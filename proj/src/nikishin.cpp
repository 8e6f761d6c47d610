#include "niklab/nikishin.hpp"

#include <cmath>
#include <limits>

#include "niklab/spectral.hpp"

namespace niklab {

namespace {

void check_gap_rl(const Interval& a, const Interval& b, const BuildOptions& opt) {
  if (!interiors_disjoint(a, b))
    raise(ErrorCode::OverlappingSupports, "supports have overlapping interiors");
  if (!opt.touching_ok && interval_gap(a, b) < opt.min_gap)
    raise(ErrorCode::NonIntegrable,
          "support gap below minimum; set touching_ok to assert integrability");
}

void check_gap_uc(const Arc& a, const Arc& b, const BuildOptions& opt) {
  if (!arc_interiors_disjoint(a, b))
    raise(ErrorCode::OverlappingSupports, "arcs have overlapping interiors");
  if (!opt.touching_ok && arc_gap(a, b) < opt.min_gap)
    raise(ErrorCode::NonIntegrable,
          "arc gap below minimum; set touching_ok to assert integrability");
}

/// Interior sample sweep: constant sign, and (circle) realness of the factor.
void check_sign_rl(const std::function<double(double)>& factor, const Interval& sup,
                   const BuildOptions& opt) {
  int sign = 0;
  for (int i = 0; i < opt.sign_samples; ++i) {
    const double x = sup.lo + (i + 0.5) / opt.sign_samples * sup.length();
    const double v = factor(x);
    const int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    if (s == 0) raise(ErrorCode::SignViolation, "bracket factor vanishes on the support");
    if (sign == 0) sign = s;
    if (s != sign)
      raise(ErrorCode::SignViolation, "bracket factor changes sign on the support");
  }
}

void check_factor_uc(const std::function<Complex(Complex)>& factor, const Arc& sup,
                     const BuildOptions& opt) {
  int sign = 0;
  for (int i = 0; i < opt.sign_samples; ++i) {
    const double theta = sup.alpha + (i + 0.5) / opt.sign_samples * sup.length();
    const Complex v = factor(std::polar(1.0, theta));
    if (std::abs(v.imag()) > opt.realness_tol * std::max(1.0, std::abs(v)))
      raise(ErrorCode::NonRealFactor,
            "i*F factor is not real on the first arc (branch or clearance issue)");
    const int s = v.real() > 0.0 ? 1 : (v.real() < 0.0 ? -1 : 0);
    if (s == 0) raise(ErrorCode::SignViolation, "bracket factor vanishes on the arc");
    if (sign == 0) sign = s;
    if (s != sign)
      raise(ErrorCode::SignViolation,
            "bracket factor changes sign on the arc (F has a zero there)");
  }
}

std::function<double(double)> m_factor_of(const RealMeasure& nu) {
  return [nu](double x) { return nu.m_function(0, Complex(x, 0.0), 0.0).real(); };
}

std::function<Complex(Complex)> if_factor_of(const CircleMeasure& nu) {
  return [nu](Complex z) { return Complex(0.0, 1.0) * nu.caratheodory(z, 0.0); };
}

std::vector<RealMeasure> derive_rl(const std::vector<RealMeasure>& sigmas,
                                   std::size_t from, const BuildOptions& opt) {
  std::vector<RealMeasure> out{sigmas[from]};
  if (from + 1 == sigmas.size()) return out;
  const auto inner = derive_rl(sigmas, from + 1, opt);
  for (const RealMeasure& nu : inner) out.push_back(bracket_rl(sigmas[from], nu, opt));
  return out;
}

std::vector<CircleMeasure> derive_uc(const std::vector<CircleMeasure>& sigmas,
                                     std::size_t from, const BuildOptions& opt) {
  std::vector<CircleMeasure> out{sigmas[from]};
  if (from + 1 == sigmas.size()) return out;
  const auto inner = derive_uc(sigmas, from + 1, opt);
  for (const CircleMeasure& nu : inner) out.push_back(bracket_uc(sigmas[from], nu, opt));
  return out;
}

}  // namespace

GeneratorChainRL GeneratorChainRL::from_measures(std::vector<RealMeasure> sigmas) {
  GeneratorChainRL chain;
  chain.intervals.reserve(sigmas.size());
  for (const RealMeasure& s : sigmas) chain.intervals.push_back(s.support());
  chain.sigmas = std::move(sigmas);
  return chain;
}

GeneratorChainUC GeneratorChainUC::from_measures(std::vector<CircleMeasure> sigmas,
                                                 std::optional<double> t0) {
  GeneratorChainUC chain;
  chain.arcs.reserve(sigmas.size());
  for (const CircleMeasure& s : sigmas) chain.arcs.push_back(s.support());
  chain.sigmas = std::move(sigmas);
  chain.t0 = t0;
  return chain;
}

RealMeasure bracket_rl(const RealMeasure& sigma1, const RealMeasure& sigma2,
                       const BuildOptions& options) {
  check_gap_rl(sigma1.support(), sigma2.support(), options);
  auto factor = m_factor_of(sigma2);
  check_sign_rl(factor, sigma1.support(), options);
  return sigma1.with_extra_factor(factor, options.table_order);
}

CircleMeasure bracket_uc(const CircleMeasure& sigma1, const CircleMeasure& sigma2,
                         const BuildOptions& options) {
  check_gap_uc(sigma1.support(), sigma2.support(), options);
  auto factor = if_factor_of(sigma2);
  check_factor_uc(factor, sigma1.support(), options);
  return sigma1.with_extra_factor(factor, options.table_order);
}

NikishinSystem build_system(const GeneratorChainRL& chain, const BuildOptions& options) {
  if (chain.sigmas.empty()) raise(ErrorCode::WrongArity, "need at least one generator");
  if (chain.intervals.size() != chain.sigmas.size())
    raise(ErrorCode::SizeMismatch, "intervals and generators must match");
  for (std::size_t j = 0; j + 1 < chain.sigmas.size(); ++j)
    check_gap_rl(chain.intervals[j], chain.intervals[j + 1], options);

  NikishinSystem system;
  system.kind = SystemKind::RealLine;
  system.options = options;
  system.sigmas_rl = chain.sigmas;
  system.mus_rl.push_back(chain.sigmas.front());
  system.rn_rl.push_back([](double) { return 1.0; });
  if (chain.sigmas.size() > 1) {
    const auto inner = derive_rl(chain.sigmas, 1, options);
    for (const RealMeasure& nu : inner) {
      system.mus_rl.push_back(bracket_rl(chain.sigmas.front(), nu, options));
      system.rn_rl.push_back(m_factor_of(nu));
    }
  }
  return system;
}

NikishinSystem build_system(const GeneratorChainUC& chain, const BuildOptions& options) {
  if (chain.sigmas.empty()) raise(ErrorCode::WrongArity, "need at least one generator");
  if (chain.arcs.size() != chain.sigmas.size())
    raise(ErrorCode::SizeMismatch, "arcs and generators must match");
  for (std::size_t j = 0; j + 1 < chain.sigmas.size(); ++j)
    check_gap_uc(chain.arcs[j], chain.arcs[j + 1], options);

  const auto [gap_start, gap_len] = largest_uncovered_gap(chain.arcs);
  // A single full-circle measure has no uncovered arc, and also no bracket
  // that would need one; any branch works there since all the integer-moment
  // machinery is branch-free.
  if (gap_len <= 0.0 && chain.sigmas.size() > 1)
    raise(ErrorCode::InvalidGeometry, "arcs must leave an open arc uncovered");
  double t0 = gap_len > 0.0 ? gap_start + 0.5 * gap_len : chain.arcs[0].alpha;
  if (chain.t0.has_value()) {
    t0 = *chain.t0;
    if (gap_len > 0.0)
      for (const Arc& g : chain.arcs)
        if (g.contains_angle(t0))
          raise(ErrorCode::BranchInsideSupport, "t0 lies inside a support arc");
  }
  const BranchCut cut{t0};

  NikishinSystem system;
  system.kind = SystemKind::Circle;
  system.options = options;
  system.branch = cut;
  system.sigmas_uc.reserve(chain.sigmas.size());
  for (const CircleMeasure& s : chain.sigmas)
    system.sigmas_uc.push_back(s.with_branch(cut));
  system.mus_uc.push_back(system.sigmas_uc.front());
  system.rn_uc.push_back([](Complex) { return Complex(1.0, 0.0); });
  if (system.sigmas_uc.size() > 1) {
    const auto inner = derive_uc(system.sigmas_uc, 1, options);
    for (const CircleMeasure& nu : inner) {
      system.mus_uc.push_back(bracket_uc(system.sigmas_uc.front(), nu, options));
      system.rn_uc.push_back(if_factor_of(nu));
    }
  }
  return system;
}

FReport check_F_nonvanishing(const CircleMeasure& sigma2, const Arc& gamma1,
                             int gridsize, double threshold) {
  if (gridsize < 2) raise(ErrorCode::SizeMismatch, "gridsize must be >= 2");
  FReport report;
  report.gridsize = gridsize;
  report.threshold = threshold;
  report.min_abs = std::numeric_limits<double>::infinity();
  for (int i = 0; i < gridsize; ++i) {
    const double theta =
        gamma1.alpha + gamma1.length() * static_cast<double>(i) / (gridsize - 1);
    const Complex f = sigma2.caratheodory(std::polar(1.0, theta), 0.0);
    report.min_abs = std::min(report.min_abs, std::abs(f));
  }
  report.nonvanishing = report.min_abs > threshold;
  return report;
}

NikishinSystem flip_r2_rl(const NikishinSystem& system) {
  if (system.kind != SystemKind::RealLine)
    raise(ErrorCode::KindMismatch, "flip_r2_rl needs a real-line system");
  if (system.r() != 2) raise(ErrorCode::WrongArity, "flip_r2_rl needs r = 2");

  const RealMeasure& sigma2 = system.sigmas_rl[1];
  const double c0 = sigma2.mass();
  const int depth =
      std::min(18, static_cast<int>(sigma2.nodes().size()) / 2);
  const spectral::JacobiCoeffs coeffs = spectral::jacobi_from_measure(sigma2, depth);
  const double b1 = coeffs.b[0];
  const double a1 = coeffs.a[0];
  (void)b1;  // the degree-one remainder (b1 - x)/c0 is dropped by design
  const spectral::JacobiCoeffs stripped = spectral::strip_jacobi(coeffs);
  const spectral::DiscretizedMeasure gauss =
      spectral::gauss_from_jacobi(stripped, stripped.count());

  std::vector<double> weights(gauss.weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i)
    weights[i] = -(a1 * a1 / c0) * gauss.weights[i];
  RealMeasure flipped_gen = RealMeasure::from_nodes(
      sigma2.support(), gauss.nodes, std::move(weights), system.options.table_order);

  GeneratorChainRL chain =
      GeneratorChainRL::from_measures({system.mus_rl[1], flipped_gen});
  return build_system(chain, system.options);
}

NikishinSystem flip_r2_uc(const NikishinSystem& system) {
  if (system.kind != SystemKind::Circle)
    raise(ErrorCode::KindMismatch, "flip_r2_uc needs a circle system");
  if (system.r() != 2) raise(ErrorCode::WrongArity, "flip_r2_uc needs r = 2");

  const CircleMeasure& sigma2 = system.sigmas_uc[1];
  const FReport report = check_F_nonvanishing(sigma2, system.first_arc(),
                                              system.options.sign_samples);
  if (!report.nonvanishing)
    raise(ErrorCode::FVanishes,
          "F_{sigma2} vanishes on the first arc; the flip factor is singular");

  const CircleMeasure mu2 = system.mus_uc[1];
  auto factor = [sigma2](Complex z) {
    return Complex(0.0, -1.0) / sigma2.caratheodory(z, 0.0);
  };
  check_factor_uc(factor, system.first_arc(), system.options);

  NikishinSystem flipped;
  flipped.kind = SystemKind::Circle;
  flipped.options = system.options;
  flipped.branch = system.branch;
  flipped.sigmas_uc = {mu2};  // the second generator stays implicit (1/F route)
  flipped.mus_uc = {mu2, mu2.with_extra_factor(factor, system.options.table_order)};
  flipped.rn_uc.push_back([](Complex) { return Complex(1.0, 0.0); });
  flipped.rn_uc.push_back(factor);
  return flipped;
}

}  // namespace niklab
