#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "niklab/measure.hpp"

namespace niklab {

enum class SystemKind { RealLine, Circle };

struct BuildOptions {
  double min_gap = 1e-6;       // smallest allowed gap between consecutive supports
  bool touching_ok = false;    // accept touching supports (integrability asserted
                               // by the caller)
  int table_order = 48;        // eager moment depth, 4 * max scan degree
  double realness_tol = 1e-10; // tolerance for i*F factors on the circle
  int sign_samples = 200;      // sample count for the sign-definiteness sweep
};

struct GeneratorChainRL {
  std::vector<Interval> intervals;
  std::vector<RealMeasure> sigmas;

  static GeneratorChainRL from_measures(std::vector<RealMeasure> sigmas);
};

struct GeneratorChainUC {
  std::vector<Arc> arcs;
  std::vector<CircleMeasure> sigmas;
  std::optional<double> t0;  // branch cut; auto-chosen in the largest gap if unset

  static GeneratorChainUC from_measures(std::vector<CircleMeasure> sigmas,
                                        std::optional<double> t0 = std::nullopt);
};

/// Derived system (mu_1..mu_r), all supported on the first support, together
/// with the chain of Radon-Nikodym factors against sigma_1 (rn[0] == 1).
/// Immutable after build; safe for concurrent reads.
struct NikishinSystem {
  SystemKind kind = SystemKind::RealLine;
  BuildOptions options;
  BranchCut branch;

  std::vector<RealMeasure> sigmas_rl;
  std::vector<RealMeasure> mus_rl;
  std::vector<std::function<double(double)>> rn_rl;

  std::vector<CircleMeasure> sigmas_uc;
  std::vector<CircleMeasure> mus_uc;
  std::vector<std::function<Complex(Complex)>> rn_uc;

  int r() const {
    return static_cast<int>(kind == SystemKind::RealLine ? mus_rl.size()
                                                         : mus_uc.size());
  }
  const Interval& first_interval() const { return mus_rl.front().support(); }
  const Arc& first_arc() const { return mus_uc.front().support(); }
};

/// m_{sigma2}(x) d sigma1(x); supports must have disjoint interiors.
RealMeasure bracket_rl(const RealMeasure& sigma1, const RealMeasure& sigma2,
                       const BuildOptions& options = {});

/// i F_{sigma2}(z) d sigma1(z); the factor must be real on the first arc.
CircleMeasure bracket_uc(const CircleMeasure& sigma1, const CircleMeasure& sigma2,
                         const BuildOptions& options = {});

NikishinSystem build_system(const GeneratorChainRL& chain,
                            const BuildOptions& options = {});
NikishinSystem build_system(const GeneratorChainUC& chain,
                            const BuildOptions& options = {});

struct FReport {
  double min_abs = 0.0;
  double threshold = 1e-6;
  bool nonvanishing = false;
  int gridsize = 0;
};

/// min |F_{sigma2}| over a uniform grid of the arc, endpoints included.
FReport check_F_nonvanishing(const CircleMeasure& sigma2, const Arc& gamma1,
                             int gridsize, double threshold = 1e-6);

/// r = 2 swap on the real line via the stripped recurrence data of sigma_2.
/// Returns N(mu_2, -a_1^2 sigma_2^{(1)}), the pair whose moment determinants
/// at (n_2, n_1) reproduce the original ones at (n_1, n_2).
NikishinSystem flip_r2_rl(const NikishinSystem& system);

/// r = 2 swap on the circle: mu_1 regained from mu_2 through the factor
/// -i / F_{sigma2}. Requires F_{sigma2} nonvanishing on the first arc.
NikishinSystem flip_r2_uc(const NikishinSystem& system);

}  // namespace niklab
