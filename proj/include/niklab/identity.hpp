#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "niklab/nikishin.hpp"
#include "niklab/multi_index.hpp"

namespace niklab {
namespace identity {

/// Outcome of one identity run: maximal observed deviation against the
/// identity's pinned tolerance, plus named extras for the report.
struct IdentityReport {
  std::string name;
  int trials = 0;
  double max_dev = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::vector<std::pair<std::string, std::string>> details;
};

inline const std::vector<std::string>& identity_names() {
  static const std::vector<std::string> names = {
      "andreief", "cauchy-vandermonde", "stripping", "flip",
      "phase",    "sign",               "perturbation"};
  return names;
}

/// Runs one named identity. `system` is required for stripping, flip, phase,
/// sign and perturbation; andreief and cauchy-vandermonde are self-contained
/// random checks. `index_override` opts phase/sign into exploratory indices.
IdentityReport run_identity(const std::string& which,
                            const NikishinSystem* system, int trials,
                            std::uint64_t seed,
                            const std::optional<MultiIndex>& index_override = {});

// The individual checks (the dispatcher above is a thin switch).
IdentityReport check_andreief(int trials, std::uint64_t seed);
IdentityReport check_cauchy_vandermonde(int trials, std::uint64_t seed);
IdentityReport check_stripping(const NikishinSystem& system, int points,
                               std::uint64_t seed);
IdentityReport check_flip(const NikishinSystem& system);
IdentityReport check_phase(const NikishinSystem& system, int trials,
                           std::uint64_t seed,
                           const std::optional<MultiIndex>& index_override = {});
IdentityReport check_sign(const NikishinSystem& system, int trials,
                          std::uint64_t seed,
                          const std::optional<MultiIndex>& index_override = {});
IdentityReport check_perturbation(const NikishinSystem& system, int trials,
                                  std::uint64_t seed);

}  // namespace identity
}  // namespace niklab
