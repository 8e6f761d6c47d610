#pragma once

#include <optional>
#include <string>

#include "niklab/detkit.hpp"
#include "niklab/mop.hpp"

namespace niklab {
namespace scan {

enum class ScanMode { Theorem, FullGrid, ExploreMixedParity };

struct ScanRow {
  MultiIndex index;
  Complex det{0.0, 0.0};
  double scaled_min = 0.0;
  mop::Verdict verdict = mop::Verdict::Inconclusive;
  std::optional<double> residual;
  std::vector<std::string> labels;
};

struct ScanResult {
  ScanMode mode = ScanMode::Theorem;
  std::vector<ScanRow> rows;
  bool any_singular = false;
};

/// Indices admitted by the mode: Theorem keeps those covered by a proved
/// statement for the system's kind and arity, FullGrid keeps every index the
/// moment matrices are defined for, ExploreMixedParity keeps everything.
std::vector<MultiIndex> admitted_indices(const NikishinSystem& system,
                                         const std::vector<MultiIndex>& grid,
                                         ScanMode mode);

/// Theorem labels attached to one index (empty when none applies).
std::vector<std::string> theorem_labels(const NikishinSystem& system,
                                        const MultiIndex& n, bool f_nonvanishing);

/// Verdict table over the admitted indices, sorted lexicographically.
/// Rows are computed independently per index; the parallel kernel and the
/// serial reference produce identical tables.
ScanResult run_scan(const NikishinSystem& system, const std::vector<MultiIndex>& grid,
                    ScanMode mode, detkit::Exec exec = detkit::Exec::Parallel);

inline ScanResult run_scan_serial(const NikishinSystem& system,
                                  const std::vector<MultiIndex>& grid, ScanMode mode) {
  return run_scan(system, grid, mode, detkit::Exec::Serial);
}

}  // namespace scan
}  // namespace niklab
