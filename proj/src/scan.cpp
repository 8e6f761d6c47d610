#include "niklab/scan.hpp"

#include <algorithm>
#include <exception>

namespace niklab {
namespace scan {

namespace {

bool r2_f_nonvanishing(const NikishinSystem& system) {
  if (system.kind != SystemKind::Circle || system.r() != 2) return false;
  if (system.sigmas_uc.size() < 2) return true;  // flipped system: 1/F route
  return check_F_nonvanishing(system.sigmas_uc[1], system.first_arc(),
                              system.options.sign_samples)
      .nonvanishing;
}

}  // namespace

std::vector<std::string> theorem_labels(const NikishinSystem& system,
                                        const MultiIndex& n, bool f_nonvanishing) {
  std::vector<std::string> labels;
  if (system.kind == SystemKind::RealLine) {
    if (n.almost_nonincreasing()) labels.push_back("real-noninc1");
    if (system.r() == 2) labels.push_back("real-r2-all");
  } else {
    if (n.same_parity()) {
      if (n.nonincreasing()) labels.push_back("uc-noninc-parity");
      if (system.r() == 2 && f_nonvanishing) labels.push_back("uc-r2-parity");
    } else {
      labels.push_back("halfint-convention");
    }
  }
  return labels;
}

std::vector<MultiIndex> admitted_indices(const NikishinSystem& system,
                                         const std::vector<MultiIndex>& grid,
                                         ScanMode mode) {
  const bool fnv = r2_f_nonvanishing(system);
  std::vector<MultiIndex> out;
  for (const MultiIndex& n : grid) {
    if (n.r() != system.r() || n.total() == 0) continue;
    switch (mode) {
      case ScanMode::Theorem: {
        const auto labels = theorem_labels(system, n, fnv);
        bool proved = false;
        for (const auto& l : labels)
          if (l != "halfint-convention") proved = true;
        if (proved) out.push_back(n);
        break;
      }
      case ScanMode::FullGrid:
        if (system.kind == SystemKind::Circle && !n.same_parity()) break;
        out.push_back(n);
        break;
      case ScanMode::ExploreMixedParity:
        out.push_back(n);
        break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

ScanResult run_scan(const NikishinSystem& system, const std::vector<MultiIndex>& grid,
                    ScanMode mode, detkit::Exec exec) {
  const bool fnv = r2_f_nonvanishing(system);
  const std::vector<MultiIndex> indices = admitted_indices(system, grid, mode);
  ScanResult result;
  result.mode = mode;
  result.rows.resize(indices.size());

  const bool parallel = exec == detkit::Exec::Parallel;
  const int count = static_cast<int>(indices.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < count; ++i) {
    try {
      const MultiIndex& n = indices[static_cast<std::size_t>(i)];
      ScanRow row;
      row.index = n;
      row.labels = theorem_labels(system, n, fnv);
      if (system.kind == SystemKind::RealLine) {
        const auto matrix = mop::hankel_matrix(system, n);
        const auto verdict = mop::assess_hankel(matrix, system.first_interval());
        row.det = verdict.det;
        row.scaled_min = verdict.scaled_min;
        row.verdict = verdict.verdict;
        if (verdict.verdict == mop::Verdict::Normal)
          row.residual = mop::type2_poly_rl(system, n).residual;
      } else {
        const bool mixed = !n.same_parity();
        const auto matrix = mop::toeplitz_matrix(system, n, mixed);
        const auto verdict = mop::assess_toeplitz(matrix, system.first_arc());
        row.det = verdict.det;
        row.scaled_min = verdict.scaled_min;
        row.verdict = verdict.verdict;
        if (verdict.verdict == mop::Verdict::Normal)
          row.residual = mop::laurent_poly_uc(system, n, mixed).residual;
      }
      result.rows[static_cast<std::size_t>(i)] = std::move(row);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  for (const ScanRow& row : result.rows)
    if (row.verdict == mop::Verdict::Singular) result.any_singular = true;
  return result;
}

}  // namespace scan
}  // namespace niklab
