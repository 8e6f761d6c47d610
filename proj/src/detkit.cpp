#include "niklab/detkit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <gmpxx.h>
#include <limits>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace niklab {
namespace detkit {

OrderedTuple OrderedTuple::reals(std::vector<double> pts) {
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (!(pts[i - 1] < pts[i]))
      raise(ErrorCode::InvalidGeometry, "tuple points must be strictly increasing");
  return OrderedTuple{std::move(pts)};
}

OrderedTuple OrderedTuple::angles(std::vector<double> thetas, const BranchCut& cut) {
  std::vector<double> normalized(thetas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i)
    normalized[i] = branch_arg(std::polar(1.0, thetas[i]), cut);
  for (std::size_t i = 1; i < normalized.size(); ++i)
    if (!(normalized[i - 1] < normalized[i]))
      raise(ErrorCode::InvalidGeometry,
            "tuple angles must increase in the branch-normalized order");
  return OrderedTuple{std::move(normalized)};
}

namespace {

Eigen::MatrixXd sample_matrix(const FunctionFamilyRL& family, const OrderedTuple& tuple) {
  const auto n = family.entries.size();
  if (n != tuple.points.size())
    raise(ErrorCode::SizeMismatch, "family size must equal tuple size");
  Eigen::MatrixXd m(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) m(j, k) = family.entries[j](tuple.points[k]);
  return m;
}

Eigen::MatrixXcd sample_matrix(const FunctionFamilyUC& family, const OrderedTuple& tuple) {
  const auto n = family.entries.size();
  if (n != tuple.points.size())
    raise(ErrorCode::SizeMismatch, "family size must equal tuple size");
  Eigen::MatrixXcd m(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      m(j, k) = family.entries[j](std::polar(1.0, tuple.points[k]));
  return m;
}

template <class Matrix>
void normalize_rows(Matrix& m) {
  for (Eigen::Index j = 0; j < m.rows(); ++j) {
    const double scale = m.row(j).cwiseAbs().maxCoeff();
    if (scale > 0.0) m.row(j) /= scale;
  }
}

}  // namespace

double chebyshev_det(const FunctionFamilyRL& family, const OrderedTuple& tuple) {
  return sample_matrix(family, tuple).partialPivLu().determinant();
}

Complex chebyshev_det(const FunctionFamilyUC& family, const OrderedTuple& tuple) {
  return sample_matrix(family, tuple).partialPivLu().determinant();
}

double chebyshev_det_scaled(const FunctionFamilyRL& family, const OrderedTuple& tuple) {
  Eigen::MatrixXd m = sample_matrix(family, tuple);
  normalize_rows(m);
  return m.partialPivLu().determinant();
}

Complex chebyshev_det_scaled(const FunctionFamilyUC& family, const OrderedTuple& tuple) {
  Eigen::MatrixXcd m = sample_matrix(family, tuple);
  normalize_rows(m);
  return m.partialPivLu().determinant();
}

FunctionFamilyRL at_family_rl(const NikishinSystem& system, const MultiIndex& n) {
  if (system.kind != SystemKind::RealLine)
    raise(ErrorCode::KindMismatch, "at_family_rl needs a real-line system");
  if (n.r() != system.r())
    raise(ErrorCode::SizeMismatch, "index arity must match the system");
  FunctionFamilyRL family;
  for (int j = 0; j < n.r(); ++j) {
    const auto& rn = system.rn_rl[static_cast<std::size_t>(j)];
    for (int p = 0; p < n.parts[static_cast<std::size_t>(j)]; ++p) {
      family.entries.push_back(
          [rn, p](double x) { return std::pow(x, p) * rn(x); });
      family.labels.push_back("x^" + std::to_string(p) + "*w" + std::to_string(j + 1));
    }
  }
  return family;
}

FunctionFamilyUC at_family_uc(const NikishinSystem& system, const MultiIndex& n) {
  if (system.kind != SystemKind::Circle)
    raise(ErrorCode::KindMismatch, "at_family_uc needs a circle system");
  if (n.r() != system.r())
    raise(ErrorCode::SizeMismatch, "index arity must match the system");
  FunctionFamilyUC family;
  family.branch = system.branch;
  const BranchCut cut = system.branch;
  for (int j = 0; j < n.r(); ++j) {
    const auto& rn = system.rn_uc[static_cast<std::size_t>(j)];
    const int nj = n.parts[static_cast<std::size_t>(j)];
    for (int i = 0; i < nj; ++i) {
      const int doubled = -(nj - 1) + 2 * i;  // exponent -(n_j-1)/2 + i, doubled
      family.entries.push_back([rn, doubled, cut](Complex z) {
        return pow_half(z, doubled, cut) * rn(z);
      });
      std::string power = doubled % 2 == 0 ? std::to_string(doubled / 2)
                                           : std::to_string(doubled) + "/2";
      family.labels.push_back("z^(" + power + ")*w" + std::to_string(j + 1));
    }
  }
  return family;
}

void DiscreteMeasure::validate() const {
  if (locations.empty() || locations.size() != masses.size())
    raise(ErrorCode::ShapeMismatch, "discrete measure needs matching atoms");
  const bool pos = masses.front() > 0.0;
  for (double m : masses) {
    if (m == 0.0 || (m > 0.0) != pos)
      raise(ErrorCode::SignViolation, "atom masses must be nonzero of one sign");
  }
}

namespace {

template <class Integrator>
double andreief_lhs_impl(const std::vector<std::vector<double>>& a_block,
                         const FuncList& f, const FuncList& g,
                         Integrator&& integrate) {
  const int bign = static_cast<int>(g.size());
  const int m = static_cast<int>(f.size());
  if (m < 1 || bign < m)
    raise(ErrorCode::ShapeMismatch, "need N >= M >= 1");
  if (static_cast<int>(a_block.size()) != bign - m)
    raise(ErrorCode::ShapeMismatch, "A must have N - M rows");
  for (const auto& row : a_block)
    if (static_cast<int>(row.size()) != bign)
      raise(ErrorCode::ShapeMismatch, "A must have N columns");

  Eigen::MatrixXd mat(bign, bign);
  for (int j = 0; j < bign - m; ++j)
    for (int k = 0; k < bign; ++k)
      mat(j, k) = a_block[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < bign; ++k)
      mat(bign - m + j, k) =
          integrate([&](double t) { return f[static_cast<std::size_t>(j)](t) *
                                           g[static_cast<std::size_t>(k)](t); });
  return mat.partialPivLu().determinant();
}

}  // namespace

double andreief_lhs(const std::vector<std::vector<double>>& a_block, const FuncList& f,
                    const FuncList& g, const DiscreteMeasure& mu) {
  mu.validate();
  return andreief_lhs_impl(a_block, f, g, [&mu](auto&& fn) {
    double acc = 0.0;
    for (std::size_t i = 0; i < mu.locations.size(); ++i)
      acc += mu.masses[i] * fn(mu.locations[i]);
    return acc;
  });
}

double andreief_lhs(const std::vector<std::vector<double>>& a_block, const FuncList& f,
                    const FuncList& g, const RealMeasure& mu) {
  return andreief_lhs_impl(a_block, f, g,
                           [&mu](auto&& fn) { return mu.integrate(fn); });
}

double andreief_rhs(const std::vector<std::vector<double>>& a_block, const FuncList& f,
                    const FuncList& g, const DiscreteMeasure& mu) {
  mu.validate();
  const int bign = static_cast<int>(g.size());
  const int m = static_cast<int>(f.size());
  if (m < 1 || bign < m)
    raise(ErrorCode::ShapeMismatch, "need N >= M >= 1");
  if (static_cast<int>(a_block.size()) != bign - m)
    raise(ErrorCode::ShapeMismatch, "A must have N - M rows");
  if (mu.size() > 12 || m > 6)
    raise(ErrorCode::TooManyAtoms, "exact exchange sum capped at 12 atoms, M <= 6");

  // Tuples with a repeated atom contribute zero, and the integrand is
  // symmetric, so the 1/M! integral collapses onto increasing index tuples.
  const int atoms = mu.size();
  std::vector<int> idx(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) idx[static_cast<std::size_t>(j)] = j;

  Eigen::MatrixXd big(bign, bign);
  for (int j = 0; j < bign - m; ++j)
    for (int k = 0; k < bign; ++k)
      big(j, k) = a_block[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
  Eigen::MatrixXd small(m, m);

  double acc = 0.0;
  if (atoms < m) return 0.0;
  while (true) {
    double massprod = 1.0;
    for (int j = 0; j < m; ++j) {
      const double y = mu.locations[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
      massprod *= mu.masses[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
      for (int k = 0; k < bign; ++k)
        big(bign - m + j, k) = g[static_cast<std::size_t>(k)](y);
      for (int l = 0; l < m; ++l) small(l, j) = f[static_cast<std::size_t>(l)](y);
    }
    acc += massprod * big.partialPivLu().determinant() *
           small.partialPivLu().determinant();

    int pos = m - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == atoms - m + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < m; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return acc;
}

double cauchy_vandermonde_closed(const std::vector<double>& t,
                                 const std::vector<double>& z, int n1, int n2) {
  if (static_cast<int>(t.size()) != n1 + n2 || static_cast<int>(z.size()) != n2)
    raise(ErrorCode::ShapeMismatch, "need |t| = n1 + n2 and |z| = n2");
  double acc = ((n1 * n2 + n2 * (n2 - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
  for (std::size_t j = 0; j < t.size(); ++j)
    for (std::size_t k = j + 1; k < t.size(); ++k) acc *= t[k] - t[j];
  for (std::size_t j = 0; j < z.size(); ++j)
    for (std::size_t k = j + 1; k < z.size(); ++k) acc *= z[k] - z[j];
  for (double zj : z)
    for (double tk : t) {
      if (tk == zj)
        raise(ErrorCode::CoincidentPoints, "t and z points must be distinct");
      acc /= tk - zj;
    }
  return acc;
}

double cauchy_vandermonde_dense(const std::vector<double>& t,
                                const std::vector<double>& z, int n1, int n2) {
  if (static_cast<int>(t.size()) != n1 + n2 || static_cast<int>(z.size()) != n2)
    raise(ErrorCode::ShapeMismatch, "need |t| = n1 + n2 and |z| = n2");
  const int dim = n1 + n2;
  // The inputs are doubles, hence exact rationals; eliminating over Q gives
  // the determinant of the assembled matrix with zero rounding, which keeps
  // the oracle meaningful even for near-coincident (ill-conditioned) tuples.
  std::vector<std::vector<mpq_class>> m(
      static_cast<std::size_t>(dim), std::vector<mpq_class>(static_cast<std::size_t>(dim)));
  for (int k = 0; k < dim; ++k) {
    const mpq_class tk(t[static_cast<std::size_t>(k)]);
    mpq_class power(1);
    for (int p = 0; p < n1; ++p) {
      m[static_cast<std::size_t>(p)][static_cast<std::size_t>(k)] = power;
      power *= tk;
    }
    for (int j = 0; j < n2; ++j) {
      const mpq_class diff = tk - mpq_class(z[static_cast<std::size_t>(j)]);
      if (diff == 0)
        raise(ErrorCode::CoincidentPoints, "t and z points must be distinct");
      m[static_cast<std::size_t>(n1 + j)][static_cast<std::size_t>(k)] =
          mpq_class(1) / diff;
    }
  }
  mpq_class det(1);
  for (int c = 0; c < dim; ++c) {
    int pivot = -1;
    for (int i = c; i < dim; ++i)
      if (m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) return 0.0;
    if (pivot != c) {
      std::swap(m[static_cast<std::size_t>(pivot)], m[static_cast<std::size_t>(c)]);
      det = -det;
    }
    const mpq_class& lead = m[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
    det *= lead;
    for (int i = c + 1; i < dim; ++i) {
      const mpq_class factor =
          m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] / lead;
      if (factor == 0) continue;
      for (int k = c; k < dim; ++k)
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] -=
            factor * m[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
    }
  }
  return det.get_d();
}

std::vector<double> draw_sorted(std::mt19937_64& rng, double lo, double hi, int count) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> pts(static_cast<std::size_t>(count));
  while (true) {
    for (auto& p : pts) p = dist(rng);
    std::sort(pts.begin(), pts.end());
    bool distinct = true;
    for (std::size_t i = 1; i < pts.size(); ++i)
      if (pts[i] - pts[i - 1] < 1e-10 * (hi - lo)) distinct = false;
    if (distinct) return pts;
  }
}

SignReport sign_check_rl(const NikishinSystem& system, const MultiIndex& n, int trials,
                         std::mt19937_64& rng, bool enforce_condition, Exec exec) {
  if (system.kind != SystemKind::RealLine)
    raise(ErrorCode::KindMismatch, "sign_check_rl needs a real-line system");
  if (enforce_condition && !n.almost_nonincreasing())
    raise(ErrorCode::IndexConditionViolated,
          "index violates the almost-nonincreasing condition; pass "
          "enforce_condition = false to explore");
  const FunctionFamilyRL family = at_family_rl(system, n);
  const Interval sup = system.first_interval();
  const int dim = n.total();

  std::vector<OrderedTuple> tuples;
  tuples.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t)
    tuples.push_back(OrderedTuple::reals(draw_sorted(rng, sup.lo, sup.hi, dim)));

  std::vector<double> dets(static_cast<std::size_t>(trials));
  const bool parallel = exec == Exec::Parallel;
#pragma omp parallel for schedule(static) if (parallel)
  for (int t = 0; t < trials; ++t)
    dets[static_cast<std::size_t>(t)] =
        chebyshev_det_scaled(family, tuples[static_cast<std::size_t>(t)]);

  SignReport report;
  report.trials = trials;
  report.min_scaled_abs = std::numeric_limits<double>::infinity();
  for (double d : dets) {
    report.min_scaled_abs = std::min(report.min_scaled_abs, std::abs(d));
    const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (s == 0) {
      report.verdict = SignVerdict::Vanishing;
      return report;
    }
    if (report.sign == 0) report.sign = s;
    if (s != report.sign) {
      report.verdict = SignVerdict::SignChange;
      return report;
    }
  }
  report.verdict = SignVerdict::ConstantSign;
  return report;
}

PhaseReport phase_check_uc(const NikishinSystem& system, const MultiIndex& n,
                           int trials, std::mt19937_64& rng, Exec exec) {
  if (system.kind != SystemKind::Circle)
    raise(ErrorCode::KindMismatch, "phase_check_uc needs a circle system");
  const FunctionFamilyUC family = at_family_uc(system, n);
  const Arc sup = system.first_arc();
  const int dim = n.total();

  std::vector<OrderedTuple> tuples;
  tuples.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t)
    tuples.push_back(
        OrderedTuple::angles(draw_sorted(rng, sup.alpha, sup.beta, dim), system.branch));

  std::vector<Complex> dets(static_cast<std::size_t>(trials));
  const bool parallel = exec == Exec::Parallel;
#pragma omp parallel for schedule(static) if (parallel)
  for (int t = 0; t < trials; ++t)
    dets[static_cast<std::size_t>(t)] =
        chebyshev_det_scaled(family, tuples[static_cast<std::size_t>(t)]);

  PhaseReport report;
  report.phases.reserve(dets.size());
  Complex mean_dir(0.0, 0.0);
  bool vanished = false;
  for (const Complex& d : dets) {
    if (std::abs(d) == 0.0) {
      vanished = true;
      report.phases.push_back(0.0);
      continue;
    }
    report.phases.push_back(std::arg(d));
    mean_dir += d / std::abs(d);
  }
  if (vanished || std::abs(mean_dir) == 0.0) {
    report.max_deviation = std::numeric_limits<double>::infinity();
    return report;
  }
  report.mean_phase = std::arg(mean_dir);
  for (double phi : report.phases) {
    double delta = std::remainder(phi - report.mean_phase, kTwoPi);
    report.max_deviation = std::max(report.max_deviation, std::abs(delta));
  }
  const double quarter = report.mean_phase / (0.5 * 3.141592653589793238462643);
  const int l = static_cast<int>(std::lround(quarter));
  if (std::abs(report.mean_phase - l * 0.5 * 3.141592653589793238462643) < 1e-3)
    report.l_mod4 = ((l % 4) + 4) % 4;
  return report;
}

}  // namespace detkit

MultiIndex MultiIndex::parse(const std::string& text) {
  std::vector<int> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t bar = text.find('|', start);
    const std::string token =
        text.substr(start, bar == std::string::npos ? std::string::npos : bar - start);
    if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos)
      raise(ErrorCode::SchemaError, "bad multi-index component '" + token + "'");
    parts.push_back(std::stoi(token));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return MultiIndex(std::move(parts));
}

std::vector<MultiIndex> index_grid(int r, int max_total) {
  std::vector<MultiIndex> out;
  std::vector<int> cur(static_cast<std::size_t>(r), 0);
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == r - 1) {
      for (int v = 0; v <= remaining; ++v) {
        cur[static_cast<std::size_t>(pos)] = v;
        MultiIndex idx(cur);
        if (idx.total() >= 1) out.push_back(idx);
      }
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      cur[static_cast<std::size_t>(pos)] = v;
      rec(pos + 1, remaining - v);
    }
  };
  rec(0, max_total);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace niklab
