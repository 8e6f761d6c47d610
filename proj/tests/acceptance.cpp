// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Usage: acceptance [path-to-niklab-cli]

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "niklab/detkit.hpp"
#include "niklab/identity.hpp"
#include "niklab/mop.hpp"
#include "niklab/nikishin.hpp"
#include "niklab/report.hpp"
#include "niklab/scan.hpp"
#include "niklab/spectral.hpp"

using namespace niklab;

namespace {

int failures = 0;
std::string cli_path;

struct Check {
  std::vector<std::string> problems;

  void require(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
};

void criterion(int id, const std::string& summary, double budget_seconds,
               const std::function<void(Check&)>& body) {
  Check check;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(check);
  } catch (const std::exception& err) {
    check.problems.push_back(std::string("exception: ") + err.what());
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (elapsed > budget_seconds)
    check.problems.push_back("runtime " + std::to_string(elapsed) + "s over budget " +
                             std::to_string(budget_seconds) + "s");
  if (check.problems.empty()) {
    std::printf("[PASS] criterion %2d: %s (%.2fs)\n", id, summary.c_str(), elapsed);
  } else {
    ++failures;
    std::printf("[FAIL] criterion %2d: %s (%.2fs)\n", id, summary.c_str(), elapsed);
    for (const std::string& problem : check.problems)
      std::printf("       - %s\n", problem.c_str());
  }
  std::fflush(stdout);
}

RealMeasure uniform_on(double lo, double hi) {
  return RealMeasure::from_weight(Interval{lo, hi}, WeightSpec{}, 200);
}

CircleMeasure uniform_arc(double alpha, double beta) {
  return CircleMeasure::from_weight(Arc{alpha, beta}, WeightSpec{}, 200, BranchCut{});
}

CircleMeasure cosine_full_circle() {
  WeightSpec w;
  w.kind = WeightKind::Cosine;
  w.amplitude = 1.0;
  return CircleMeasure::from_weight(Arc{0.0, kTwoPi}, w, 200, BranchCut{});
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

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  RunResult result;
  const std::string cmd = cli_path + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return result;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) result.out.append(buf, got);
  result.exit_code = WEXITSTATUS(pclose(pipe));
  return result;
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << text;
  return path.string();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc >= 2) cli_path = argv[1];

  criterion(1, "classical moment matrices are positive definite up to size 8", 1.0,
            [](Check& check) {
              const RealMeasure mu = uniform_on(0.0, 1.0);
              for (int n = 1; n <= 8; ++n) {
                Eigen::MatrixXd h(n, n);
                for (int i = 0; i < n; ++i)
                  for (int j = 0; j < n; ++j) h(i, j) = mu.moment(i + j);
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
                check.require(eig.eigenvalues()(0) > 0.0,
                              "hankel size " + std::to_string(n) + " not positive");
              }
              const CircleMeasure cosw = cosine_full_circle();
              for (int n = 1; n <= 8; ++n) {
                Eigen::MatrixXcd t(n, n);
                for (int j = 0; j < n; ++j)
                  for (int k = 0; k < n; ++k) t(j, k) = cosw.moment(k - j);
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(t);
                check.require(eig.eigenvalues()(0) > 0.0,
                              "toeplitz size " + std::to_string(n) + " not positive");
              }
            });

  criterion(2, "exchange identity over 200 random discrete instances", 5.0,
            [](Check& check) {
              const auto report = identity::check_andreief(200, 0);
              check.require(report.max_dev <= 1e-12,
                            "max deviation " + report::fmt17(report.max_dev));
            });

  criterion(3, "closed product form matches the dense determinant", 2.0,
            [](Check& check) {
              const auto report = identity::check_cauchy_vandermonde(200, 0);
              check.require(report.max_dev <= 1e-10,
                            "max relative deviation " + report::fmt17(report.max_dev));
            });

  criterion(4, "real-line theorem scan, r=3, |n| <= 9", 30.0, [](Check& check) {
    const NikishinSystem sys = real_r3();
    const auto grid = index_grid(3, 9);
    const auto result = scan::run_scan(sys, grid, scan::ScanMode::Theorem);
    check.require(!result.rows.empty(), "empty scan");
    for (const auto& row : result.rows) {
      check.require(row.index.almost_nonincreasing(),
                    "filter admitted " + row.index.to_string());
      if (row.verdict != mop::Verdict::Normal)
        check.problems.push_back("index " + row.index.to_string() + " verdict " +
                                 mop::to_string(row.verdict));
      else if (!row.residual || *row.residual > 1e-8)
        check.problems.push_back("index " + row.index.to_string() +
                                 " residual above 1e-8");
    }
  });

  criterion(5, "every r=2 real index with |n| <= 10 is normal", 10.0,
            [](Check& check) {
              const NikishinSystem sys = real_r2();
              const auto grid = index_grid(2, 10);
              const auto result =
                  scan::run_scan(sys, grid, scan::ScanMode::FullGrid);
              check.require(result.rows.size() == grid.size(), "missing rows");
              for (const auto& row : result.rows)
                if (row.verdict != mop::Verdict::Normal)
                  check.problems.push_back("index " + row.index.to_string() +
                                           " verdict " + mop::to_string(row.verdict) +
                                           " scaled_min " +
                                           report::fmt17(row.scaled_min));
            });

  criterion(6, "circle theorem scan: same-parity nonincreasing pairs, |n| <= 8", 60.0,
            [](Check& check) {
              const NikishinSystem sys = circle_r2();
              int tested = 0;
              for (int n1 = 0; n1 <= 8; ++n1)
                for (int n2 = 0; n2 <= n1; ++n2) {
                  if (n1 + n2 < 1 || n1 + n2 > 8) continue;
                  if ((n1 & 1) != (n2 & 1)) continue;
                  const MultiIndex n{n1, n2};
                  const auto verdict = mop::normality_uc(sys, n);
                  ++tested;
                  if (verdict.verdict != mop::Verdict::Normal)
                    check.problems.push_back("index " + n.to_string() + " verdict " +
                                             mop::to_string(verdict.verdict));
                  else if (!verdict.residual || *verdict.residual > 1e-8)
                    check.problems.push_back("index " + n.to_string() +
                                             " residual above 1e-8");
                }
              check.require(tested >= 20, "too few indices tested");
            });

  criterion(7, "phase invariant at (3,1) and the r=1 ladder base case", 10.0,
            [](Check& check) {
              const NikishinSystem sys = circle_r2();
              std::mt19937_64 rng(0);
              const auto pair = detkit::phase_check_uc(sys, MultiIndex{3, 1}, 100, rng);
              check.require(pair.max_deviation <= 1e-6,
                            "pair deviation " + report::fmt17(pair.max_deviation));
              check.require(pair.l_mod4 != detkit::PhaseReport::kUnresolved,
                            "phase not a quarter turn");

              const NikishinSystem base =
                  build_system(GeneratorChainUC::from_measures({uniform_arc(0.3, 1.3)}));
              const auto cubic = detkit::phase_check_uc(base, MultiIndex{3}, 100, rng);
              check.require(cubic.max_deviation <= 1e-6,
                            "base deviation " + report::fmt17(cubic.max_deviation));
              // Expected i^{(2 k1 - 1)(k1 - 1)} with k1 = 2: a phase of -pi/2.
              const double offset = std::abs(
                  std::remainder(cubic.mean_phase + 0.5 * 3.141592653589793, kTwoPi));
              check.require(offset <= 1e-6,
                            "base phase off by " + report::fmt17(offset));
              check.require(cubic.l_mod4 == 3,
                            "expected l = 3 mod 4, got " + std::to_string(cubic.l_mod4));
            });

  criterion(8, "sign constancy at (2,2,1) over 100 ordered tuples", 5.0,
            [](Check& check) {
              const NikishinSystem sys = real_r3();
              std::mt19937_64 rng(0);
              const auto report =
                  detkit::sign_check_rl(sys, MultiIndex{2, 2, 1}, 100, rng);
              check.require(report.verdict == detkit::SignVerdict::ConstantSign,
                            "sign not constant");
              check.require(report.min_scaled_abs > 0.0, "vanishing determinant");
            });

  criterion(9, "stripping relation on [0,1] with exact first coefficients", 2.0,
            [](Check& check) {
              const RealMeasure mu = uniform_on(0.0, 1.0);
              for (int k = 0; k < 20; ++k) {
                const Complex z =
                    Complex(0.5, 0.0) + std::polar(1.1, kTwoPi * k / 20.0);
                if (distance_to_interval(z, mu.support()) < 0.5) {
                  check.problems.push_back("test point too close to the support");
                  continue;
                }
                const double residual = spectral::stripping_residual(mu, z);
                if (residual > 1e-9)
                  check.problems.push_back("residual " + report::fmt17(residual) +
                                           " at point " + std::to_string(k));
              }
              std::vector<double> moments(26);
              for (int k = 0; k < 26; ++k) moments[static_cast<std::size_t>(k)] = mu.moment(k);
              const auto coeffs = spectral::jacobi_from_moments(moments, 2);
              check.require(std::abs(coeffs.b[0] - 0.5) <= 1e-12,
                            "b1 = " + report::fmt17(coeffs.b[0]));
              check.require(std::abs(coeffs.a[0] * coeffs.a[0] - 1.0 / 12.0) <= 1e-12,
                            "a1^2 = " + report::fmt17(coeffs.a[0] * coeffs.a[0]));
            });

  criterion(10, "reciprocal recurrence data for (1+cos)/2pi", 2.0, [](Check& check) {
    const CircleMeasure cosw = cosine_full_circle();
    std::vector<Complex> moments(10);
    for (int k = 0; k < 10; ++k) moments[static_cast<std::size_t>(k)] = cosw.moment(k);
    const auto alphas = spectral::verblunsky_from_moments(moments, 9);
    check.require(std::abs(alphas.alpha[0] - Complex(0.5, 0.0)) <= 1e-12,
                  "alpha_0 = " + report::fmt17(alphas.alpha[0].real()));
    const double dev = spectral::reciprocal_F_check(cosw, 8);
    check.require(dev <= 1e-9, "series product deviation " + report::fmt17(dev));
  });

  criterion(11, "determinants survive the 50 random row perturbations", 5.0,
            [](Check& check) {
              const auto report = identity::check_perturbation(real_r2(), 50, 0);
              check.require(report.max_dev <= 1e-10,
                            "max relative deviation " + report::fmt17(report.max_dev));
            });

  criterion(12, "circle flip swaps verdicts for same-parity pairs, |n| <= 8", 60.0,
            [](Check& check) {
              const NikishinSystem sys = circle_r2();
              const auto fcheck =
                  check_F_nonvanishing(sys.sigmas_uc[1], sys.first_arc(), 200);
              check.require(fcheck.nonvanishing, "F vanishes on the first arc");
              const NikishinSystem flipped = flip_r2_uc(sys);
              int tested = 0;
              for (int n1 = 1; n1 <= 8; ++n1)
                for (int n2 = n1; n1 + n2 <= 8; ++n2) {
                  if ((n1 & 1) != (n2 & 1)) continue;
                  const auto direct = mop::assess_toeplitz(
                      mop::toeplitz_matrix(sys, MultiIndex{n1, n2}), sys.first_arc());
                  const auto swapped = mop::assess_toeplitz(
                      mop::toeplitz_matrix(flipped, MultiIndex{n2, n1}),
                      flipped.first_arc());
                  ++tested;
                  if (direct.verdict != swapped.verdict)
                    check.problems.push_back(
                        "verdicts differ at (" + std::to_string(n1) + "," +
                        std::to_string(n2) + "): " + mop::to_string(direct.verdict) +
                        " vs " + mop::to_string(swapped.verdict));
                }
              check.require(tested >= 8, "too few pairs tested");
            });

  criterion(13, "mixed-parity exploration reports and asserts nothing", 30.0,
            [](Check& check) {
              const NikishinSystem sys = circle_r2();
              const auto grid = index_grid(2, 8);
              const auto result =
                  scan::run_scan(sys, grid, scan::ScanMode::ExploreMixedParity);
              check.require(result.rows.size() == grid.size(),
                            "expected one row per index");
              const std::string csv = report::scan_csv(result);
              check.require(std::count(csv.begin(), csv.end(), '\n') ==
                                static_cast<long>(grid.size()) + 1,
                            "csv row count mismatch");
            });

  criterion(14, "CLI determinism and exit-code contract", 5.0, [](Check& check) {
    if (cli_path.empty()) {
      check.problems.push_back("no CLI path supplied");
      return;
    }
    const std::string real_spec = write_file("acc_real.json", R"({
      "kind": "real",
      "generators": [
        {"support": [0.0, 1.0], "weight": {"kind": "uniform"}},
        {"support": [2.0, 3.0], "weight": {"kind": "uniform"}}
      ]
    })");
    const std::string circle_spec = write_file("acc_circle.json", R"({
      "kind": "circle",
      "generators": [
        {"support": [0.3, 1.3], "weight": {"kind": "uniform"}},
        {"support": [2.0, 3.0], "weight": {"kind": "uniform"}}
      ]
    })");
    const std::string pinned_spec = write_file("acc_pinned.json", R"({
      "kind": "circle",
      "generators": [
        {"support": [5.6415926535897931, 6.1415926535897931], "weight": {"kind": "uniform"}},
        {"support": [2.0, 3.0], "weight": {"kind": "uniform"}}
      ]
    })");

    for (const std::string cmd :
         {"moments --spec " + real_spec + " --j 2 --kmax 8",
          "normality-scan --spec " + circle_spec + " --max-degree 6 --mode theorem",
          "identity-check --spec " + real_spec +
              " --which perturbation --trials 20 --seed 11",
          "zeros --spec " + real_spec + " --index '2|2'"}) {
      const RunResult a = run_cli(cmd);
      const RunResult b = run_cli(cmd);
      check.require(a.exit_code == 0, "exit nonzero for: " + cmd);
      check.require(a.exit_code == b.exit_code && a.out == b.out,
                    "nondeterministic output for: " + cmd);
    }
    check.require(run_cli("moments --spec /nonexistent.json").exit_code == 2,
                  "schema failure must exit 2");
    const std::string overlap = write_file("acc_overlap.json", R"({
      "kind": "real",
      "generators": [
        {"support": [0.0, 2.0], "weight": {"kind": "uniform"}},
        {"support": [1.0, 3.0], "weight": {"kind": "uniform"}}
      ]
    })");
    check.require(run_cli("moments --spec " + overlap).exit_code == 3,
                  "build failure must exit 3");
    check.require(
        run_cli("zeros --spec " + pinned_spec + " --index '4|4'").exit_code == 4,
        "verdict failure must exit 4");
    check.require(run_cli("identity-check --spec " + pinned_spec +
                          " --which flip --trials 5")
                          .exit_code == 5,
                  "identity failure must exit 5");
    check.require(run_cli("identity-check --spec " + real_spec +
                          " --which fermat --trials 5")
                          .exit_code == 2,
                  "unknown identity must exit 2");
  });

  if (failures == 0) {
    std::printf("acceptance: all 14 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", failures);
  return 1;
}
