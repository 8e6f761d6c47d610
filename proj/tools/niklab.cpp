#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include "niklab/config.hpp"
#include "niklab/identity.hpp"
#include "niklab/mop.hpp"
#include "niklab/report.hpp"
#include "niklab/scan.hpp"

namespace {

using namespace niklab;

constexpr int kExitOk = 0;
constexpr int kExitSchema = 2;
constexpr int kExitBuild = 3;
constexpr int kExitVerdict = 4;
constexpr int kExitIdentity = 5;

int exit_code_for(const Error& err) {
  switch (err.code()) {
    case ErrorCode::SchemaError:
    case ErrorCode::KindMismatch:
    case ErrorCode::WrongArity:
      return kExitSchema;
    default:
      return kExitBuild;
  }
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

NikishinSystem build_or_exit(const std::string& spec_path) {
  config::SystemSpec spec = config::load_system_spec(spec_path);  // schema errors
  try {
    return config::build_from_spec(spec);
  } catch (const Error& err) {
    std::cerr << "build error: " << err.what() << "\n";
    std::exit(kExitBuild);
  }
}

scan::ScanMode parse_mode(const std::string& mode) {
  if (mode == "theorem") return scan::ScanMode::Theorem;
  if (mode == "full-grid") return scan::ScanMode::FullGrid;
  if (mode == "explore-mixed-parity") return scan::ScanMode::ExploreMixedParity;
  raise(ErrorCode::SchemaError, "unknown mode '" + mode + "'");
}

int cmd_moments(const std::string& spec_path, int j, int kmax,
                const std::string& out_path) {
  const NikishinSystem system = build_or_exit(spec_path);
  if (j < 1 || j > system.r())
    raise(ErrorCode::SchemaError, "measure index j out of range 1..r");
  if (kmax < 0) raise(ErrorCode::SchemaError, "kmax must be >= 0");
  std::vector<std::pair<int, Complex>> rows;
  for (int k = 0; k <= kmax; ++k) {
    const Complex c = system.kind == SystemKind::RealLine
                          ? Complex(system.mus_rl[static_cast<std::size_t>(j - 1)].moment(k), 0.0)
                          : system.mus_uc[static_cast<std::size_t>(j - 1)].moment(k);
    rows.emplace_back(k, c);
  }
  emit(report::moments_csv(rows), out_path);
  return kExitOk;
}

int cmd_normality_scan(const std::string& spec_path, int max_degree,
                       const std::string& mode_name, const std::string& out_path) {
  const scan::ScanMode mode = parse_mode(mode_name);
  if (max_degree < 1 || max_degree > 12)
    raise(ErrorCode::SchemaError, "--max-degree must be between 1 and 12");
  const NikishinSystem system = build_or_exit(spec_path);
  const auto grid = index_grid(system.r(), max_degree);
  const auto result = scan::run_scan(system, grid, mode);
  emit(report::scan_csv(result), out_path);
  const bool assertive = mode != scan::ScanMode::ExploreMixedParity;
  return (assertive && result.any_singular) ? kExitVerdict : kExitOk;
}

int cmd_identity_check(const std::string& spec_path, const std::string& which,
                       int trials, std::uint64_t seed, const std::string& index_text,
                       const std::string& out_path) {
  bool known = false;
  for (const auto& name : identity::identity_names())
    if (name == which) known = true;
  if (!known) raise(ErrorCode::SchemaError, "unknown identity '" + which + "'");

  std::optional<NikishinSystem> system;
  if (which != "andreief" && which != "cauchy-vandermonde")
    system = build_or_exit(spec_path);
  std::optional<MultiIndex> index;
  if (!index_text.empty()) index = MultiIndex::parse(index_text);

  identity::IdentityReport result;
  try {
    result = identity::run_identity(which, system ? &*system : nullptr, trials, seed,
                                    index);
  } catch (const Error& err) {
    if (err.code() == ErrorCode::FVanishes) {
      // The identity's hypothesis fails on this system; report and flag it.
      result.name = which;
      result.trials = trials;
      result.max_dev = std::numeric_limits<double>::infinity();
      result.tol = 0.0;
      result.pass = false;
      result.details.emplace_back("hypothesis", err.what());
      emit(report::identity_text(result), out_path);
      return kExitIdentity;
    }
    throw;
  }
  emit(report::identity_text(result), out_path);
  return result.pass ? kExitOk : kExitIdentity;
}

int cmd_zeros(const std::string& spec_path, const std::string& index_text,
              const std::string& out_path) {
  if (index_text.empty()) raise(ErrorCode::SchemaError, "--index is required");
  const MultiIndex n = MultiIndex::parse(index_text);
  const NikishinSystem system = build_or_exit(spec_path);
  if (n.r() != system.r())
    raise(ErrorCode::SchemaError, "index arity must match the system");

  std::vector<Complex> roots;
  if (system.kind == SystemKind::RealLine) {
    const auto verdict = mop::normality_rl(system, n);
    if (verdict.verdict != mop::Verdict::Normal) {
      std::cerr << "index " << n.to_string() << " is "
                << mop::to_string(verdict.verdict) << "; no polynomial emitted\n";
      return kExitVerdict;
    }
    roots = mop::zeros(mop::type2_poly_rl(system, n));
  } else {
    const auto verdict = mop::normality_uc(system, n);
    if (verdict.verdict != mop::Verdict::Normal) {
      std::cerr << "index " << n.to_string() << " is "
                << mop::to_string(verdict.verdict) << "; no polynomial emitted\n";
      return kExitVerdict;
    }
    roots = mop::zeros(mop::laurent_poly_uc(system, n));
  }
  emit(report::zeros_csv(roots), out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nikishin-system moment laboratory"};
  app.require_subcommand(1);

  std::string spec_path, out_path, mode = "theorem", which, index_text;
  int j = 1, kmax = 8, max_degree = 8, trials = 100;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--spec", spec_path, "system spec file (JSON)")->required();
    cmd->add_option("--out", out_path, "output file (default: stdout)");
  };

  CLI::App* moments = app.add_subcommand("moments", "moment table of one measure");
  add_common(moments);
  moments->add_option("--j", j, "measure index, 1-based");
  moments->add_option("--kmax", kmax, "largest moment order");

  CLI::App* scan_cmd = app.add_subcommand("normality-scan", "verdict table over an index grid");
  add_common(scan_cmd);
  scan_cmd->add_option("--max-degree", max_degree, "largest |n| scanned");
  scan_cmd->add_option("--mode", mode, "theorem | full-grid | explore-mixed-parity");

  CLI::App* identity = app.add_subcommand("identity-check", "verify one determinant/spectral identity");
  add_common(identity);
  identity->add_option("--which", which, "identity name")->required();
  identity->add_option("--trials", trials, "random instances");
  identity->add_option("--seed", seed, "random seed");
  identity->add_option("--index", index_text, "multi-index override, e.g. 3|1");

  CLI::App* zeros_cmd = app.add_subcommand("zeros", "roots of the polynomial at an index");
  add_common(zeros_cmd);
  zeros_cmd->add_option("--index", index_text, "multi-index, e.g. 2|2")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? 0 : kExitSchema;
  }

  try {
    if (moments->parsed()) return cmd_moments(spec_path, j, kmax, out_path);
    if (scan_cmd->parsed()) return cmd_normality_scan(spec_path, max_degree, mode, out_path);
    if (identity->parsed())
      return cmd_identity_check(spec_path, which, trials, seed, index_text, out_path);
    if (zeros_cmd->parsed()) return cmd_zeros(spec_path, index_text, out_path);
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return exit_code_for(err);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitBuild;
  }
  return kExitSchema;
}
