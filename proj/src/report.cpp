#include "niklab/report.hpp"

#include <cstdio>

namespace niklab {
namespace report {

std::string fmt17(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string fmt17(Complex value) {
  if (value.imag() == 0.0) return fmt17(value.real());
  std::string out = fmt17(value.real());
  if (value.imag() >= 0.0) out += "+";
  out += fmt17(value.imag());
  out += "i";
  return out;
}

std::string scan_csv(const scan::ScanResult& result) {
  std::string out = "index,det,scaled_min,verdict,residual,theorem_labels\n";
  for (const scan::ScanRow& row : result.rows) {
    out += row.index.to_string();
    out += ',';
    out += fmt17(row.det);
    out += ',';
    out += fmt17(row.scaled_min);
    out += ',';
    out += mop::to_string(row.verdict);
    out += ',';
    out += row.residual ? fmt17(*row.residual) : std::string("NA");
    out += ',';
    for (std::size_t i = 0; i < row.labels.size(); ++i) {
      if (i) out += ';';
      out += row.labels[i];
    }
    out += '\n';
  }
  return out;
}

std::string moments_csv(const std::vector<std::pair<int, Complex>>& rows) {
  std::string out = "k,re,im\n";
  for (const auto& [k, c] : rows) {
    out += std::to_string(k);
    out += ',';
    out += fmt17(c.real());
    out += ',';
    out += fmt17(c.imag());
    out += '\n';
  }
  return out;
}

std::string zeros_csv(const std::vector<Complex>& roots) {
  std::string out = "re,im\n";
  for (const Complex& z : roots) {
    out += fmt17(z.real());
    out += ',';
    out += fmt17(z.imag());
    out += '\n';
  }
  return out;
}

std::string identity_text(const identity::IdentityReport& report) {
  std::string out;
  out += "identity=" + report.name + "\n";
  out += "trials=" + std::to_string(report.trials) + "\n";
  for (const auto& [key, value] : report.details) out += key + "=" + value + "\n";
  out += "max_dev=" + fmt17(report.max_dev) + "\n";
  out += "tol=" + fmt17(report.tol) + "\n";
  out += report.pass ? "PASS\n" : "FAIL\n";
  return out;
}

}  // namespace report
}  // namespace niklab
