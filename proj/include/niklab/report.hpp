#pragma once

#include <string>
#include <vector>

#include "niklab/geometry.hpp"
#include "niklab/identity.hpp"
#include "niklab/scan.hpp"

namespace niklab {
namespace report {

/// Decimal with 17 significant digits (lossless double round trip).
std::string fmt17(double value);

/// Complex as "a+bi" / "a-bi" without commas, safe inside CSV cells.
std::string fmt17(Complex value);

/// CSV with header index,det,scaled_min,verdict,residual,theorem_labels;
/// one row per scanned index, already in lexicographic order.
std::string scan_csv(const scan::ScanResult& result);

/// CSV with header k,re,im.
std::string moments_csv(const std::vector<std::pair<int, Complex>>& rows);

/// CSV with header re,im.
std::string zeros_csv(const std::vector<Complex>& roots);

/// Deterministic identity report text, one "key=value" per line plus the
/// final PASS/FAIL verdict line.
std::string identity_text(const identity::IdentityReport& report);

}  // namespace report
}  // namespace niklab
