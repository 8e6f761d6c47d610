#pragma once

#include <optional>
#include <string>
#include <vector>

#include "niklab/nikishin.hpp"

namespace niklab {
namespace config {

struct GeneratorSpec {
  std::vector<double> support;  // [lo, hi] or [alpha, beta]
  WeightSpec weight;
};

/// One system per document. Numbers are plain decimals; field names are
/// stable so spec files diff cleanly.
struct SystemSpec {
  std::string kind;  // "real" | "circle"
  std::vector<GeneratorSpec> generators;
  std::optional<double> branch_t0;
  int quad_order = 200;
  bool touching_ok = false;
  int max_degree = 12;
};

/// Parses and validates; schema violations raise Error(SchemaError) whose
/// message names the offending field path.
SystemSpec parse_system_spec(const std::string& json_text);
SystemSpec load_system_spec(const std::string& path);

NikishinSystem build_from_spec(const SystemSpec& spec);

std::string to_json(const SystemSpec& spec);

}  // namespace config
}  // namespace niklab
