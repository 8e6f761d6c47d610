#include "niklab/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace niklab {
namespace config {

namespace {

using nlohmann::json;

[[noreturn]] void schema_fail(const std::string& path, const std::string& why) {
  raise(ErrorCode::SchemaError, path + ": " + why);
}

const json& require(const json& node, const std::string& key, const std::string& path) {
  if (!node.is_object() || !node.contains(key))
    schema_fail(path + "." + key, "required field missing");
  return node.at(key);
}

double as_number(const json& node, const std::string& path) {
  if (!node.is_number()) schema_fail(path, "expected a number");
  return node.get<double>();
}

WeightSpec parse_weight(const json& node, const std::string& path) {
  WeightSpec weight;
  const json& kind = require(node, "kind", path);
  if (!kind.is_string()) schema_fail(path + ".kind", "expected a string");
  const std::string name = kind.get<std::string>();
  if (name == "uniform") {
    weight.kind = WeightKind::Uniform;
  } else if (name == "polynomial") {
    weight.kind = WeightKind::Polynomial;
    const json& coeffs = require(node, "coeffs", path);
    if (!coeffs.is_array() || coeffs.empty())
      schema_fail(path + ".coeffs", "expected a nonempty array");
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      weight.coeffs.push_back(
          as_number(coeffs[i], path + ".coeffs[" + std::to_string(i) + "]"));
  } else if (name == "cosine") {
    weight.kind = WeightKind::Cosine;
    weight.amplitude = as_number(require(node, "amplitude", path), path + ".amplitude");
  } else if (name == "custom") {
    weight.kind = WeightKind::Custom;
    const json& values = require(node, "values", path);
    if (!values.is_array() || values.size() < 2)
      schema_fail(path + ".values", "expected an array with >= 2 samples");
    for (std::size_t i = 0; i < values.size(); ++i)
      weight.values.push_back(
          as_number(values[i], path + ".values[" + std::to_string(i) + "]"));
  } else {
    schema_fail(path + ".kind", "unknown weight kind '" + name + "'");
  }
  if (node.contains("sign")) {
    const json& sign = node.at("sign");
    if (!sign.is_number_integer() ||
        (sign.get<int>() != 1 && sign.get<int>() != -1))
      schema_fail(path + ".sign", "expected +1 or -1");
    weight.sign = sign.get<int>();
  }
  return weight;
}

}  // namespace

SystemSpec parse_system_spec(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& err) {
    schema_fail("$", std::string("not valid JSON: ") + err.what());
  }
  if (!doc.is_object()) schema_fail("$", "expected an object");

  SystemSpec spec;
  const json& kind = require(doc, "kind", "$");
  if (!kind.is_string()) schema_fail("$.kind", "expected a string");
  spec.kind = kind.get<std::string>();
  if (spec.kind != "real" && spec.kind != "circle")
    schema_fail("$.kind", "expected \"real\" or \"circle\"");

  const json& gens = require(doc, "generators", "$");
  if (!gens.is_array() || gens.empty())
    schema_fail("$.generators", "expected a nonempty array");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string path = "$.generators[" + std::to_string(i) + "]";
    const json& g = gens[i];
    if (!g.is_object()) schema_fail(path, "expected an object");
    GeneratorSpec gen;
    const json& support = require(g, "support", path);
    if (!support.is_array() || support.size() != 2)
      schema_fail(path + ".support", "expected [lo, hi]");
    gen.support = {as_number(support[0], path + ".support[0]"),
                   as_number(support[1], path + ".support[1]")};
    gen.weight = parse_weight(require(g, "weight", path), path + ".weight");
    spec.generators.push_back(std::move(gen));
  }

  if (doc.contains("branch_t0"))
    spec.branch_t0 = as_number(doc.at("branch_t0"), "$.branch_t0");
  if (doc.contains("quad_order")) {
    if (!doc.at("quad_order").is_number_integer() || doc.at("quad_order").get<int>() < 1)
      schema_fail("$.quad_order", "expected a positive integer");
    spec.quad_order = doc.at("quad_order").get<int>();
  }
  if (doc.contains("touching_ok")) {
    if (!doc.at("touching_ok").is_boolean())
      schema_fail("$.touching_ok", "expected a boolean");
    spec.touching_ok = doc.at("touching_ok").get<bool>();
  }
  if (doc.contains("max_degree")) {
    if (!doc.at("max_degree").is_number_integer())
      schema_fail("$.max_degree", "expected an integer");
    spec.max_degree = doc.at("max_degree").get<int>();
  }
  if (spec.max_degree < 1 || spec.max_degree > 12)
    schema_fail("$.max_degree", "must be between 1 and 12 at double precision");
  return spec;
}

SystemSpec load_system_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::SchemaError, "$: cannot open spec file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_system_spec(buffer.str());
}

NikishinSystem build_from_spec(const SystemSpec& spec) {
  BuildOptions options;
  options.touching_ok = spec.touching_ok;
  options.table_order = 4 * spec.max_degree;

  if (spec.kind == "real") {
    std::vector<RealMeasure> sigmas;
    for (const GeneratorSpec& g : spec.generators)
      sigmas.push_back(RealMeasure::from_weight(Interval{g.support[0], g.support[1]},
                                                g.weight, spec.quad_order,
                                                options.table_order));
    return build_system(GeneratorChainRL::from_measures(std::move(sigmas)), options);
  }
  std::vector<CircleMeasure> sigmas;
  for (const GeneratorSpec& g : spec.generators)
    sigmas.push_back(CircleMeasure::from_weight(Arc{g.support[0], g.support[1]},
                                                g.weight, spec.quad_order, BranchCut{},
                                                options.table_order));
  std::optional<double> t0 = spec.branch_t0;
  return build_system(GeneratorChainUC::from_measures(std::move(sigmas), t0), options);
}

std::string to_json(const SystemSpec& spec) {
  json doc;
  doc["kind"] = spec.kind;
  doc["generators"] = json::array();
  for (const GeneratorSpec& g : spec.generators) {
    json gen;
    gen["support"] = g.support;
    json weight;
    switch (g.weight.kind) {
      case WeightKind::Uniform: weight["kind"] = "uniform"; break;
      case WeightKind::Polynomial:
        weight["kind"] = "polynomial";
        weight["coeffs"] = g.weight.coeffs;
        break;
      case WeightKind::Cosine:
        weight["kind"] = "cosine";
        weight["amplitude"] = g.weight.amplitude;
        break;
      case WeightKind::Custom:
        weight["kind"] = "custom";
        weight["values"] = g.weight.values;
        break;
    }
    weight["sign"] = g.weight.sign;
    gen["weight"] = weight;
    doc["generators"].push_back(gen);
  }
  if (spec.branch_t0) doc["branch_t0"] = *spec.branch_t0;
  doc["quad_order"] = spec.quad_order;
  doc["touching_ok"] = spec.touching_ok;
  doc["max_degree"] = spec.max_degree;
  return doc.dump(2);
}

}  // namespace config
}  // namespace niklab
