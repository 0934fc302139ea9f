#pragma once

// The invariant suite behind `monosplit selftest`. Every property is seeded
// and deterministic for a given seed.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace monosplit::tools {

struct SuiteOptions {
  std::uint64_t seed = 20240601;
  int samples = 100;
  /// Halve every lambda under test; the norm-bound property must then fail.
  bool corrupt_lambda = false;
};

struct PropertyResult {
  std::string module;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Property {
  std::string module;
  std::string name;
  /// Empty string on success, otherwise a description of the first violation.
  std::function<std::string(const SuiteOptions&)> check;
};

const std::vector<Property>& property_catalog();

/// Properties of the operator catalog (resolvents, prox, Lipschitz maps).
std::vector<Property> operator_calculus_properties();

PropertyResult run_property(const Property& p, const SuiteOptions& opts);
std::vector<PropertyResult> run_suite(const std::vector<Property>& props, const SuiteOptions& opts);

}  // namespace monosplit::tools
