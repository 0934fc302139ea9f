#pragma once

// Built-in instances with independently computed reference solutions.

#include "monosplit/tools/problem_file.hpp"

#include <functional>
#include <string>
#include <vector>

namespace monosplit::tools {

struct Demo {
  std::string name;
  std::string description;
  std::string text;  // problem-file source
  /// Reference value of the flattened primal solution.
  std::function<Vector()> oracle;
  double tolerance;
};

const std::vector<Demo>& demos();
/// nullptr when unknown.
const Demo* find_demo(const std::string& name);
std::string demo_names();

/// Minimizes omega * d_C(x)^2 over the box [lo, hi] by projected gradient.
Vector projected_gradient_hyperplane(const Vector& lo, const Vector& hi, const Vector& u, double rho,
                                     double omega, long steps, double step);

}  // namespace monosplit::tools
