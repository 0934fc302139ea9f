#pragma once

// Concrete operators and functions, and their string-keyed serialization
// surface (catalog id plus named numeric parameters).

#include "monosplit/operators.hpp"
#include "monosplit/sets.hpp"

#include <map>
#include <string>
#include <vector>

namespace monosplit {

namespace catalog {

// Operators.
MaximalMonotoneOp zero_op(int dim);
/// x -> c x, c >= 0
MaximalMonotoneOp scaled_identity(int dim, double c);
/// x -> M x + b with M + M^T positive semidefinite.
MaximalMonotoneOp affine(Matrix M, Vector b);
MaximalMonotoneOp normal_cone(ConvexSet C);

// Lipschitz maps.
LipschitzOp scaled_identity_map(int dim, double c);
LipschitzOp affine_map(Matrix M, Vector b);

// Functions.
ConvexFn zero_fn(int dim);
ConvexFn indicator(ConvexSet C);
/// w ||x||_1
ConvexFn l1(int dim, double w);
/// (1/2) ||x - a||^2
ConvexFn sq_dist(Vector a);
/// omega ||x||^2
ConvexFn sq_norm(int dim, double omega);
/// omega ||x||
ConvexFn norm2(int dim, double omega);
/// sigma_C = (iota_C)^*
ConvexFn support(ConvexSet C);

}  // namespace catalog

/// Catalog identifier plus named parameters. Vector-valued parameters may be
/// given as a single value and are broadcast to the slot dimension; matrix
/// parameters are stored row-major.
struct CatalogSpec {
  std::string id;
  std::map<std::string, std::vector<double>> params;

  bool operator==(const CatalogSpec&) const = default;
};

enum class SlotKind { Monotone, Lipschitz, Function };

/// Builds a set-valued operator. Function ids are accepted and mean the
/// subdifferential of that function.
MaximalMonotoneOp make_operator(const CatalogSpec& spec, int dim);
LipschitzOp make_lipschitz(const CatalogSpec& spec, int dim);
ConvexFn make_function(const CatalogSpec& spec, int dim);
/// Indicator ids only (indicator_box, ...), returning the underlying set.
ConvexSet make_set(const CatalogSpec& spec, int dim);

struct CatalogEntryInfo {
  std::string id;
  SlotKind kind;
  std::string params;
  std::string description;
};

const std::vector<CatalogEntryInfo>& catalog_entries();
bool catalog_has(const std::string& id, SlotKind kind);

}  // namespace monosplit
