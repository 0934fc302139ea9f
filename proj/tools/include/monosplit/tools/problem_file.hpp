#pragma once

// Line-oriented problem description.
//
//   # comment
//   kind multivar_min            system | parallel_sum | common_zero |
//                                multivar_min | univar_min | feasibility
//   primal 1 1                   dims of H_1..H_m
//   dual 1                       dims of G_1..G_K
//   partition 0 0                K1 K2 (parallel_sum, univar_min)
//   op f 0 indicator_box lo=2 hi=3
//   op g 0 sq_dist a=0
//   linop 0 0 identity           identity | zero | scalar <s> | dense
//   linop 0 1 dense              followed by one matrix row per line, then "end"
//   1 -1
//   end
//   vec z 0 0.5                  z or r, block index, entries
//   config max_iters 1000
//
// Parameter lists are comma-separated; matrix parameters separate rows with ';'.
// Roles per kind:
//   system        A C (per i), B Dinv (per k)
//   parallel_sum  A C (i = 0), B S (per k); S_k is a resolvent id for k < K1
//                 and a Lipschitz id otherwise (S_k for k < K2, S_k^{-1} after)
//   common_zero   A (i = 0), B S (per k)
//   multivar_min  f h (per i), g ell (per k)
//   univar_min    f h (i = 0), g phi (per k)
//   feasibility   set penalty (per k); penalty ids: hard, sq_norm, norm2

#include "monosplit/catalog.hpp"
#include "monosplit/errors.hpp"
#include "monosplit/reductions.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace monosplit::tools {

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct OpEntry {
  std::string role;
  std::size_t index = 0;
  CatalogSpec spec;
  int line = 0;  // source line, not part of equality

  bool operator==(const OpEntry& o) const {
    return role == o.role && index == o.index && spec == o.spec;
  }
};

struct LinopEntry {
  std::size_t k = 0;
  std::size_t i = 0;
  LinearEntry entry = LinearEntry::zero(1, 1);

  bool operator==(const LinopEntry&) const = default;
};

struct VecEntry {
  std::string role;  // z or r
  std::size_t index = 0;
  std::vector<double> values;

  bool operator==(const VecEntry&) const = default;
};

struct ProblemFile {
  std::string kind;
  SpaceSig sig;
  bool has_partition = false;
  std::size_t K1 = 0;
  std::size_t K2 = 0;
  std::vector<OpEntry> ops;
  std::vector<LinopEntry> linops;
  std::vector<VecEntry> vecs;
  std::map<std::string, double> config;

  bool operator==(const ProblemFile&) const = default;
};

const std::vector<std::string>& problem_kinds();

ProblemFile parse_problem(std::istream& in);
ProblemFile parse_problem_string(const std::string& text);
ProblemFile load_problem(const std::string& path);
std::string serialize_problem(const ProblemFile& pf);

using Instance = std::variant<CoupledInclusionProblem, ParallelSumProblem, CommonZeroProblem,
                              MultivariateMinProblem, UnivariateMinProblem, FeasibilityRelaxation>;

/// Builds the typed problem. Throws ParseError naming the offending line.
Instance build_instance(const ProblemFile& pf);

/// Recognized config keys: epsilon, gamma, max_iters, tol, error_eta, error_p, seed.
FbfConfig config_from(const std::map<std::string, double>& config);

}  // namespace monosplit::tools
