#pragma once

#include "monosplit/tools/problem_file.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace monosplit::tools {

inline constexpr const char* kTraceHeader =
    "iter,gamma,fixedpoint_residual,primal_kkt,dual_kkt,primal_obj,dual_obj,gap";

struct RunResult {
  std::string kind;
  SolveReport report;
  /// Final objective values (minimization kinds, when evaluable).
  std::optional<ObjectiveValues> objectives;
  double wall_seconds = 0.0;
};

std::string kind_of(const Instance& inst);

RunResult run_instance(const Instance& inst, const FbfConfig& cfg);

/// Header plus one row per record; numbers as %.17g, empty cells when absent.
void write_trace_csv(std::ostream& out, const FbfTrace& trace);

using SummaryExtras = std::vector<std::pair<std::string, std::string>>;

/// key=value lines.
void write_summary(std::ostream& out, const RunResult& run, const SummaryExtras& extras = {});

std::string format_number(double v);
std::string format_blocks(const BlockVector& v);

}  // namespace monosplit::tools
