#include "monosplit/tools/run.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <type_traits>
#include <variant>
#include <cstdio>
#include <ostream>

namespace monosplit::tools {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_blocks(const BlockVector& v) {
  std::string out;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (j) out += " | ";
    for (Eigen::Index i = 0; i < v[j].size(); ++i) out += (i ? " " : "") + format_number(v[j](i));
  }
  return out;
}

std::string kind_of(const Instance& inst) {
  static const char* names[] = {"system",       "parallel_sum", "common_zero",
                                "multivar_min", "univar_min",   "feasibility"};
  return names[inst.index()];
}

RunResult run_instance(const Instance& inst, const FbfConfig& cfg) {
  RunResult out;
  out.kind = kind_of(inst);
  const auto t0 = std::chrono::steady_clock::now();
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CoupledInclusionProblem>) {
          out.report = solve_system(p, cfg);
        } else if constexpr (std::is_same_v<T, ParallelSumProblem>) {
          out.report = solve_parallel_sum(p, cfg);
        } else if constexpr (std::is_same_v<T, CommonZeroProblem>) {
          out.report = solve_common_zero(p, cfg);
        } else if constexpr (std::is_same_v<T, MultivariateMinProblem>) {
          out.report = solve_multivariate_min(p, cfg);
          try {
            out.objectives = evaluate_objectives(p, out.report.primal, out.report.dual);
          } catch (const UnsupportedEvaluation&) {
          }
        } else if constexpr (std::is_same_v<T, UnivariateMinProblem>) {
          out.report = solve_univariate_min(p, cfg);
        } else {
          out.report = solve_feasibility_relaxation(p, cfg);
          ObjectiveValues v;
          v.primal = feasibility_objective(p, out.report.primal[0]);
          v.dual = std::numeric_limits<double>::quiet_NaN();
          out.objectives = v;
        }
      },
      inst);
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

void write_trace_csv(std::ostream& out, const FbfTrace& trace) {
  auto cell = [&](const std::optional<double>& v) {
    out << ',';
    if (v) out << format_number(*v);
  };
  out << kTraceHeader << '\n';
  for (const auto& r : trace.records) {
    out << r.iter << ',' << format_number(r.gamma) << ',' << format_number(r.residual);
    cell(r.primal_kkt);
    cell(r.dual_kkt);
    cell(r.primal_obj);
    cell(r.dual_obj);
    cell(r.gap);
    out << '\n';
  }
}

void write_summary(std::ostream& out, const RunResult& run, const SummaryExtras& extras) {
  const auto& rep = run.report;
  const auto& tr = rep.trace;
  out << "kind=" << run.kind << '\n';
  out << "converged=" << (rep.converged() ? "true" : "false") << '\n';
  out << "iterations=" << tr.iterations << '\n';
  out << "wall_time_s=" << format_number(run.wall_seconds) << '\n';
  out << "fixedpoint_residual=" << format_number(tr.records.empty() ? 0.0 : tr.records.back().residual)
      << '\n';
  out << "primal_kkt=" << format_number(rep.kkt.primal) << '\n';
  out << "dual_kkt=" << format_number(rep.kkt.dual) << '\n';
  out << "primal=" << format_blocks(rep.primal) << '\n';
  out << "dual=" << format_blocks(rep.dual) << '\n';
  if (run.objectives) {
    out << "primal_obj=" << format_number(run.objectives->primal) << '\n';
    if (!std::isnan(run.objectives->dual)) {
      out << "dual_obj=" << format_number(run.objectives->dual) << '\n';
      out << "gap=" << format_number(run.objectives->gap()) << '\n';
    }
  }
  for (const auto& [k, v] : extras) out << k << '=' << v << '\n';
}

}  // namespace monosplit::tools
