#include "monosplit/catalog.hpp"
#include "monosplit/tools/demos.hpp"
#include "monosplit/tools/problem_file.hpp"
#include "monosplit/tools/properties.hpp"
#include "monosplit/tools/run.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace monosplit;
using namespace monosplit::tools;

namespace {

struct Overrides {
  std::optional<double> gamma, epsilon, tol, error_eta, error_p;
  std::optional<long> max_iters;
  std::optional<long> seed;
  std::string output_dir = ".";

  void add_to(CLI::App& app) {
    app.add_option("--gamma", gamma, "constant step size");
    app.add_option("--epsilon", epsilon, "step-size margin epsilon");
    app.add_option("--max-iters", max_iters, "iteration cap")->check(CLI::PositiveNumber);
    app.add_option("--tol", tol, "relative fixed-point residual tolerance");
    app.add_option("--error-eta", error_eta, "magnitude of injected summable errors");
    app.add_option("--error-p", error_p, "decay exponent of injected errors (> 1)");
    app.add_option("--seed", seed, "seed of the injected errors");
    app.add_option("--output-dir", output_dir, "directory for <stem>.trace.csv and <stem>.summary");
  }

  std::map<std::string, double> merged(std::map<std::string, double> cfg) const {
    auto put = [&](const char* key, const auto& v) {
      if (v) cfg[key] = static_cast<double>(*v);
    };
    put("gamma", gamma);
    put("epsilon", epsilon);
    put("tol", tol);
    put("error_eta", error_eta);
    put("error_p", error_p);
    put("max_iters", max_iters);
    put("seed", seed);
    return cfg;
  }
};

int solve_and_write(const ProblemFile& pf, const std::string& stem, const Overrides& ov,
                    const std::function<SummaryExtras(const RunResult&, bool&)>& post = {}) {
  const Instance inst = build_instance(pf);
  const FbfConfig cfg = config_from(ov.merged(pf.config));
  const RunResult run = run_instance(inst, cfg);
  bool ok = true;
  const SummaryExtras extras = post ? post(run, ok) : SummaryExtras{};

  fs::create_directories(ov.output_dir);
  const fs::path base = fs::path(ov.output_dir) / stem;
  std::ofstream trace(base.string() + ".trace.csv", std::ios::binary);
  write_trace_csv(trace, run.report.trace);
  std::ofstream summary(base.string() + ".summary", std::ios::binary);
  write_summary(summary, run, extras);
  write_summary(std::cout, run, extras);
  if (!trace || !summary) {
    std::cerr << "error: could not write outputs under " << ov.output_dir << '\n';
    return 1;
  }
  if (!ok) return 1;
  return run.report.converged() ? 0 : 2;
}

int cmd_selftest(const SuiteOptions& opts) {
  const auto results = run_suite(property_catalog(), opts);
  int failures = 0;
  std::printf("%-18s %-38s %s\n", "module", "property", "result");
  for (const auto& r : results) {
    std::printf("%-18s %-38s %s%s%s\n", r.module.c_str(), r.name.c_str(), r.passed ? "PASS" : "FAIL",
                r.passed ? "" : "  ", r.detail.c_str());
    failures += !r.passed;
  }
  std::printf("%zu properties, %d failed\n", results.size(), failures);
  for (const auto& r : results)
    if (!r.passed) std::fprintf(stderr, "failed property: %s / %s\n", r.module.c_str(), r.name.c_str());
  return failures ? 1 : 0;
}

int cmd_list_catalog() {
  auto kind = [](SlotKind k) {
    return k == SlotKind::Monotone ? "operator" : k == SlotKind::Lipschitz ? "lipschitz" : "function";
  };
  for (const auto& e : catalog_entries())
    std::printf("%-10s %-20s %-22s %s\n", kind(e.kind), e.id.c_str(), e.params.c_str(), e.description.c_str());
  std::printf("%-10s %-20s %-22s %s\n", "penalty", "hard", "", "indicator of {0}");
  std::printf("%-10s %-20s %-22s %s\n", "penalty", "sq_norm", "omega=1", "omega ||.||^2");
  std::printf("%-10s %-20s %-22s %s\n", "penalty", "norm2", "omega=1", "omega ||.||");
  std::printf("demos: %s\n", demo_names().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Primal-dual forward-backward-forward solver for coupled monotone inclusions"};
  app.require_subcommand(1);

  Overrides solve_ov, demo_ov;
  std::string path, demo_name;
  auto* solve = app.add_subcommand("solve", "solve a problem file");
  solve->add_option("file", path, "problem file")->required();
  solve_ov.add_to(*solve);

  auto* demo = app.add_subcommand("demo", "run a built-in instance and compare with its reference solution");
  demo->add_option("name", demo_name, "demo name")->required();
  demo_ov.add_to(*demo);

  SuiteOptions suite;
  auto* self = app.add_subcommand("selftest", "run the invariant suite");
  self->add_option("--seed", suite.seed, "seed for random samples");
  self->add_option("--samples", suite.samples, "samples per property")->check(CLI::PositiveNumber);
  self->add_flag("--corrupt-lambda", suite.corrupt_lambda, "halve the norm bounds under test");

  auto* list = app.add_subcommand("list-catalog", "list catalog identifiers and demos");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*solve) return solve_and_write(load_problem(path), fs::path(path).stem().string(), solve_ov);
    if (*demo) {
      const Demo* d = find_demo(demo_name);
      if (!d) {
        std::cerr << "error: unknown demo '" << demo_name << "'; valid names: " << demo_names() << '\n';
        return 1;
      }
      return solve_and_write(parse_problem_string(d->text), d->name, demo_ov,
                             [d](const RunResult& run, bool& ok) {
                               const Vector ref = d->oracle();
                               const double dev = (run.report.primal.flatten() - ref).lpNorm<Eigen::Infinity>();
                               ok = dev <= d->tolerance;
                               if (!ok)
                                 std::cerr << "error: deviation " << format_number(dev) << " exceeds "
                                           << format_number(d->tolerance) << '\n';
                               std::string o;
                               for (Eigen::Index i = 0; i < ref.size(); ++i)
                                 o += (i ? " " : "") + format_number(ref(i));
                               return SummaryExtras{{"oracle", o},
                                                    {"deviation", format_number(dev)},
                                                    {"tolerance", format_number(d->tolerance)}};
                             });
    }
    if (*self) return cmd_selftest(suite);
    if (*list) return cmd_list_catalog();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
