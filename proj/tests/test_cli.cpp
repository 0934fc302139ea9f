#include "monosplit/tools/demos.hpp"
#include "monosplit/tools/problem_file.hpp"
#include "monosplit/tools/properties.hpp"
#include "monosplit/tools/run.hpp"

#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

using namespace monosplit;
using namespace monosplit::tools;

namespace {

std::string fixture(const char* name) { return std::string(MONOSPLIT_FIXTURES) + "/" + name; }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string parse_error_of(const std::string& text) {
  try {
    build_instance(parse_problem_string(text));
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}

const char* kSystem =
    "kind system\n"
    "primal 1 2\n"
    "dual 2\n"
    "op A 0 normal_box lo=0 hi=1\n"
    "op A 1 affine M=1,0;0,1 b=0.5,-1\n"
    "op C 1 scaled_identity c=0.5\n"
    "op B 0 normal_ball center=0 radius=2\n"
    "linop 0 0 dense\n"
    "1.5\n"
    "-2\n"
    "end\n"
    "linop 0 1 scalar 0.25\n"
    "vec z 1 1 2\n"
    "vec r 0 -1 0.5\n"
    "config max_iters 500\n"
    "config tol 1e-8\n";

}  // namespace

TEST_SUITE("cli-harness") {
  TEST_CASE("parse a full problem") {
    const auto pf = parse_problem_string(kSystem);
    CHECK(pf.kind == "system");
    CHECK(pf.sig.primal == std::vector<int>{1, 2});
    CHECK(pf.sig.dual == std::vector<int>{2});
    CHECK(pf.ops.size() == 4);
    CHECK(pf.ops[1].spec.params.at("M") == std::vector<double>{1, 0, 0, 1});
    REQUIRE(pf.linops.size() == 2);
    CHECK(pf.linops[0].entry.to_dense().isApprox(Matrix{{1.5}, {-2.0}}));
    CHECK(pf.config.at("max_iters") == 500);
    const auto inst = build_instance(pf);
    REQUIRE(std::holds_alternative<CoupledInclusionProblem>(inst));
    const auto& p = std::get<CoupledInclusionProblem>(inst);
    CHECK(p.z[1](1) == 2.0);
    CHECK(p.r[0](0) == -1.0);
    CHECK(p.C[1].lipschitz() == doctest::Approx(0.5));
    CHECK(p.Dinv[0].is_zero());
  }

  TEST_CASE("round trip through the serializer") {
    const auto pf = parse_problem_string(kSystem);
    CHECK(parse_problem_string(serialize_problem(pf)) == pf);
    for (const auto& d : demos()) {
      const auto q = parse_problem_string(d.text);
      CHECK(parse_problem_string(serialize_problem(q)) == q);
    }
  }

  TEST_CASE("errors name the offending line") {
    const auto bad_row = parse_error_of("kind system\nprimal 2\ndual 2\nop A 0 zero\nlinop 0 0 dense\n1 2 3\n0 1\nend\n");
    CHECK(bad_row.rfind("line 6:", 0) == 0);
    const auto bad_kind = parse_error_of("kind teleport\n");
    CHECK(bad_kind.rfind("line 1:", 0) == 0);
    const auto bad_number = parse_error_of("kind system\nprimal 1\ndual 1\nop A 0 scaled_identity c=abc\n");
    CHECK(bad_number.find("line 4:") != std::string::npos);
    const auto unknown = parse_error_of("kind system\nprimal 1\ndual 1\nop A 0 frobnicate\nlinop 0 0 identity\n");
    CHECK(unknown.find("line 4:") != std::string::npos);
    CHECK(unknown.find("unknown catalog id 'frobnicate'") != std::string::npos);
    CHECK(parse_error_of("kind system\nprimal 1\ndual 1\nconfig colour 3\n").find("line 4:") != std::string::npos);
    CHECK_THROWS_AS(load_problem(fixture("does_not_exist.prob")), ParseError);
  }

  TEST_CASE("config keys map onto the engine configuration") {
    const auto cfg = config_from({{"gamma", 0.3}, {"epsilon", 0.05}, {"max_iters", 12}, {"tol", 1e-6}});
    CHECK(cfg.gamma == 0.3);
    CHECK(cfg.epsilon == 0.05);
    CHECK(cfg.max_iters == 12);
    CHECK(cfg.residual_tol == 1e-6);
    CHECK_FALSE(cfg.errors);
    const auto noisy = config_from({{"error_eta", 0.1}, {"error_p", 2.0}, {"seed", 3}});
    CHECK(static_cast<bool>(noisy.errors));
    CHECK_THROWS(config_from({{"max_iters", 0}}));
    CHECK_THROWS(config_from({{"error_eta", 0.1}, {"error_p", 1.0}}));
  }

  TEST_CASE("every fixture builds its kind") {
    const std::vector<std::pair<const char*, std::string>> cases = {{"box_line.prob", "feasibility"},
                                                                     {"coupled_system.prob", "system"},
                                                                     {"parallel_sum.prob", "parallel_sum"},
                                                                     {"univar.prob", "univar_min"}};
    for (const auto& [file, kind] : cases) {
      const auto inst = build_instance(load_problem(fixture(file)));
      CHECK(kind_of(inst) == kind);
    }
    CHECK_THROWS_AS(build_instance(load_problem(fixture("unknown_id.prob"))), ParseError);
    CHECK_THROWS_AS(load_problem(fixture("bad_matrix.prob")), ParseError);
  }

  TEST_CASE("fixture solutions") {
    auto solve = [](const char* file) {
      const auto pf = load_problem(fixture(file));
      return run_instance(build_instance(pf), config_from(pf.config));
    };
    const auto sys = solve("coupled_system.prob");
    CHECK(sys.report.converged());
    CHECK(std::abs(sys.report.primal[0](0) - 1.0) <= 1e-7);
    const auto ps = solve("parallel_sum.prob");
    CHECK(ps.report.converged());
    CHECK(std::abs(ps.report.primal[0](0) - 3.0) <= 1e-7);
    const auto box = solve("box_line.prob");
    CHECK(box.report.converged());
    CHECK((box.report.primal[0] - Vector{{1.0, 1.0}}).lpNorm<Eigen::Infinity>() <= 1e-6);
  }

  TEST_CASE("trace CSV header and rows") {
    const auto pf = load_problem(fixture("box_line.prob"));
    auto cfg = config_from(pf.config);
    cfg.max_iters = 7;
    const auto run = run_instance(build_instance(pf), cfg);
    std::ostringstream out;
    write_trace_csv(out, run.report.trace);
    const auto lines = split(out.str(), '\n');
    REQUIRE(lines.size() == 9);  // header, 7 rows, trailing empty
    CHECK(lines[0] == kTraceHeader);
    CHECK(lines[0] == "iter,gamma,fixedpoint_residual,primal_kkt,dual_kkt,primal_obj,dual_obj,gap");
    for (int n = 1; n <= 7; ++n) {
      const auto cells = split(lines[n], ',');
      REQUIRE(cells.size() == 8);
      CHECK(cells[0] == std::to_string(n - 1));
      CHECK(std::stod(cells[1]) > 0.0);
      CHECK(std::stod(cells[2]) >= 0.0);
    }
    CHECK(lines.back().empty());
  }

  TEST_CASE("summary lines") {
    const auto pf = load_problem(fixture("coupled_system.prob"));
    const auto run = run_instance(build_instance(pf), config_from(pf.config));
    std::ostringstream out;
    write_summary(out, run, {{"note", "x"}});
    const std::string s = out.str();
    for (const char* key : {"kind=system\n", "converged=true\n", "iterations=", "primal=", "dual=", "note=x\n"})
      CHECK(s.find(key) != std::string::npos);
    CHECK(format_number(0.1) == "0.10000000000000001");
  }

  TEST_CASE("demos reproduce their reference values") {
    CHECK(demo_names() == "prob62, legendre, example73, lasso1d");
    CHECK(find_demo("nope") == nullptr);
    for (const auto& d : demos()) {
      const auto pf = parse_problem_string(d.text);
      const auto run = run_instance(build_instance(pf), config_from(pf.config));
      CHECK(run.report.converged());
      CHECK((run.report.primal.flatten() - d.oracle()).lpNorm<Eigen::Infinity>() <= d.tolerance);
    }
  }

  TEST_CASE("self-test suite") {
    const auto results = run_suite(property_catalog(), SuiteOptions{});
    for (const auto& r : results) {
      INFO(r.module, " / ", r.name, ": ", r.detail);
      CHECK(r.passed);
    }
    SuiteOptions corrupt;
    corrupt.corrupt_lambda = true;
    for (const auto& r : run_suite(property_catalog(), corrupt)) {
      INFO(r.module, " / ", r.name);
      CHECK(r.passed == !(r.module == "linalg-core" && r.name == "norm-bound validity"));
    }
  }

  TEST_CASE("self-test is deterministic for a seed") {
    SuiteOptions a;
    a.seed = 5;
    a.samples = 20;
    const auto x = run_suite(property_catalog(), a), y = run_suite(property_catalog(), a);
    REQUIRE(x.size() == y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(x[i].passed == y[i].passed);
      CHECK(x[i].detail == y[i].detail);
    }
  }
}
