// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fastrk/cli/commands.hpp"
#include "fastrk/cli/config.hpp"
#include "fastrk/cli/problems.hpp"

using namespace fastrk;
using namespace fastrk::cli;

namespace {

RunConfig custom_config() {
  RunConfig c;
  c.problem = ProblemKind::Heat2dRobin;
  c.tableau = TableauKind::RadauIIA3;
  c.n_steps = 100;
  c.h = 0.125;
  c.base = 4;
  c.k_max = 12;
  c.strategy = ParamStrategy::Theory;
  c.eps_target = 1e-7;
  c.direct_levels = 2;
  c.symmetry = false;
  c.threads = 3;
  c.seed = 99;
  c.forcing = ForcingKind::One;
  c.u0_scale = 1.5;
  c.scalar.a = 2.5;
  c.diagonal.entries = {1.0, 2.0, 3.0};
  c.heat1d.dim = 50;
  c.heat2d = {7, 5, 1.0, 2.0, 0.0, 3.0};
  return c;
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::vector<double> split_csv_row(const std::string& line) {
  std::vector<double> out;
  std::istringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

}  // namespace

TEST_CASE("configs survive a serialize/parse round trip") {
  const RunConfig def;
  CHECK(parse_config(serialize_config(def)) == def);

  const RunConfig custom = custom_config();
  CHECK(parse_config(serialize_config(custom)) == custom);

  // Serialization is canonical: one more trip changes nothing.
  const std::string text = serialize_config(custom);
  CHECK(serialize_config(parse_config(text)) == text);
}

TEST_CASE("parsing is strict about keys, types and ranges") {
  CHECK_THROWS_AS((void)parse_config("not json"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("[1,2]"), ConfigError);
  CHECK_THROWS_AS((void)parse_config(R"({"nsteps": 10})"), ConfigError);
  CHECK_THROWS_AS((void)parse_config(R"({"scalar": {"b": 1.0}})"), ConfigError);
  CHECK_THROWS_AS((void)parse_config(R"({"n_steps": "many"})"), ConfigError);
  CHECK_THROWS_AS((void)parse_config(R"({"n_steps": 0})"), ConfigError);
  CHECK_THROWS_AS((void)parse_config(R"({"base": 1})"), ConfigError);
  CHECK_THROWS_AS((void)parse_config(R"({"eps_target": 1.5})"), ConfigError);
  CHECK_THROWS_AS((void)parse_config(R"({"threads": 0})"), ConfigError);
  CHECK_THROWS_AS((void)parse_config(R"({"tableau": "rk4"})"), ConfigError);
  CHECK_THROWS_AS((void)parse_config(R"({"heat2d": {"rho": -1.0}})"), ConfigError);
  CHECK_THROWS_AS((void)parse_config(R"({"diagonal": {"count": 0}})"), ConfigError);
  CHECK_THROWS_AS(
      (void)parse_config(R"({"diagonal": {"min": 2.0, "max": 1.0}})"),
      ConfigError);

  // Inconsistent h / t_final pair.
  CHECK_THROWS_AS(
      (void)parse_config(R"({"n_steps": 50, "h": 0.1, "t_final": 10.0})"),
      ConfigError);
  // Consistent pair is fine.
  const RunConfig ok =
      parse_config(R"({"n_steps": 50, "h": 0.2, "t_final": 10.0})");
  CHECK(ok.step_size() == doctest::Approx(0.2));

  // null means unset, matching serialization of empty optionals.
  const RunConfig nul = parse_config(R"({"h": null, "t_final": null})");
  CHECK(!nul.h);
  CHECK(!nul.t_final);
}

TEST_CASE("step size resolution covers all three input forms") {
  RunConfig c;
  CHECK(c.step_size() == doctest::Approx(20.0 / 625.0).epsilon(1e-15));
  CHECK(c.horizon() == doctest::Approx(20.0).epsilon(1e-15));

  c.h = 0.01;
  CHECK(c.step_size() == 0.01);

  c.h.reset();
  c.t_final = 5.0;
  c.n_steps = 100;
  CHECK(c.step_size() == doctest::Approx(0.05).epsilon(1e-15));
}

TEST_CASE("the reference profile is the default configuration") {
  CHECK(RunConfig::profile("reference") == RunConfig{});
  CHECK_THROWS_AS((void)RunConfig::profile("fastest"), ConfigError);
}

TEST_CASE("config files load through the same strict parser") {
  const std::string path = "test_cli_config_tmp.json";
  {
    std::ofstream out(path);
    out << serialize_config(custom_config());
  }
  CHECK(load_config_file(path) == custom_config());
  std::remove(path.c_str());
  CHECK_THROWS_AS((void)load_config_file("does_not_exist.json"), ConfigError);
}

TEST_CASE("scalar problems expose one mode with the configured decay") {
  RunConfig c;
  c.scalar.a = 7.5;
  c.u0_scale = 2.0;
  const Problem p = build_problem(c);
  auto solver = p.make_solver();
  CHECK(solver->dimension() == 1);
  CHECK(solver->apply(Vec(Vec::Ones(1)))(0) == doctest::Approx(7.5));
  CHECK(p.u0(0) == 2.0);
  CHECK(p.forcing.support.empty());
  CHECK(!p.description.empty());
}

TEST_CASE("diagonal problems use explicit entries or a seeded draw") {
  RunConfig c;
  c.problem = ProblemKind::Diagonal;

  SUBCASE("explicit entries win") {
    c.diagonal.entries = {3.0, 7.0};
    const Problem p = build_problem(c);
    auto solver = p.make_solver();
    REQUIRE(solver->dimension() == 2);
    const Vec got = solver->apply(Vec(Vec::Ones(2)));
    CHECK(got(0) == 3.0);
    CHECK(got(1) == 7.0);
  }

  SUBCASE("seeded draws are reproducible and in range") {
    c.diagonal.count = 40;
    c.diagonal.min = 0.5;
    c.diagonal.max = 9.5;
    const Vec a = build_problem(c).make_solver()->apply(Vec(Vec::Ones(40)));
    const Vec b = build_problem(c).make_solver()->apply(Vec(Vec::Ones(40)));
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.minCoeff() >= 0.5);
    CHECK(a.maxCoeff() <= 9.5);

    c.seed = 4321;
    const Vec other = build_problem(c).make_solver()->apply(Vec(Vec::Ones(40)));
    CHECK((a - other).cwiseAbs().maxCoeff() > 0.0);
  }
}

TEST_CASE("1-d heat problems force exactly the end nodes") {
  RunConfig c;
  c.problem = ProblemKind::Heat1d;
  c.heat1d.dim = 30;
  c.forcing = ForcingKind::One;
  const Problem p = build_problem(c);
  auto solver = p.make_solver();
  REQUIRE(solver->dimension() == 30);

  CHECK(p.forcing.support == std::vector<int>{0, 29});
  const Vec g = p.forcing.eval(1.2345);
  const double w = 31.0 * 31.0;  // 1/dx^2 with dx = 1/(dim+1)
  CHECK(g(0) == doctest::Approx(w).epsilon(1e-12));
  CHECK(g(29) == doctest::Approx(w).epsilon(1e-12));
  CHECK(g.segment(1, 28).cwiseAbs().maxCoeff() == 0.0);

  // Row sums of the Dirichlet Laplacian vanish except at the ends.
  const Vec row_sums = solver->apply(Vec(Vec::Ones(30)));
  CHECK(row_sums(0) == doctest::Approx(w).epsilon(1e-12));
  CHECK(row_sums(29) == doctest::Approx(w).epsilon(1e-12));
  CHECK(row_sums.segment(1, 28).cwiseAbs().maxCoeff() < 1e-9 * w);
}

TEST_CASE("2-d heat problems force the top and left boundary cells") {
  RunConfig c;
  c.problem = ProblemKind::Heat2dRobin;
  c.heat2d = {6, 4, 3.0, 2.0, 0.5, 2.0};
  c.forcing = ForcingKind::One;
  const Problem p = build_problem(c);
  auto solver = p.make_solver();
  REQUIRE(solver->dimension() == 24);

  // Left column plus top row, corner counted once.
  CHECK(p.forcing.support.size() == 6 + 4 - 1);
  const Vec g = p.forcing.eval(0.0);
  int nonzero = 0;
  for (Eigen::Index i = 0; i < g.size(); ++i)
    if (g(i) != 0.0) ++nonzero;
  CHECK(nonzero == 9);
  // amplitude * shape * flux with dx = 0.5: left-edge cells get 2/dx = 4.
  CHECK(g.maxCoeff() > 0.0);
}

TEST_CASE("cmd_run reconciles counts and reports a small deviation") {
  RunConfig c;
  c.n_steps = 125;
  std::ostringstream sink;
  const RunReport rep = cmd_run(c, sink);
  CHECK(rep.fast_solves == rep.fast_predicted);
  CHECK(rep.direct_solves == 2L * 125);
  CHECK(rep.deviation < 1e-5);
  CHECK(rep.n_steps == 125);
  const std::string text = sink.str();
  CHECK(text.find("deviation") != std::string::npos);
  CHECK(text.find("fast solves") != std::string::npos);
}

TEST_CASE("solve-count sweeps grow by one node set per ladder level") {
  RunConfig c;  // scalar problem keeps each solve trivial
  std::ostringstream csv;
  cmd_bench_solves(c, {125, 625, 3125}, csv);
  const auto lines = split_lines(csv.str());
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "N,direct_solves,fast_solves");

  const auto r1 = split_csv_row(lines[1]);
  const auto r2 = split_csv_row(lines[2]);
  const auto r3 = split_csv_row(lines[3]);
  CHECK(r1[0] == 125);
  CHECK(r1[1] == 250);   // stages * N
  CHECK(r1[2] == 42);    // 2*5 + 2*(15+1)
  CHECK(r2[2] == 58);
  CHECK(r3[2] == 74);
  CHECK(r2[2] - r1[2] == 16);  // one extra contour per factor of the base
  CHECK(r3[2] - r2[2] == 16);

  std::ostringstream again;
  cmd_bench_solves(c, {125, 625, 3125}, again);
  CHECK(again.str() == csv.str());
}

TEST_CASE("quadrature error reports stay below their printed bounds") {
  RunConfig c;
  std::ostringstream csv;
  cmd_quaderr(c, csv);
  const auto lines = split_lines(csv.str());
  REQUIRE(lines.size() > 1);
  CHECK(lines[0] == "K,n,a,measured,bound");

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto row = split_csv_row(lines[i]);
    REQUIRE(row.size() == 5);
    CAPTURE(lines[i]);
    CHECK(row[3] <= row[4]);  // measured <= bound on every row
    CHECK(row[4] > 0.0);
  }

  std::ostringstream again;
  cmd_quaderr(c, again);
  CHECK(again.str() == csv.str());
}
