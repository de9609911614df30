#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include <fmt/format.h>
#include <gtest/gtest.h>
#include <json.hpp>

#include "motr/app/commands.hpp"
#include "motr/app/external_evaluator.hpp"
#include "motr/app/io.hpp"
#include "motr/app/manifest.hpp"
#include "motr/problems.hpp"

using namespace motr;
using namespace motr::app;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("motr_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

std::string field_of(const std::string& text) {
  try {
    parse_manifest_text(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "accepted";
}

int run_cli(const std::string& args, std::string* out = nullptr) {
  const std::string cmd = std::string(MOTR_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  std::string text;
  char buf[512];
  while (std::fgets(buf, sizeof buf, pipe)) text += buf;
  const int status = ::pclose(pipe);
  if (out) *out = text;
  return WEXITSTATUS(status);
}

}  // namespace

TEST(Manifest, PaperParametersAccepted) {
  const auto m = parse_manifest_text(
      "# biobjective run\n"
      "problem = fonseca\n"
      "solver.x0 = 0.1, -0.1, 0.1, -0.1\n"
      "solver.delta0 = 1\n"
      "solver.delta_tol = 0.05\n"
      "solver.gamma0 = 0.7\n"
      "solver.gamma1 = 0.5\n"
      "solver.gamma2 = 1\n"
      "solver.sigma = 0.05\n");
  EXPECT_EQ(m.problem, "fonseca");
  EXPECT_EQ(m.solver.x0, (Vector(4) << 0.1, -0.1, 0.1, -0.1).finished());
  EXPECT_EQ(m.solver.gamma0, 0.7);
}

TEST(Manifest, OrderingRejected) {
  EXPECT_EQ(field_of("problem = dtlz2\nsolver.eta1 = 0.9\nsolver.eta2 = 0.5\n"), "solver.eta2");
}

TEST(Manifest, DefaultsForRegisteredProblem) {
  const auto m = parse_manifest_text("problem = dtlz2\n");
  EXPECT_EQ(m.solver.x0, Vector::Constant(3, 0.5));
  EXPECT_EQ(m.solver.delta0, 1.0);
  EXPECT_EQ(m.solver.delta_tol, 0.05);
  EXPECT_EQ(m.solver.eta1, 0.5);
  EXPECT_EQ(m.solver.eta2, 0.75);
  EXPECT_EQ(m.solver.gamma0, 0.7);
  EXPECT_EQ(m.solver.gamma1, 0.5);
  EXPECT_EQ(m.solver.gamma2, 1.0);
  EXPECT_EQ(m.solver.expand_factor, 2.0);
  EXPECT_EQ(m.solver.sigma, 0.05);
  EXPECT_EQ(m.solver.influence, geometry::DecreasingFunction::Kind::Gaussian);
  EXPECT_EQ(m.solver.seed, 0u);
}

TEST(Manifest, ErrorsNameTheField) {
  EXPECT_EQ(field_of("problem = dtlz2\nsolver.bogus = 1\n"), "solver.bogus");
  EXPECT_EQ(field_of("problem = dtlz2\nsolver.delta0 = abc\n"), "solver.delta0");
  EXPECT_EQ(field_of("problem = nope\n"), "problem");
  EXPECT_EQ(field_of("solver.delta0 = 1\n"), "problem");
  EXPECT_EQ(field_of("problem = dtlz2\nsolver.x0 = 0.5, 0.5\n"), "solver.x0");
  EXPECT_EQ(field_of("problem = dtlz2\nsolver.eval_budget = 9\n"), "solver.eval_budget");
  EXPECT_EQ(field_of("problem = dtlz2\nsolver.eval_budget = 0\n"), "solver.eval_budget");
  EXPECT_EQ(field_of("problem = dtlz2\nmetrics.front = /no/such/file.csv\n"), "metrics.front");
  EXPECT_EQ(field_of("problem = dtlz2\nmetrics.hv_ref = 1, 2\n"), "metrics.hv_ref");
  EXPECT_EQ(field_of("problem = dtlz2\nproblem = comet\n"), "problem");
  EXPECT_EQ(field_of("problem = comet\nmetrics.gd = true\n"), "metrics.gd");
  EXPECT_EQ(field_of("problem.command = x\nproblem.n = 2\nproblem.p = 2\nproblem.lower = 0,0\n"), "problem.upper");
  EXPECT_EQ(field_of("problem = dtlz2\nsolver.eval_budget = 10\n"), "accepted");
}

TEST(External, FixedReply) {
  ExternalEvaluator ev(std::string(MOTR_FAKE_EVALUATOR) + " fixed", 2);
  const auto f = ev(Vector::Zero(3));
  EXPECT_EQ(f, (Vector(2) << 1, 2).finished());
  EXPECT_EQ(ev(Vector::Ones(3)), f);
}

TEST(External, NonNumericTokenFails) {
  ExternalEvaluator ev(std::string(MOTR_FAKE_EVALUATOR) + " bad", 2);
  EXPECT_THROW(ev(Vector::Zero(2)), EvaluatorFailure);
}

TEST(External, ChildExitFails) {
  ExternalEvaluator ev(std::string(MOTR_FAKE_EVALUATOR) + " once", 2);
  EXPECT_NO_THROW(ev(Vector::Zero(2)));
  EXPECT_THROW(ev(Vector::Zero(2)), EvaluatorFailure);
}

TEST(External, WrongArityFails) {
  ExternalEvaluator ev(std::string(MOTR_FAKE_EVALUATOR) + " fixed", 3);
  EXPECT_THROW(ev(Vector::Zero(2)), EvaluatorFailure);
}

TEST(External, MatchesInProcessDtlz2) {
  ExternalEvaluator ev(std::string(MOTR_FAKE_EVALUATOR) + " dtlz2", 3);
  std::mt19937 rng(59);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 200; ++i) {
    const Vector x = (Vector(3) << u(rng), u(rng), u(rng)).finished();
    EXPECT_LE((ev(x) - problems::dtlz2(x)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Io, ReadsFColumnsOrPlainRows) {
  std::istringstream a("x_1,f_1,f_2,delta\n0.5,1,2,0.1\n0.2,3,4,0.1\n");
  const auto fa = read_objectives_csv(a);
  ASSERT_EQ(fa.size(), 2u);
  EXPECT_EQ(fa[1], (Vector(2) << 3, 4).finished());
  std::istringstream b("1, 2\n3, 4\n\n");
  const auto fb = read_objectives_csv(b);
  ASSERT_EQ(fb.size(), 2u);
  EXPECT_EQ(fb[0], (Vector(2) << 1, 2).finished());
}

TEST(Solve, Dtlz2WritesOutputsAndRecomputesMetrics) {
  const auto dir = scratch("dtlz2");
  const auto manifest = write_file(dir / "run.manifest", "problem = dtlz2\nsolver.eval_budget = 2000\nsolver.expand_factor = 5\n");
  ASSERT_EQ(solve_command(manifest, dir / "out", 1), kExitOk);
  for (const auto* f : {"archive.csv", "iterations.jsonl", "density_surface.csv", "metrics.json"}) {
    EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
  }
  const auto archive = read_objectives_csv(dir / "out" / "archive.csv");
  ASSERT_FALSE(archive.empty());
  for (const auto& a : archive) {
    for (const auto& b : archive) {
      if (&a != &b) EXPECT_FALSE(weakly_dominates(dominates(a, b)));
    }
  }
  // cross-check metrics.json against the metrics subcommand
  {
    std::ofstream front(dir / "front.csv");
    for (const auto& f : problems::dtlz2_front()) front << fmt::format("{:.17g},{:.17g},{:.17g}\n", f[0], f[1], f[2]);
  }
  const auto m = nlohmann::json::parse(slurp(dir / "out" / "metrics.json"));
  const auto ref = m["hv_reference"];
  const std::string ref_text = fmt::format("{:.17g},{:.17g},{:.17g}", ref[0].get<double>(),
                                           ref[1].get<double>(), ref[2].get<double>());
  std::ostringstream os;
  ASSERT_EQ(metrics_command(dir / "out" / "archive.csv", dir / "front.csv", ref_text, os), kExitOk);
  const auto r = nlohmann::json::parse(os.str());
  EXPECT_EQ(r["gd"].get<double>(), m["gd"].get<double>());
  EXPECT_EQ(r["hv"].get<double>(), m["hv"].get<double>());
  fs::remove_all(dir);
}

TEST(Solve, IterationLogKeysAndDeterminism) {
  const auto dir = scratch("det");
  const auto manifest = write_file(dir / "run.manifest", "problem = fonseca\nsolver.x0 = 0.1,-0.1,0.1,-0.1\nsolver.eval_budget = 300\nsolver.seed = 3\n");
  ASSERT_EQ(solve_command(manifest, dir / "a", 1), kExitOk);
  ASSERT_EQ(solve_command(manifest, dir / "b", 1), kExitOk);
  for (const auto* f : {"archive.csv", "iterations.jsonl", "density_surface.csv", "metrics.json"}) {
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
  }
  std::istringstream lines(slurp(dir / "a" / "iterations.jsonl"));
  std::string line;
  ASSERT_TRUE(std::getline(lines, line));
  const auto j = nlohmann::ordered_json::parse(line);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"k", "ref_index", "delta", "inner_shrinks", "t_plus", "rho",
                                            "accepted", "archive_size", "evals", "gd", "hv"}));
  fs::remove_all(dir);
}

TEST(Solve, ReplicatesUseOwnDirectories) {
  const auto dir = scratch("rep");
  const auto manifest = write_file(dir / "run.manifest", "problem = twin_sphere\nsolver.eval_budget = 100\n");
  ASSERT_EQ(solve_command(manifest, dir / "out", 3), kExitOk);
  for (int r = 0; r < 3; ++r) EXPECT_TRUE(fs::exists(dir / "out" / fmt::format("rep_{}", r) / "archive.csv"));
  const auto m = nlohmann::json::parse(slurp(dir / "out" / "rep_2" / "metrics.json"));
  EXPECT_EQ(m["seed"].get<int>(), 2);
  fs::remove_all(dir);
}

TEST(Solve, ExternalEvaluatorFailureExitsNonzero) {
  const auto dir = scratch("ext");
  const auto manifest = write_file(
      dir / "run.manifest", fmt::format("problem.command = {} bad\nproblem.n = 2\nproblem.p = 2\n"
                                        "problem.lower = 0, 0\nproblem.upper = 1, 1\n",
                                        MOTR_FAKE_EVALUATOR));
  EXPECT_EQ(solve_command(manifest, dir / "out", 1), kExitFailure);
  fs::remove_all(dir);
}

TEST(Solve, ExternalDtlz2Runs) {
  const auto dir = scratch("ext2");
  const auto manifest = write_file(
      dir / "run.manifest", fmt::format("problem.command = {} dtlz2\nproblem.n = 3\nproblem.p = 3\n"
                                        "problem.lower = 0, 0, 0\nproblem.upper = 1, 1, 1\n"
                                        "solver.eval_budget = 200\n",
                                        MOTR_FAKE_EVALUATOR));
  EXPECT_EQ(solve_command(manifest, dir / "out", 1), kExitOk);
  EXPECT_GT(read_objectives_csv(dir / "out" / "archive.csv").size(), 1u);
  fs::remove_all(dir);
}

TEST(Binary, SubcommandsAndExitCodes) {
  std::string out;
  EXPECT_EQ(run_cli("problems list", &out), 0);
  EXPECT_NE(out.find("dtlz2"), std::string::npos);
  EXPECT_EQ(run_cli("evaluate --problem dtlz2 --x 0,0,0.5", &out), 0);
  const auto f = nlohmann::json::parse(out);
  EXPECT_EQ(f.size(), 3u);
  EXPECT_DOUBLE_EQ(f[0].get<double>(), 1.0);
  EXPECT_NE(run_cli("evaluate --problem dtlz2 --x 0,0", &out), 0);
  EXPECT_NE(run_cli("bogus", &out), 0);

  const auto dir = scratch("bin");
  write_file(dir / "bad.manifest", "problem = dtlz2\nsolver.eval_budget = 0\n");
  EXPECT_NE(run_cli(fmt::format("solve --manifest {} --out {}", (dir / "bad.manifest").string(), (dir / "o").string())), 0);
  write_file(dir / "ok.manifest", "problem = twin_sphere\nsolver.eval_budget = 60\n");
  EXPECT_EQ(run_cli(fmt::format("solve --manifest {} --out {}", (dir / "ok.manifest").string(), (dir / "o").string())), 0);
  EXPECT_TRUE(fs::exists(dir / "o" / "metrics.json"));
  fs::remove_all(dir);
}
