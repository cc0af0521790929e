#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "slowvol/errors.hpp"
#include "slowvol/experiment.hpp"

using namespace slowvol;
namespace fs = std::filesystem;

namespace {

const double inf = std::numeric_limits<double>::infinity();

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("slowvol_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_run_config(in, SLOWVOL_TEST_DATA);
}

const char* kSmallRun = R"(
[run]
out = ignored

[heis]
kind = group_growth
generators = catalog:heisenberg
m_max = 16

[z2file]
kind = group_growth
generators = heisenberg.txt
m_max = 12
bound = 4

[t2]
kind = flow_growth
model = flat_torus
dimension = 2
times = geometric 1 2 8
resolution = 64

[gam]
kind = gamma_eval
descriptor = T(2) x S(2)
expected = 3

[lemma]
kind = integral_lemma
function = power 3
times = geometric 1 2 9
)";

}  // namespace

TEST(Verdict, Rule) {
  EXPECT_EQ(decide(3.0, false, 3.0, 0.0), Verdict::pass);
  EXPECT_EQ(decide(2.95, false, 3.0, 0.1), Verdict::pass);
  EXPECT_EQ(decide(2.85, false, 3.0, 0.1), Verdict::fail);
  EXPECT_EQ(decide(inf, true, inf, 0.1), Verdict::pass);
  EXPECT_EQ(decide(5.0, false, inf, 0.1), Verdict::fail);
  EXPECT_EQ(decide(inf, true, 2.0, 0.1), Verdict::pass);
  EXPECT_EQ(decide(std::nan(""), true, inf, 0.1), Verdict::pass);
  EXPECT_EQ(decide(std::nan(""), true, 2.0, 0.1), Verdict::fail);
}

TEST(Config, Parsing) {
  const auto run = parse(kSmallRun);
  EXPECT_EQ(run.out_dir, fs::path(SLOWVOL_TEST_DATA) / "ignored");
  ASSERT_EQ(run.experiments.size(), 5u);
  EXPECT_EQ(run.experiments[0].id, "heis");
  EXPECT_EQ(run.experiments[0].kind, "group_growth");
  EXPECT_EQ(run.experiments[0].params.at("m_max"), "16");
  EXPECT_THROW(parse("[x]\nm_max = 3\n"), ConfigError);
  EXPECT_THROW(parse("[x]\nkind = teleport\n"), ConfigError);
  EXPECT_THROW(parse("[run]\nspeed = 3\n"), ConfigError);
  EXPECT_THROW(parse("[x\nkind = gamma_eval\n"), ConfigError);
  EXPECT_THROW(load_run_config("/nonexistent/run.ini"), ConfigError);
}

TEST(Config, ModelKeys) {
  EXPECT_EQ(model_from_params({{"model", "nil"}}).tag(), ModelTag::nil3);
  EXPECT_EQ(model_from_params({{"model", "flat_torus"}, {"dimension", "3"}}).dimension(), 3);
  const auto g = model_from_params({{"model", "flat_torus"}, {"metric", "2 0; 0 1"}});
  EXPECT_DOUBLE_EQ(g.hamiltonian(make_point({0, 0}, {1, 0})), 2.0);
  EXPECT_THROW(model_from_params({{"model", "kerr"}}), ConfigError);
}

TEST(Experiment, SmallRunPasses) {
  auto cfg = parse(kSmallRun);
  cfg.out_dir = scratch("small");
  const auto rows = run(cfg);
  ASSERT_EQ(rows.size(), 5u);
  for (const auto& r : rows) EXPECT_EQ(r.verdict, Verdict::pass) << r.id << ": " << r.message;
  EXPECT_DOUBLE_EQ(rows[0].bound, 4.0);
  EXPECT_NEAR(rows[2].measured, 1.0, 0.05);
  EXPECT_DOUBLE_EQ(rows[2].bound, 1.0);
  for (const char* f : {"heis_growth.csv", "heis_fit.csv", "t2_volume.csv", "t2_fit.csv",
                        "gam_gamma.csv", "lemma_integral.csv", "summary.txt"})
    EXPECT_TRUE(fs::exists(cfg.out_dir / f)) << f;
}

TEST(Experiment, CsvOutputsAreReproducible) {
  auto cfg = parse(kSmallRun);
  cfg.out_dir = scratch("repro_a");
  run(cfg);
  const auto first = cfg.out_dir;
  cfg.out_dir = scratch("repro_b");
  run(cfg);
  for (const auto& entry : fs::directory_iterator(first)) {
    if (entry.path().extension() != ".csv") continue;
    EXPECT_EQ(slurp(entry.path()), slurp(cfg.out_dir / entry.path().filename()))
        << entry.path().filename();
  }
}

TEST(Experiment, SummaryIsAppended) {
  auto cfg = parse("[g]\nkind = gamma_eval\ndescriptor = Nil(1)\n");
  cfg.out_dir = scratch("append");
  run(cfg);
  const auto once = slurp(cfg.out_dir / "summary.txt");
  run(cfg);
  const auto twice = slurp(cfg.out_dir / "summary.txt");
  EXPECT_GT(twice.size(), once.size());
  EXPECT_EQ(twice.substr(0, once.size()), once);
}

TEST(Experiment, ErrorsBecomeErrorRows) {
  const auto out = scratch("errors");
  const auto cfg = parse(
      "[typo]\nkind = gamma_eval\ndescriptor = S(2)\nexpectd = 1\n"
      "[bad]\nkind = gamma_eval\ndescriptor = S(\n"
      "[nofile]\nkind = group_growth\ngenerators = missing.txt\n"
      "[wrong]\nkind = gamma_eval\ndescriptor = T(2)\nexpected = 5\n");
  std::vector<SummaryRow> rows;
  for (const auto& e : cfg.experiments) rows.push_back(run_experiment(e, out));
  EXPECT_EQ(rows[0].verdict, Verdict::error);
  EXPECT_NE(rows[0].message.find("expectd"), std::string::npos);
  EXPECT_EQ(rows[1].verdict, Verdict::error);
  EXPECT_NE(rows[1].message.find("MalformedDescriptor"), std::string::npos);
  EXPECT_EQ(rows[2].verdict, Verdict::error);
  EXPECT_EQ(rows[3].verdict, Verdict::fail);
}

TEST(Experiment, SolIsExponentialOrExhausted) {
  const auto out = scratch("sol");
  const auto cfg = parse(
      "[sol]\nkind = flow_growth\nmodel = sol\nintegrator = rk4\nstep = 0.01\n"
      "measure = jacobian\ntangent_tolerance = inf\nfd_step = 1e-8\nresolution = 2\n"
      "certify = false\ntimes = 0.25 0.5 0.75 1 1.25 1.5 1.75 2 2.25 2.5 2.75 3\n");
  const auto row = run_experiment(cfg.experiments[0], out);
  EXPECT_TRUE(row.classification == "exponential" || row.classification == "budget_exhausted")
      << row.classification << " " << row.message;
  EXPECT_EQ(row.verdict, Verdict::pass);
  EXPECT_FALSE(std::isfinite(row.measured));
}
