#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "matorth_cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "matorth");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = matorth::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json parse(const Result& r) { return nlohmann::json::parse(r.out); }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override { unsetenv("MATORTH_TOL"); }
  void TearDown() override { unsetenv("MATORTH_TOL"); }
};

}  // namespace

TEST_F(Cli, CheckSymmetryIntroWithMassPasses) {
  const auto r = run({"check-symmetry", "--family", "hermite31", "--a", "1", "--t0", "0", "--zeta", "1", "--nmax", "30"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = parse(r);
  EXPECT_TRUE(j["verdict"].get<bool>());
  EXPECT_LT(j["max_residual"].get<double>(), 1e-10);
  EXPECT_EQ(j["config"]["family"], "hermite31");
  EXPECT_EQ(j["config"]["zeta"].get<double>(), 1.0);
}

TEST_F(Cli, OutputIsByteStable) {
  const std::vector<std::string> args{"verify-eigen", "--a", "2", "--zeta", "5", "--gamma", "2", "--n", "8"};
  EXPECT_EQ(run(args).out, run(args).out);
}

TEST_F(Cli, EigenvalueBlocksIdenticalAcrossMass) {
  const auto r0 = run({"verify-eigen", "--a", "1", "--zeta", "0"});
  const auto r1 = run({"verify-eigen", "--a", "1", "--zeta", "1"});
  ASSERT_EQ(r0.code, 0);
  ASSERT_EQ(r1.code, 0);
  const auto j0 = parse(r0), j1 = parse(r1);
  ASSERT_EQ(j0["eigenvalues"].size(), j1["eigenvalues"].size());
  for (std::size_t n = 0; n < j0["eigenvalues"].size(); ++n) {
    EXPECT_EQ(j0["eigenvalues"][n]["gamma_n"], j1["eigenvalues"][n]["gamma_n"]) << n;
  }
}

TEST_F(Cli, FindMassMatchesXiPlus) {
  const auto r = run({"find-mass", "--a", "1", "--t0", "3.5"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto m = parse(r)["mass"];
  const double xi = (3.5 + std::sqrt(4.0 + 3.5 * 3.5)) / 2.0;
  EXPECT_NEAR(m[0][1].get<double>() / m[1][1].get<double>(), xi, 1e-8);
}

TEST_F(Cli, FindMassNumericListsCandidates) {
  const auto r = run({"find-mass", "--numeric", "--a", "1", "--t0", "0.7"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_GE(parse(r)["candidates"].size(), 1u);
}

TEST_F(Cli, ScalarFindMassFailsVerdict) {
  EXPECT_EQ(run({"find-mass", "--family", "scalar-hermite", "--t0", "0.3"}).code, 2);
}

TEST_F(Cli, ScalarMassIsAParameterError) {
  EXPECT_EQ(run({"check-symmetry", "--family", "scalar-hermite", "--zeta", "1"}).code, 1);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"no-such-command"}).code, 1);
  EXPECT_EQ(run({"check-symmetry", "--bogus"}).code, 1);
  const auto r = run({"check-symmetry", "--family", "hermite31", "--a", "0"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("nonzero"), std::string::npos);
  EXPECT_EQ(run({"check-symmetry", "--family", "jacobi33", "--t0", "-3"}).code, 1);
}

TEST_F(Cli, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("check-symmetry"), std::string::npos);
}

TEST_F(Cli, TightToleranceFailsVerdict) {
  EXPECT_EQ(run({"check-symmetry", "--a", "1", "--zeta", "1", "--tol", "1e-30"}).code, 2);
}

TEST_F(Cli, EnvironmentToleranceAndFlagPrecedence) {
  setenv("MATORTH_TOL", "1e-30", 1);
  EXPECT_EQ(run({"check-symmetry", "--a", "1"}).code, 2);
  const auto r = run({"check-symmetry", "--a", "1", "--tol", "1e-9"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(parse(r)["config"]["tolerance"].get<double>(), 1e-9);
  setenv("MATORTH_TOL", "junk", 1);
  EXPECT_EQ(run({"check-symmetry"}).code, 1);
}

TEST_F(Cli, OutputFile) {
  const auto path = std::filesystem::temp_directory_path() / "matorth_cli_test.json";
  const auto r = run({"moments", "--nmax", "3", "--output", path.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  const auto j = nlohmann::json::parse(f);
  EXPECT_EQ(j["moments"].size(), 4u);
  std::filesystem::remove(path);
}

TEST_F(Cli, DensityGridCsv) {
  const auto r = run({"density-grid", "--from", "-1", "--to", "1", "--points", "3"});
  EXPECT_EQ(r.code, 0);
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "t,entry_11,entry_12,entry_21,entry_22");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST_F(Cli, EveryFamilyChecksSymmetry) {
  EXPECT_EQ(run({"check-symmetry", "--family", "laguerre32", "--a", "1", "--alpha", "0.5", "--t0", "0.5", "--zeta", "1"}).code, 0);
  EXPECT_EQ(run({"check-symmetry", "--family", "jacobi33", "--t0", "0.3", "--zeta", "1"}).code, 0);
  EXPECT_EQ(run({"check-symmetry", "--family", "general34", "--N", "4", "--alpha", "0.5", "--nu-last", "2", "--zeta", "1"}).code, 0);
  EXPECT_EQ(run({"check-symmetry", "--family", "scalar-laguerre", "--alpha", "1"}).code, 0);
}

TEST_F(Cli, ConeAndFourier) {
  EXPECT_EQ(run({"cone-reconstruct", "--a", "1", "--t0", "0.7", "--gamma", "2", "--zeta", "3", "--nmax", "20"}).code, 0);
  EXPECT_EQ(run({"fourier-check", "--a", "1", "--zeta", "1", "--x", "1"}).code, 0);
}

TEST_F(Cli, FamiliesListed) {
  const auto r = run({"families"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(parse(r)["families"].size(), 7u);
}
