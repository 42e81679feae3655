#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "fractalcalc/io.hpp"

namespace {

struct CliRun {
  int code;
  std::string out;
};

CliRun run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " FRACTALCALC_CLI " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string fixture(const std::string& name) { return std::string(FRACTALCALC_FIXTURES) + "/" + name + ".json"; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string* header = nullptr) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream fields(line);
    std::string f;
    while (std::getline(fields, f, ',')) row.push_back(std::stod(f));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST(Cli, StaircaseTable) {
  const CliRun r = run("staircase --set cantor:m=2,r=0.3333333333 --grid 1000");
  ASSERT_EQ(r.code, 0);
  std::string header;
  const auto rows = parse_csv(r.out, &header);
  EXPECT_EQ(header, "x,S");
  ASSERT_EQ(rows.size(), 1000u);
  EXPECT_EQ(rows.front()[0], 0.0);
  EXPECT_EQ(rows.back()[0], 1.0);
  for (std::size_t i = 1; i < rows.size(); ++i) ASSERT_LE(rows[i - 1][1], rows[i][1]);
  const double alpha = std::log(2.0) / std::log(1.0 / 0.3333333333);
  EXPECT_NEAR(rows.back()[1], std::tgamma(alpha + 1.0), 1e-14);
}

TEST(Cli, Deterministic) {
  EXPECT_EQ(run("staircase --grid 50").out, run("staircase --grid 50").out);
}

TEST(Cli, Dimension) {
  auto dim = [](const std::string& set) { return parse_csv(run("dim --set " + set).out).at(0).at(0); };
  EXPECT_NEAR(dim("cantor:m=2,r=0.3333333333333333"), std::log(2.0) / std::log(3.0), 1e-3);
  EXPECT_NEAR(dim("cantor:m=2,r=0.25"), 0.5, 1e-3);
  EXPECT_NEAR(dim("cantor:m=1,r=1"), 1.0, 1e-3);
  const auto j = fractalcalc::json::parse(run("dim --format json").out);
  EXPECT_NEAR(j.at("gamma_dimension").get<double>(), std::log(2.0) / std::log(3.0), 1e-3);
}

TEST(Cli, DerivativeAndIntegral) {
  const auto rows = parse_csv(run("deriv --fn exp --at 0.3333333333333333 --at 0.5").out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NEAR(rows[0][2], std::exp(rows[0][3]), 1e-6);
  EXPECT_EQ(rows[1][2], 0.0);  // gap point

  const auto j = fractalcalc::json::parse(run("integrate --fn one --format json").out);
  EXPECT_NEAR(j.at("value").get<double>(), std::tgamma(std::log(2.0) / std::log(3.0) + 1.0), 1e-13);
}

TEST(Cli, SolveFixtures) {
  const auto osc = parse_csv(run("solve " + fixture("oscillator4") + " --grid 11").out);
  for (const auto& row : osc) {
    const double t = row[1];
    EXPECT_NEAR(row[2], std::cos(t) + std::sin(t) + t * std::cos(t) + t * std::sin(t), 1e-12);
  }
  const auto spring = parse_csv(run("solve " + fixture("spring_b") + " --grid 11").out);
  for (const auto& row : spring) EXPECT_NEAR(row[2], -2.0 * std::cos(std::sqrt(6.0) * row[1]), 1e-12);

  const auto constant = parse_csv(run("solve " + fixture("constant") + " --grid 5").out);
  for (const auto& row : constant) EXPECT_NEAR(row[2], 5.0, 1e-14);

  const auto cos2 = parse_csv(run("solve " + fixture("cos2") + " --grid 7").out);
  const auto cos2_vop = parse_csv(run("solve " + fixture("cos2_vop") + " --grid 7").out);
  ASSERT_EQ(cos2.size(), cos2_vop.size());
  // Both are particular solutions; they differ by the homogeneous cos(t) / 3.
  for (std::size_t i = 0; i < cos2.size(); ++i) {
    EXPECT_NEAR(cos2_vop[i][2] - cos2[i][2], std::cos(cos2[i][1]) / 3.0, 1e-6);
  }

  const CliRun general = run("solve " + fixture("no_ics") + " --format json");
  ASSERT_EQ(general.code, 0);
  EXPECT_TRUE(fractalcalc::json::parse(general.out).at("hom_coeffs").is_null());
}

TEST(Cli, RoundTripIsBitIdentical) {
  const std::string prefix = ::testing::TempDir() + "fractalcalc_rt";
  for (const char* name : {"resonant3", "cos2_vop", "spring_a"}) {
    ASSERT_EQ(run("solve " + fixture(name) + " --grid 33 --out " + prefix).code, 0) << name;
    const CliRun again = run("sample " + prefix + ".json --grid 33");
    ASSERT_EQ(again.code, 0);
    EXPECT_EQ(again.out, slurp(prefix + ".csv")) << name;
  }
}

TEST(Cli, Demo) {
  const auto j = fractalcalc::json::parse(run("demo resonant3 --format json").out);
  EXPECT_NEAR(j.at("A").get<double>(), 2.0 / 3.0, 1e-12);
  const auto spring = fractalcalc::json::parse(run("demo spring_mass --family A --grid 33 --format json").out);
  EXPECT_LT(spring.at("coupling_residual").get<double>(), 1e-8);
  std::string header;
  parse_csv(run("demo spring_mass --grid 17 --format csv").out, &header);
  EXPECT_EQ(header, "x,S,f,u2");
}

TEST(Cli, DepthFromEnvironment) {
  const CliRun coarse = run("staircase --grid 11", "FRACTALCALC_DEPTH=2");
  const CliRun fine = run("staircase --grid 11");
  ASSERT_EQ(coarse.code, 0);
  EXPECT_NE(coarse.out, fine.out);
  EXPECT_EQ(run("staircase --grid 11 --depth 2").out, coarse.out);
  EXPECT_EQ(run("staircase --grid 11 --depth 40", "FRACTALCALC_DEPTH=2").out, fine.out);
  EXPECT_EQ(run("staircase", "FRACTALCALC_DEPTH=zero").code, 2);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("staircase --bogus").code, 2);
  EXPECT_EQ(run("staircase --set cantor:m=2").code, 2);
  EXPECT_EQ(run("staircase --set cantor:m=2,r=0.7").code, 2);
  EXPECT_EQ(run("demo pendulum").code, 2);
  EXPECT_EQ(run("solve " + fixture("bad_schema")).code, 2);
  EXPECT_EQ(run("solve " + fixture("order_zero")).code, 2);
  EXPECT_EQ(run("solve /nonexistent/problem.json").code, 2);
  EXPECT_EQ(run("solve " + fixture("singular_anchor")).code, 3);
  EXPECT_EQ(run("deriv --fn nope").code, 2);
  EXPECT_EQ(run("").code, 2);
}
