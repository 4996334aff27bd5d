#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dpsqkd/bounds.hpp"
#include "dpsqkd/commands.hpp"
#include "dpsqkd/errors.hpp"

using namespace dpsqkd;

namespace {

double num(const Cell& c) { return std::get<double>(c); }

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

RunConfig cfg_for(Command cmd) {
  RunConfig c;
  c.command = cmd;
  return c;
}

}  // namespace

TEST(LambdaGrid, ParseAndValues) {
  auto g = LambdaGrid::parse("0.1:10:3");
  auto v = g.values();
  ASSERT_EQ(v.size(), 3u);
  EXPECT_DOUBLE_EQ(v[0], 0.1);
  EXPECT_NEAR(v[1], 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(v[2], 10.0);
  EXPECT_EQ(LambdaGrid::parse("1:1:1").values(), std::vector<double>{1.0});
  for (const char* bad : {"1:2", "a:b:c", "2:1:5", "0:1:5", "1:2:0", "1:2:3x"})
    EXPECT_THROW(LambdaGrid::parse(bad), InvalidInput) << bad;
}

TEST(RunConfig, Validation) {
  RunConfig c;
  EXPECT_NO_THROW(c.validate());
  c.L = 2;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = RunConfig{};
  c.e_b = 0.7;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = RunConfig{};
  c.nu = 3;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = RunConfig{};
  c.dist_step = 0.0;
  EXPECT_NO_THROW(c.validate());  // distances only matter for keyrate
  c.command = Command::Keyrate;
  EXPECT_THROW(c.validate(), InvalidInput);
}

TEST(Bound, OnePhotonColumnsMatchClosedForm) {
  auto c = cfg_for(Command::Bound);
  c.nu = 1;
  auto t = cmd_bound(c);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"model", "nu", "lambda", "omega_minus", "omega_plus", "omega", "branch"}));
  ASSERT_EQ(t.rows.size(), 50u);
  for (const auto& r : t.rows) {
    double lam = num(r[2]);
    EXPECT_NEAR(num(r[4]), omega1_plus(lam), 1e-15);
    EXPECT_NEAR(num(r[5]), omega1(lam), 1e-15);
    EXPECT_EQ(num(r[3]), 0.0);
  }
}

TEST(Bound, ZeroPhotonIsMinusHalfLambda) {
  auto c = cfg_for(Command::Bound);
  c.nu = 0;
  auto t = cmd_bound(c);
  for (const auto& r : t.rows) {
    EXPECT_EQ(num(r[5]), -0.5 * num(r[2]));
    EXPECT_TRUE(std::holds_alternative<std::monostate>(r[3]));
  }
}

TEST(Bound, BothModelsTwoPhotons) {
  auto c = cfg_for(Command::Bound);
  c.nu = 2;
  c.model = ModelChoice::Both;
  c.lambda_grid = LambdaGrid::parse("1:1:1");
  auto t = cmd_bound(c);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(std::get<std::string>(t.rows[0][0]), "comp");
  EXPECT_EQ(std::get<std::string>(t.rows[1][0]), "sp");
  EXPECT_NEAR(num(t.rows[0][4]), (3 + std::sqrt(17.0)) / 8, 1e-12);
  EXPECT_GE(num(t.rows[1][5]), num(t.rows[0][5]));
}

TEST(Bound, DefaultCoversAllPhotonNumbers) {
  auto t = cmd_bound(cfg_for(Command::Bound));
  EXPECT_EQ(t.rows.size(), 150u);
}

TEST(Curve, OnePhotonRowAndOrdering) {
  auto c = cfg_for(Command::Curve);
  c.nu = 1;
  c.model = ModelChoice::Both;
  auto t = cmd_curve(c);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"e_b", "e_ph_comp", "e_ph_sp"}));
  ASSERT_EQ(t.rows.size(), 501u);
  EXPECT_NEAR(num(t.rows[20][0]), 0.02, 1e-17);
  EXPECT_NEAR(num(t.rows[20][1]), (3 + std::sqrt(5.0)) * 0.02, 1e-12);
  for (const auto& r : t.rows) EXPECT_LE(num(r[1]), num(r[2]) + 1e-12);
}

TEST(Keyrate, HalfErrorRateHasNoKey) {
  auto c = cfg_for(Command::Keyrate);
  c.e_b = 0.5;
  c.dist_end = 20.0;
  c.dist_step = 10.0;
  c.table_points = 1025;
  auto t = cmd_keyrate(c);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"distance_km", "eta", "G_comp", "alpha_sq_opt_comp", "gamma_opt_comp",
                                                 "no_key_comp"}));
  ASSERT_EQ(t.rows.size(), 3u);
  for (const auto& r : t.rows) {
    EXPECT_EQ(num(r[2]), 0.0);
    EXPECT_TRUE(std::get<bool>(r[5]));
  }
}

TEST(Keyrate, RatioColumnWithBothModels) {
  auto c = cfg_for(Command::Keyrate);
  c.model = ModelChoice::Both;
  c.dist_end = 0.0;
  auto t = cmd_keyrate(c);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.columns.back(), "ratio");
  double ratio = num(t.rows[0].back());
  EXPECT_GE(ratio, 1.12);
  EXPECT_LE(ratio, 1.32);
}

TEST(Verify, DefaultPassesAndCanaryFails) {
  std::ostringstream out, err;
  auto c = cfg_for(Command::Verify);
  EXPECT_EQ(run(c, out, err), kExitOk) << err.str();
  auto ls = lines(out.str());
  EXPECT_EQ(ls.front(), "suite,check,L,lambda,residual,tolerance,passed");
  EXPECT_GT(ls.size(), 1000u);

  std::ostringstream out2, err2;
  c.canary = 1e-3;
  EXPECT_EQ(run(c, out2, err2), kExitFailure);
  EXPECT_NE(err2.str().find("verification failed"), std::string::npos);
  EXPECT_NE(err2.str().find("omega"), std::string::npos);
}

TEST(Run, UsageErrorsExitTwo) {
  std::ostringstream out, err;
  auto c = cfg_for(Command::Bound);
  c.L = 1;
  EXPECT_EQ(run(c, out, err), kExitUsage);
  EXPECT_NE(err.str().find("--L"), std::string::npos);
  c = cfg_for(Command::Bound);
  c.out = "/nonexistent-dir/x.csv";
  EXPECT_EQ(run(c, out, err), kExitUsage);
}

TEST(Run, VerifyRangeBelowThreeIsUsage) {
  std::ostringstream out, err;
  auto c = cfg_for(Command::Verify);
  c.L_max = 2;
  EXPECT_EQ(run(c, out, err), kExitUsage);
}

TEST(Output, CsvHeaderAndSeventeenDigits) {
  std::ostringstream out, err;
  auto c = cfg_for(Command::Bound);
  c.nu = 1;
  c.lambda_grid = LambdaGrid::parse("0.3:0.3:1");
  ASSERT_EQ(run(c, out, err), kExitOk);
  auto ls = lines(out.str());
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_EQ(ls[0], "model,nu,lambda,omega_minus,omega_plus,omega,branch");
  EXPECT_EQ(ls[1].substr(0, 7), "comp,1,");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::strtod(format_double(omega1(0.3)).c_str(), nullptr), omega1(0.3));
}

TEST(Output, JsonMirrorsRows) {
  std::ostringstream out, err;
  auto c = cfg_for(Command::Bound);
  c.nu = 0;
  c.format = Format::Json;
  c.lambda_grid = LambdaGrid::parse("1:2:2");
  ASSERT_EQ(run(c, out, err), kExitOk);
  auto j = nlohmann::json::parse(out.str());
  ASSERT_TRUE(j.contains("config"));
  ASSERT_EQ(j["rows"].size(), 2u);
  EXPECT_EQ(j["rows"][0]["omega"].get<double>(), -0.5);
  EXPECT_TRUE(j["rows"][0]["omega_minus"].is_null());
  EXPECT_EQ(j["config"]["command"], "bound");
}

TEST(Output, CsvQuotesAwkwardStrings) {
  Table t;
  t.columns = {"a", "b"};
  t.add_row({std::string("x,y"), std::string("say \"hi\"")});
  std::ostringstream os;
  write_csv(os, t);
  EXPECT_EQ(os.str(), "a,b\n\"x,y\",\"say \"\"hi\"\"\"\n");
  EXPECT_THROW(t.add_row({1.0}), InvalidInput);
}

TEST(Output, RepeatRunsAreByteIdentical) {
  auto c = cfg_for(Command::Curve);
  c.nu = 2;
  c.eb_points = 51;
  std::ostringstream a, b, err;
  ASSERT_EQ(run(c, a, err), kExitOk);
  ASSERT_EQ(run(c, b, err), kExitOk);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Output, WritesToFile) {
  auto path = std::string(::testing::TempDir()) + "dpsqkd_bound.csv";
  auto c = cfg_for(Command::Bound);
  c.nu = 0;
  c.out = path;
  std::ostringstream out, err;
  ASSERT_EQ(run(c, out, err), kExitOk);
  EXPECT_TRUE(out.str().empty());
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, "model,nu,lambda,omega_minus,omega_plus,omega,branch");
  std::remove(path.c_str());
}
