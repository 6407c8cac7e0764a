#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "cli.hpp"

using difren::cli::cli_dispatch;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "difren");
  std::ostringstream out, err;
  const int code = cli_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST(Cli, ApplyPrintsResult) {
  const auto r = run({"apply", "--op", "box", "--fn", "r^2", "--dim", "4"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(first_line(r.out), "8");
}

TEST(Cli, RegulateJson) {
  const auto r = run({"regulate", "--target", "r^-4", "--dim", "4", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["command"], "regulate");
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["symbolic"]["operator"], "box");
  EXPECT_EQ(j["symbolic"]["seed"], "-1/4*log(r^2*M^2)/r^2");
  EXPECT_EQ(j["symbolic"]["round_trip_exact"], true);
  EXPECT_EQ(j["inputs"]["target"], "r^-4");
}

TEST(Cli, CallanSymanzik) {
  const auto r = run({"cs", "--target", "r^-4", "--p", "1", "--dim", "4", "--json"});
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["symbolic"]["text"], "2*pi^2");
  EXPECT_NEAR(j["results"]["value"].get<double>(), 19.739209, 1e-6);
  ASSERT_EQ(j["numeric_checks"].size(), 1u);
  EXPECT_EQ(j["numeric_checks"][0]["pass"], true);
  EXPECT_NEAR(j["numeric_checks"][0]["actual"].get<double>(), 19.739209, 1e-5);
}

TEST(Cli, TransformWithOracleCheck) {
  const auto r = run({"transform", "--fn", "r^-2", "--at", "2", "--json"});
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["symbolic"]["text"], "4*pi^2/p^2");
  EXPECT_EQ(j["numeric_checks"][0]["pass"], true);
  const auto rep = run({"transform", "--rep-target", "r^-4"});
  EXPECT_EQ(first_line(rep.out), "-pi^2*log(p^2/M^2) + (2*pi^2*ln2 - 2*pi^2*gammaE)");
}

TEST(Cli, SurfaceAndVerify) {
  auto r = run({"surface", "--target", "r^-4", "--eps", "0.1", "--json"});
  ASSERT_EQ(r.code, 0) << r.out;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["symbolic"]["text"], "pi^2 - 2*pi^2*log(eps*M)");
  EXPECT_EQ(j["symbolic"]["leading_divergence"]["log_pow"], 1);

  r = run({"verify", "--target", "r^-4", "--p", "1", "--eps-grid", "0.2,0.1,0.05", "--json"});
  ASSERT_EQ(r.code, 0) << r.out;
  j = json::parse(r.out);
  EXPECT_EQ(j["results"]["table"].size(), 3u);
  EXPECT_EQ(j["numeric_checks"].size(), 4u);
  EXPECT_LT(j["results"]["fitted_c"].get<double>(), 1.0);
}

TEST(Cli, AuditReportsResidual) {
  const auto r = run({"audit", "--a", "r^-2", "--b", "r^-2", "--p0", "1", "--json"});
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["symbolic"]["text"], "r^-4");
  EXPECT_EQ(j["results"]["transform_product"]["route"], "regularized");
  EXPECT_GT(j["results"]["residual"].get<double>(), 1.0);
  EXPECT_EQ(j["flags"][1], "residual exceeds tolerance");
}

TEST(Cli, OracleTruncated) {
  const auto r = run({"oracle", "--fn", "r^-4", "--p", "1", "--eps", "0.1", "--json"});
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j["results"]["value"].is_number());
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"apply", "--op", "box", "--fn", "r^^2"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"apply", "--op", "box"}).code, 2);
  EXPECT_EQ(run({"transform", "--fn", "r^-4"}).code, 2);
  EXPECT_EQ(run({"transform", "--fn", "r^-2", "--at", "1", "--tol", "1e-30"}).code, 1);
  EXPECT_EQ(run({"oracle", "--fn", "r^-4", "--p", "1"}).code, 2);
  const auto parse_fail = run({"regulate", "--target", "r^-4 + $", "--json"});
  const auto j = json::parse(parse_fail.out);
  EXPECT_EQ(j["status"], "error");
  EXPECT_EQ(j["error"]["code"], "parse_error");
  EXPECT_NE(j["error"]["message"].get<std::string>().find("column 8"), std::string::npos);
}

TEST(Cli, ConfigFileAndEnvironment) {
  const auto path = std::filesystem::temp_directory_path() / "difren_test.conf";
  {
    std::ofstream(path) << "# defaults\ndim = 3\nmass = 2\ntail_method = asymptotic\n";
  }
  auto r = run({"apply", "--op", "box", "--fn", "r^2", "--config", path.string(), "--json"});
  auto j = json::parse(r.out);
  EXPECT_EQ(j["inputs"]["dim"], 3);
  EXPECT_EQ(j["symbolic"]["text"], "6");
  // explicit flags win
  r = run({"apply", "--op", "box", "--fn", "r^2", "--config", path.string(), "--dim", "5", "--json"});
  EXPECT_EQ(json::parse(r.out)["symbolic"]["text"], "10");

  ::setenv(difren::cli::kConfigEnv, path.string().c_str(), 1);
  r = run({"apply", "--op", "box", "--fn", "r^2", "--json"});
  EXPECT_EQ(json::parse(r.out)["inputs"]["mass"].get<double>(), 2.0);
  ::unsetenv(difren::cli::kConfigEnv);

  {
    std::ofstream(path) << "no_such_key = 1\n";
  }
  r = run({"apply", "--op", "box", "--fn", "r^2", "--config", path.string(), "--json"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(json::parse(r.out)["error"]["code"], "config");
  std::filesystem::remove(path);
}

TEST(Cli, JsonIsDeterministicAndUsesFullPrecision) {
  const std::vector<std::string> args{"verify", "--target", "r^-4", "--p", "1", "--eps-grid", "0.2,0.1", "--json"};
  const auto a = run(args), b = run(args);
  EXPECT_EQ(a.out, b.out);
  const auto j = json::parse(a.out);
  EXPECT_NE(a.out.find("\"mass\": 1.0,"), std::string::npos);
  EXPECT_EQ(j["inputs"]["eps_grid"], "0.2,0.1");
}

TEST(Cli, SeventeenDigitFormatting) {
  EXPECT_EQ(difren::cli::dump17(json(0.1), 0), "0.10000000000000001");
  EXPECT_EQ(difren::cli::dump17(json(2.0), 0), "2.0");
  EXPECT_EQ(difren::cli::dump17(json::parse(R"({"a":[1,2.5,"x"]})"), 0), R"({"a":[1,2.5,"x"]})");
}
