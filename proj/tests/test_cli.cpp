#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "symphonic/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "symphonic");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = symphonic::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string config(const char* name) {
  return std::string(SYMPHONIC_SOURCE_DIR) + "/configs/" + name + ".yaml";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

} // namespace

TEST(Cli, CheckMapDilation) {
  const auto r = run({"check-map", "--zoo", "dilation:2", "--p", "2"});
  EXPECT_EQ(r.status, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("PASS   p_symphonic"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("PASS   horizontally_conformal"), std::string::npos);
  EXPECT_NE(r.out.find("lambda in [2.000e+00, 2.000e+00]"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("PASS   totally_geodesic"), std::string::npos);
}

TEST(Cli, CheckMapFailureStatus) {
  const auto r = run({"check-map", "--zoo", "cubic_warp"});
  EXPECT_EQ(r.status, 1);
}

TEST(Cli, Sweep) {
  const auto r = run({"sweep", "--identity", "thm1_unweighted", "--lambdas", "1,1.5,2,3"});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("exponent 4.000000"), std::string::npos) << r.out;
}

TEST(Cli, VerifyLemma3) {
  const auto r = run({"verify", "--identity", "lemma3", "--u", "stereographic", "--f",
                      "scaled_rotation:1.3", "--p", "2"});
  EXPECT_EQ(r.status, 0) << r.out << r.err;
}

TEST(Cli, VerifyWithConfigMaps) {
  const auto r = run({"verify", "--config", config("sphere_maps"), "--identity", "lemma3", "--u",
                      "stereo", "--f", "turn", "--samples", "20"});
  EXPECT_EQ(r.status, 0) << r.out << r.err;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({"frobnicate"}).status, 2);
  EXPECT_EQ(run({}).status, 2);
  const auto flag = run({"zoo", "--bogus"});
  EXPECT_EQ(flag.status, 2);
  EXPECT_NE(flag.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({"verify", "--identity", "thm99", "--u", "dilation:2", "--f", "f_quad"}).status, 2);
  EXPECT_EQ(run({"verify", "--identity", "thm1_weighted", "--u", "uu", "--f", "f_quad"}).status, 2);
  EXPECT_EQ(run({"check-map", "--zoo", "dilation:2", "--p", "0.5"}).status, 2);
  EXPECT_EQ(run({"check-map", "--zoo", "dilation:2", "--samples", "0"}).status, 2);
}

TEST(Cli, BadConfigNamesItem) {
  const auto r = run({"run", "--config", std::string(SYMPHONIC_SOURCE_DIR) +
                                             "/tests/data/unknown_object.yaml"});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("uu"), std::string::npos) << r.err;
  EXPECT_EQ(run({"run", "--config", "/nonexistent/file.yaml"}).status, 2);
}

TEST(Cli, Parse) {
  const auto ok = run({"parse", "2^3^2", "--arity", "1"});
  EXPECT_EQ(ok.status, 0);
  EXPECT_NE(ok.out.find("canonical: (2 ^ (3 ^ 2))"), std::string::npos) << ok.out;
  const auto bad = run({"parse", "x3 +"});
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.err.find("offset 4"), std::string::npos) << bad.err;
}

TEST(Cli, ZooJson) {
  const auto r = run({"zoo", "--json", "-"});
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("\"hopf\""), std::string::npos);
}

TEST(Cli, RunWritesByteStableReports) {
  const fs::path dir = fs::temp_directory_path() / "symphonic_cli_test";
  fs::create_directories(dir);
  const auto a = dir / "a.json", b = dir / "b.json";
  ::setenv("SYMPHONIC_THREADS", "1", 1);
  EXPECT_EQ(run({"run", "--config", config("dilation_quadratic"), "--json", a.string()}).status, 0);
  ::setenv("SYMPHONIC_THREADS", "3", 1);
  EXPECT_EQ(run({"run", "--config", config("dilation_quadratic"), "--json", b.string()}).status, 0);
  ::unsetenv("SYMPHONIC_THREADS");
  const auto text = slurp(a);
  EXPECT_FALSE(text.empty());
  EXPECT_EQ(text, slurp(b));
  EXPECT_NE(text.find("\"schema_version\": 1"), std::string::npos);
  fs::remove_all(dir);
}
