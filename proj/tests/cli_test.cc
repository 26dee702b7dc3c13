// Copyright 2026 The ubmrps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#ifndef UBMRPS_CLI_PATH
#error "UBMRPS_CLI_PATH must be defined"
#endif

namespace {

struct CliResult {
  int code;
  std::string out;
};

CliResult run(const std::string& args) {
  const std::string cmd = std::string(UBMRPS_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  EXPECT_NE(pipe, nullptr);
  std::string out;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / ("ubmrps_cli_test_" + name);
  std::ofstream(p) << body;
  return p;
}

TEST(CliTest, SampleIsDeterministic) {
  const CliResult a = run("sample --N 3 --t 0.2 --M 4 --seed 11 --step 0.01");
  const CliResult b = run("sample --N 3 --t 0.2 --M 4 --seed 11 --step 0.01");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto doc = nlohmann::json::parse(a.out);
  EXPECT_EQ(doc["states"].size(), 4u);
  EXPECT_EQ(doc["states"][0].size(), 3u);
  EXPECT_EQ(doc["config"]["seed"], 11);
  EXPECT_EQ(doc["metadata"]["N"], 3);
  const CliResult c = run("sample --N 3 --t 0.2 --M 4 --seed 12 --step 0.01");
  EXPECT_NE(a.out, c.out);
}

TEST(CliTest, SampleAtTimeZeroReturnsInitialState) {
  const CliResult r = run("sample --N 2 --t 0 --M 2 --init e2 --format csv");
  ASSERT_EQ(r.code, 0);
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 5u);
  EXPECT_EQ(l[0], "sample,j,re,im");
  EXPECT_EQ(l[1], "0,1,0,0");
  EXPECT_EQ(l[2], "0,2,1,0");
}

TEST(CliTest, MomentsCsv) {
  const CliResult r = run("moments --N 4 --tgrid 0:0.5:1 --p 1 --format csv");
  ASSERT_EQ(r.code, 0);
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 4u);
  EXPECT_EQ(l[0], "t,value");
  EXPECT_EQ(l[1], "0,1");
  EXPECT_EQ(l[2].rfind("0.5,", 0), 0u);
  EXPECT_EQ(l[3].rfind("1,", 0), 0u);
}

TEST(CliTest, MomentsWithMonteCarloColumns) {
  const CliResult r = run("moments --N 4 --tgrid 0.5,1 --p 1 --M 500 --step 0.01 --format csv");
  ASSERT_EQ(r.code, 0);
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(l[0], "t,value,mc_mean,mc_se");
}

TEST(CliTest, JsonCarriesConfigEcho) {
  const CliResult r = run("covariance --N 4 --t 1 --j 1 --k 3 --init uniform");
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["config"]["command"], "covariance");
  EXPECT_EQ(doc["config"]["k"], 3);
  EXPECT_EQ(doc["config"]["tgrid"].size(), 1u);
  EXPECT_EQ(doc["rows"].size(), 1u);
}

TEST(CliTest, ObservableFromFile) {
  const auto a = temp_file("obs.json", "[[[1,0],[0,0]],[[0,0],[-1,0]]]");
  const CliResult r = run("observable --N 2 --t 0 --A " + a.string() + " --format csv");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out).at(1), "0,1");
  const auto bad = temp_file("bad.json", "[[[1,0],[1,0]],[[0,0],[-1,0]]]");
  EXPECT_EQ(run("observable --N 2 --t 0 --A " + bad.string()).code, 2);
  EXPECT_EQ(run("observable --N 2 --t 0").code, 2);
}

TEST(CliTest, InitFromFileChecksNorm) {
  const auto good = temp_file("psi.json", "[[0.6,0],[0,0.8]]");
  EXPECT_EQ(run("entropy --N 2 --t 1 --init " + good.string()).code, 0);
  const auto bad = temp_file("psi_bad.json", "[[0.6,0],[0,0.7]]");
  EXPECT_EQ(run("entropy --N 2 --t 1 --init " + bad.string()).code, 2);
}

TEST(CliTest, Laplace) {
  const CliResult r = run("laplace --N 4 --t 1 --lgrid -1:1:1 --format csv");
  ASSERT_EQ(r.code, 0);
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 4u);
  EXPECT_EQ(l[0], "lambda,value");
  EXPECT_EQ(l[2], "0,1");
}

TEST(CliTest, ValidateList) {
  const CliResult r = run("validate --list");
  ASSERT_EQ(r.code, 0);
  const auto l = lines(r.out);
  EXPECT_EQ(l.size(), 74u);
  EXPECT_EQ(l.front(), "moment/j=1/p=1/t=0.1");
  EXPECT_EQ(lines(run("validate --list --batteries haar").out).size(), 15u);
  EXPECT_EQ(run("validate --list --batteries nope").code, 2);
}

TEST(CliTest, ValidateReducedRunAndFailureExit) {
  const auto out = std::filesystem::temp_directory_path() / "ubmrps_cli_test_val.json";
  const CliResult ok = run("validate --M 3000 --tgrid 0.5 --step 0.01 --batteries moments,observable --out " + out.string());
  std::ifstream in(out);
  const auto doc = nlohmann::json::parse(in);
  EXPECT_EQ(doc["config"]["M"], 3000);
  EXPECT_EQ(ok.code, doc["all_pass"].get<bool>() ? 0 : 1);
  const CliResult tight = run("validate --tgrid 0.5 --step 0.01 --batteries inversion --threshold 0.001");
  EXPECT_EQ(tight.code, 1);
}

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("moments --N 4").code, 2);
  EXPECT_EQ(run("moments --N 4 --t 1 --j 5").code, 2);
  EXPECT_EQ(run("moments --N 4 --tgrid 1:0:2").code, 2);
  EXPECT_EQ(run("moments --N 4 --t 1 --format xml").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

}  // namespace
