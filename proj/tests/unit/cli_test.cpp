// Copyright 2026 The spinnet Authors
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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace spinnet::cli {
namespace {

using Json = nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

Json json_of(const Result& r) {
  EXPECT_EQ(r.code, kExitOk) << r.err;
  return Json::parse(r.out);
}

std::string temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("spinnet_cli_" + name);
  std::ofstream(path) << body;
  return path.string();
}

TEST(Cli, SymbolSixJ) {
  const Json j = json_of(call({"symbol", "6j", "1/2", "1/2", "1", "1/2", "1/2", "1"}));
  EXPECT_EQ(j["square"], "1/36");
  EXPECT_EQ(j["sign"], 1);
}

TEST(Cli, TextFormat) {
  const Result r = call({"--format", "text", "symbol", "cg", "1/2", "1/2", "1/2", "-1/2", "1", "0"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("square: 1/2"), std::string::npos);
}

TEST(Cli, VerifyPasses) {
  const Json j = json_of(call({"verify", "pentagon", "--max-spin", "1/2", "--exhaustive"}));
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_GT(j["checked"].get<int>(), 0);
}

TEST(Cli, GraphStats) {
  const Json j = json_of(call({"graph", "stats", "--n", "3"}));
  EXPECT_EQ(j["order"], 15);
  EXPECT_EQ(j["size"], 30);
  EXPECT_EQ(j["diameter"], 3);
}

TEST(Cli, GraphExportJsonLines) {
  const Result r = call({"graph", "export", "--n", "2", "--as", "jsonl"});
  ASSERT_EQ(r.code, kExitOk);
  std::istringstream lines(r.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    EXPECT_TRUE(Json::parse(line).contains("adj"));
    ++count;
  }
  EXPECT_EQ(count, 3);
}

TEST(Cli, PathAndCompile) {
  const Json p = json_of(call({"path", "--n", "2", "--from", "((1 2) 3)", "--to", "(1 (2 3))"}));
  EXPECT_EQ(p["distance"], 1);
  const Json c = json_of(call({"compile", "--spins", "1/2,1/2,1/2", "--j", "1/2", "--from",
                               "((1 2) 3)", "--to", "(1 (2 3))", "--check-paths"}));
  EXPECT_EQ(c["dimension"], 2);
  EXPECT_TRUE(c["path_check"]["passed"].get<bool>());
}

TEST(Cli, GeneratorFromCompileOutput) {
  const Result c = call({"compile", "--spins", "1,1,1", "--j", "1", "--from", "((1 2) 3)", "--to",
                         "((1 3) 2)"});
  ASSERT_EQ(c.code, kExitOk);
  const Json g = json_of(call({"generator", "--matrix", temp_file("gen.json", c.out)}));
  EXPECT_LT(g["reconstruction_error"].get<double>(), 1e-12);
  EXPECT_LT(g["hermiticity_defect"].get<double>(), 1e-14);
}

TEST(Cli, PrcheckCsv) {
  const Result r =
      call({"--format", "csv", "prcheck", "--spins", "1,1,1,1,1,1", "--scales", "2,4"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out.rfind("lambda,exact,estimate,abs_err,rel_env_err", 0), 0u);
}

TEST(Cli, DensityRoundtrip) {
  const std::string file = temp_file(
      "rho.json", R"({"labels":{"j_bra":"1/2","j_ket":"1/2"},"matrix":[[[0.7,0],[0.1,0.2]],[[0.1,-0.2],[0.3,0]]]})");
  const Json j = json_of(call({"density", "roundtrip", "--in", file}));
  EXPECT_LT(j["max_error"].get<double>(), 1e-14);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(call({}).code, kExitUsage);
  EXPECT_EQ(call({"nonsense"}).code, kExitUsage);
  EXPECT_EQ(call({"symbol", "6j", "1/2", "1/2"}).code, kExitUsage);
  const Result bad = call({"path", "--n", "2", "--from", "((1 2) 3))", "--to", "(1 (2 3))"});
  EXPECT_EQ(bad.code, kExitUsage);
  EXPECT_NE(bad.err.find("position 9"), std::string::npos);
  EXPECT_EQ(call({"compile", "--spins", "1/2,1/2", "--j", "1/2", "--from", "((1 2) 3)", "--to",
                  "(1 (2 3))"})
                .code,
            kExitDomain);
  EXPECT_EQ(call({"--format", "csv", "graph", "build", "--n", "2"}).code, kExitUsage);
  EXPECT_EQ(call({"--digits", "4", "symbol", "6j", "1", "1", "1", "1", "1", "1"}).code, kExitUsage);
}

TEST(Cli, Deterministic) {
  const std::vector<std::string> args{"--seed", "9", "verify", "triangle", "--max-spin", "1"};
  const Result first = call(args);
  EXPECT_EQ(first.code, kExitOk) << first.err;
  EXPECT_EQ(first.out, call(args).out);
}

}  // namespace
}  // namespace spinnet::cli
