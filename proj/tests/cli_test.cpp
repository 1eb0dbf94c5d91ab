/*
 * Copyright 2026 The polyrc Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(POLYRC_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string spec(const std::string& name) { return std::string("--spec ") + POLYRC_DATA_DIR + "/" + name; }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("polyrc_cli_test_" + name);
}

TEST(Cli, AnalyzeExampleThree) {
  auto r = run(spec("example3.json") + " analyze");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("d=4\n"), std::string::npos);
  EXPECT_NE(r.out.find("tau=[3,3,3,3,3]\n"), std::string::npos);
  EXPECT_NE(r.out.find("eta_bound[theta=1]=3\n"), std::string::npos);
}

TEST(Cli, AnalyzeExampleTwo) {
  auto r = run(spec("example2.json") + " analyze");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("lambda_bound=3\n"), std::string::npos);
  EXPECT_NE(r.out.find("deg_M=14\n"), std::string::npos);
}

TEST(Cli, InvalidModuli) {
  auto dup = temp_path("dup.json");
  std::ofstream(dup) << R"({"p": 5, "moduli": [[1, 1], [2, 1], [1, 1]]})";
  auto r = run("--spec " + dup.string() + " analyze");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("indices 0 and 2"), std::string::npos) << r.out;

  auto monic = temp_path("monic.json");
  std::ofstream(monic) << R"({"p": 5, "moduli": [[1, 2], [2, 1]]})";
  EXPECT_EQ(run("--spec " + monic.string() + " analyze").code, 3);

  auto constant = temp_path("constant.json");
  std::ofstream(constant) << R"({"p": 5, "moduli": [[1], [2, 1]]})";
  EXPECT_EQ(run("--spec " + constant.string() + " analyze").code, 3);
}

TEST(Cli, ParseErrors) {
  auto bad = temp_path("bad.json");
  std::ofstream(bad) << "{ not json";
  EXPECT_EQ(run("--spec " + bad.string() + " analyze").code, 2);
  EXPECT_EQ(run(spec("example3.json") + " encode --message 1,x").code, 2);
  EXPECT_EQ(run(spec("example3.json") + " decode --residues '1;2'").code, 2);
  EXPECT_EQ(run(spec("example3.json") + " frobnicate").code, 2);
  EXPECT_EQ(run(spec("example3.json") + " simulate --gammas 0.1 --trials 10").code, 2);
}

TEST(Cli, EncodeDecodeRoundTrip) {
  auto enc = run(spec("example3.json") + " encode --message 1,0,1");
  ASSERT_EQ(enc.code, 0);
  EXPECT_EQ(enc.out, "1,0,1;1,0,1;1,0,1;1,0,1;1,0,1\n");
  auto dec = run(spec("example3.json") + " decode --residues '1,0,1;1,0,1;3,2,1;1,0,1;1,0,1'");
  ASSERT_EQ(dec.code, 0) << dec.out;
  EXPECT_NE(dec.out.find("status=Exact\n"), std::string::npos);
  EXPECT_NE(dec.out.find("reconstruction=1,0,1\n"), std::string::npos);
}

TEST(Cli, DecodeFailureExitCode) {
  auto r = run(spec("example3.json") + " decode --residues '1,0,1;1,0,2;3,2,1;1,0,1;1,4,1'");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("status=Failed"), std::string::npos);
}

TEST(Cli, ContractViolations) {
  const std::string rv = " --residues '1,0,1;1,0,1;1,0,1;1,0,1;1,0,1'";
  EXPECT_EQ(run(spec("example3.json") + " decode --decoder combined --theta 4" + rv).code, 4);
  auto mixed = run(spec("example2.json") + " decode --decoder mixed --lambda 3 --residues '1;1;1;1;1'");
  EXPECT_EQ(mixed.code, 4);
  EXPECT_NE(mixed.out.find("< 3"), std::string::npos);
  EXPECT_EQ(run(spec("example3.json") + " --seed 1 bursts --widths 21").code, 4);
}

TEST(Cli, MixedDecodeWithRefinement) {
  auto r = run(spec("example2.json") + " decode --decoder mixed --residues '1;1;1;1;1'");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("status=Robust"), std::string::npos);
  EXPECT_NE(r.out.find("refined="), std::string::npos);
}

TEST(Cli, BurstsExampleThree) {
  auto r = run(spec("example3.json") + " --seed 3 bursts --trials 20");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("capacity width<=3: 1\n"), std::string::npos);
  EXPECT_NE(r.out.find("capacity width<=7: 0\n"), std::string::npos);
  EXPECT_NE(r.out.find("width=2 placements=19 trials=380 recovered=380 rate=1\n"), std::string::npos) << r.out;
  EXPECT_EQ(run(spec("example2.json") + " --seed 3 bursts").code, 3);
}

TEST(Cli, SimulateIsDeterministic) {
  auto a = temp_path("a.csv"), b = temp_path("b.csv");
  const std::string args = spec("example3.json") + " --seed 7 simulate --gammas 0.1,0,0.01 --trials 2000 --out ";
  ASSERT_EQ(run(args + a.string()).code, 0);
  ASSERT_EQ(run(args + b.string()).code, 0);
  const auto text = read_file(a);
  EXPECT_EQ(text, read_file(b));
  std::istringstream lines(text);
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  EXPECT_EQ(header, "gamma,trials,uncorrected_classic,uncorrected_combined,bound_classic,bound_combined,theta,seed");
  EXPECT_EQ(first, "0,2000,0,0,0,0,1,7");
}

TEST(Cli, UnwritableOutput) {
  EXPECT_EQ(run(spec("example3.json") + " --seed 1 simulate --gammas 0.1 --trials 10 --out /nonexistent/dir/x.csv").code,
            5);
  EXPECT_EQ(run(spec("example3.json") + " analyze --out /nonexistent/dir/x.txt").code, 5);
}

TEST(Cli, BoundsTable) {
  auto r = run(spec("example3.json") + " bounds --gammas 0.1");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("0.1,3,"), std::string::npos) << r.out;
  EXPECT_EQ(run(spec("example3.json") + " bounds --gammas 0.1 --theta 9").code, 4);
}

}  // namespace
