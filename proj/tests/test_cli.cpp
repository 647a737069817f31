// Copyright 2026 Splitmatch Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Drives the installed command-line binary end to end. The binary path comes
// from the SPLITMATCH_CLI environment variable (set by CMake).

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "splitmatch/fault_model.h"

namespace splitmatch {
namespace {

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

std::string cli_path() {
  const char* env = std::getenv("SPLITMATCH_CLI");
  if (!env) {
    ADD_FAILURE() << "SPLITMATCH_CLI not set";
    return "";
  }
  return env;
}

RunResult run_cli(const std::string& args) {
  std::string cmd = cli_path() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  EXPECT_NE(pipe, nullptr);
  RunResult result;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) {
    result.stdout_text.append(buf, n);
  }
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string temp_dir() {
  static std::string dir = [] {
    char tmpl[] = "/tmp/splitmatch_cli_XXXXXX";
    char* d = mkdtemp(tmpl);
    return std::string(d ? d : "/tmp");
  }();
  return dir;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Model equality modulo fault ordering.
bool models_equivalent(const FaultModel& a, const FaultModel& b) {
  if (a.check_count() != b.check_count() ||
      a.observable_count() != b.observable_count() ||
      a.fault_count() != b.fault_count()) {
    return false;
  }
  using Key = std::tuple<std::vector<uint32_t>, std::vector<uint32_t>, double>;
  std::vector<Key> ka, kb;
  for (const Fault& f : a.faults()) {
    ka.emplace_back(f.syndrome.items(), f.observables.items(), f.probability);
  }
  for (const Fault& f : b.faults()) {
    kb.emplace_back(f.syndrome.items(), f.observables.items(), f.probability);
  }
  std::sort(ka.begin(), ka.end());
  std::sort(kb.begin(), kb.end());
  return ka == kb;
}

TEST(Cli, GenThenRecursiveSplitIsIdentityModuloOrdering) {
  std::string dir = temp_dir();
  RunResult gen = run_cli("gen repetition --n 5 --p 0.05 -o " + dir + "/rep5.fm");
  EXPECT_EQ(gen.exit_code, 0);
  RunResult split = run_cli("split -i " + dir + "/rep5.fm --method recursive -o " +
                            dir + "/rep5s.fm --report " + dir + "/rep5.json");
  EXPECT_EQ(split.exit_code, 0);
  FaultModel original = read_model(slurp(dir + "/rep5.fm"));
  FaultModel split_model = read_model(slurp(dir + "/rep5s.fm"));
  EXPECT_TRUE(models_equivalent(original, split_model));
  // The report references the split model file.
  EXPECT_NE(slurp(dir + "/rep5.json").find("rep5s.fm"), std::string::npos);
}

TEST(Cli, SurfaceEffectiveDistanceJson) {
  std::string dir = temp_dir();
  ASSERT_EQ(run_cli("gen surface_perfect --d 3 --px 0.01 --py 0.01 --pz 0.01 -o " +
                    dir + "/s3.fm")
                .exit_code,
            0);
  ASSERT_EQ(run_cli("split -i " + dir + "/s3.fm --method decoder --decoder mwpm -o " +
                    dir + "/s3s.fm --report " + dir + "/s3.json")
                .exit_code,
            0);
  RunResult eff = run_cli("effective-distance -i " + dir +
                          "/s3.fm --report " + dir +
                          "/s3.json --decoder mwpm --max-weight 3 --json");
  EXPECT_EQ(eff.exit_code, 0);
  EXPECT_NE(eff.stdout_text.find("\"effective_distance\":2"), std::string::npos);
  EXPECT_NE(eff.stdout_text.find("\"model_distance\":3"), std::string::npos);
  EXPECT_NE(eff.stdout_text.find("\"achieves_full_distance\":true"),
            std::string::npos);
}

TEST(Cli, StrictSplitOfThreeCheckModelExitsWithThree) {
  std::string dir = temp_dir();
  ASSERT_EQ(run_cli("gen three_check --m 4 -o " + dir + "/tc.fm").exit_code, 0);
  RunResult split = run_cli("split -i " + dir + "/tc.fm --method decoder -o " +
                            dir + "/tcs.fm --strict");
  EXPECT_EQ(split.exit_code, 3);
}

TEST(Cli, SampleJsonIsDeterministic) {
  std::string dir = temp_dir();
  ASSERT_EQ(run_cli("gen repetition --n 5 --p 0.05 -o " + dir + "/r.fm").exit_code,
            0);
  std::string cmd = "sample -i " + dir +
                    "/r.fm --decoder mwpm --shots 20000 --seed 9 --json";
  RunResult a = run_cli(cmd);
  RunResult b = run_cli(cmd);
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.stdout_text, b.stdout_text);
  EXPECT_NE(a.stdout_text.find("\"seed\":9"), std::string::npos);
}

TEST(Cli, DecodePrintsCorrection) {
  std::string dir = temp_dir();
  ASSERT_EQ(run_cli("gen repetition --n 5 --p 0.05 -o " + dir + "/r.fm").exit_code,
            0);
  RunResult r = run_cli("decode -i " + dir + "/r.fm --split " + dir +
                        "/r.fm --syndrome \"D1 D2\"");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.stdout_text.find("correction"), std::string::npos);
  EXPECT_NE(r.stdout_text.find("D1 D2"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  std::string dir = temp_dir();
  // Usage errors.
  EXPECT_EQ(run_cli("bogus-subcommand").exit_code, 1);
  EXPECT_EQ(run_cli("split").exit_code, 1);
  // Model/format errors.
  std::ofstream(dir + "/bad.fm") << "checks 1\nobservables 0\nerror(0.9) D0\n";
  EXPECT_EQ(run_cli("distance -i " + dir + "/bad.fm --max-weight 2").exit_code, 2);
  EXPECT_EQ(run_cli("distance -i " + dir + "/missing.fm --max-weight 2").exit_code,
            2);
  // Generator parameter errors are model errors, not usage errors.
  EXPECT_EQ(run_cli("gen repetition --n 1 -o " + dir + "/x.fm").exit_code, 2);
  // Help succeeds.
  EXPECT_EQ(run_cli("--help").exit_code, 0);
}

}  // namespace
}  // namespace splitmatch
