// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "gtest/gtest.h"
#include "oracles.h"
#include "p4mc/target_config.h"
#include "test_util.h"

namespace p4mc {
namespace {

using ::p4mc::testing::ProgramSource;
using ::p4mc::testing::ReadFileOrDie;
using ::p4mc::testing::SourcePath;

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           absl::StrCat("p4mc_cli_test_", ::getpid(), "_",
                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string Path(absl::string_view name) const { return (dir_ / std::string(name)).string(); }

  std::string Write(absl::string_view name, absl::string_view content) const {
    std::string path = Path(name);
    std::ofstream(path, std::ios::binary) << content;
    return path;
  }

  CliResult Run(const std::string& args) const {
    std::string out = Path("stdout"), err = Path("stderr");
    std::string command = absl::StrCat(P4MC_CLI_PATH, " ", args, " >", out, " 2>", err);
    int status = std::system(command.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = ReadFileOrDie(out);
    r.err = ReadFileOrDie(err);
    return r;
  }

  std::string CompileMtag() const {
    std::string config = Path("mtag.json");
    CliResult r = Run(absl::StrCat("compile ", SourcePath("programs/mtag.p4"), " -o ", config));
    EXPECT_EQ(r.exit_code, 0) << r.err;
    return config;
  }

  std::filesystem::path dir_;
};

TEST_F(CliTest, CompileWritesLoadableConfig) {
  std::string config = CompileMtag();
  absl::StatusOr<TargetConfig> loaded = Load(ReadFileOrDie(config));
  ASSERT_TRUE(loaded.ok()) << loaded.status();
  absl::StatusOr<TargetConfig> direct = CompileSource(ProgramSource("mtag.p4"));
  ASSERT_TRUE(direct.ok());
  EXPECT_EQ(*loaded, *direct);
  EXPECT_EQ(ReadFileOrDie(config), Serialize(*direct));
}

TEST_F(CliTest, CompileReportsSemanticErrorsWithLocation) {
  std::string source = Write("bad.p4", "header h { fields { a : 8; } }\n"
                                       "table t {\n  actions { missing; }\n}\n");
  CliResult r = Run(absl::StrCat("compile ", source, " -o ", Path("out.json")));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_TRUE(absl::StrContains(r.err, absl::StrCat(source, ":3:13: error:"))) << r.err;
  EXPECT_FALSE(std::filesystem::exists(Path("out.json")));
}

TEST_F(CliTest, CompileIoErrors) {
  CliResult unwritable = Run(absl::StrCat("compile ", SourcePath("programs/mtag.p4"),
                                          " -o ", Path("no/such/dir/out.json")));
  EXPECT_EQ(unwritable.exit_code, 2) << unwritable.err;
  CliResult missing = Run(absl::StrCat("compile ", Path("absent.p4"), " -o ", Path("x.json")));
  EXPECT_EQ(missing.exit_code, 2) << missing.err;
}

TEST_F(CliTest, CheckAgreesWithCompile) {
  std::string good = SourcePath("programs/mtag.p4");
  std::string bad = Write("bad.p4", "header h { fields { a : 8; } }\nheader h { fields { b : 8; } }\n");
  std::string lex = Write("lex.p4", "header h { @ }\n");
  for (const std::string& source : {good, bad, lex}) {
    CliResult check = Run(absl::StrCat("check ", source));
    CliResult compile = Run(absl::StrCat("compile ", source, " -o ", Path("c.json")));
    EXPECT_EQ(check.exit_code, compile.exit_code) << source;
    EXPECT_EQ(check.err, compile.err) << source;
  }
  EXPECT_EQ(Run(absl::StrCat("check ", good)).exit_code, 0);
  EXPECT_EQ(Run(absl::StrCat("check ", bad)).exit_code, 1);
  EXPECT_EQ(Run(absl::StrCat("check ", Path("absent.p4"))).exit_code, 2);
}

TEST_F(CliTest, TdgPrintsStageTable) {
  CliResult r = Run(absl::StrCat("tdg ", SourcePath("programs/mtag.p4")));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  std::vector<std::string> lines = absl::StrSplit(r.out, '\n', absl::SkipEmpty());
  ASSERT_EQ(lines.size(), 6u) << r.out;
  EXPECT_TRUE(absl::StartsWith(lines[0], "node"));
  EXPECT_TRUE(absl::StartsWith(lines[1], "source_check     0"));
  EXPECT_TRUE(absl::StartsWith(lines[4], "egress_check     3"));
  EXPECT_EQ(lines[5], "depth 4");
}

TEST_F(CliTest, TdgShowsParallelTables) {
  std::string dot = Path("g.dot");
  CliResult r = Run(absl::StrCat("tdg ", SourcePath("programs/mtag_parallel.p4"), " --dot ", dot));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(absl::StrContains(r.out, "local_switching  1")) << r.out;
  EXPECT_TRUE(absl::StrContains(r.out, "mTag_table       1")) << r.out;
  EXPECT_TRUE(absl::StrContains(r.out, "PREDICATION(local_switching)")) << r.out;
  EXPECT_TRUE(absl::StrContains(r.out, "depth 3")) << r.out;
  EXPECT_EQ(testing::DotSyntaxError(ReadFileOrDie(dot)), "");
}

TEST_F(CliTest, RunMatchesGolden) {
  std::string config = CompileMtag();
  std::string args = absl::StrCat("run ", config, " --rules ",
                                  SourcePath("tests/testdata/mtag_edge_rules.json"), " --packets ",
                                  SourcePath("tests/testdata/mtag_packets.txt"));
  std::string golden = ReadFileOrDie(SourcePath("tests/testdata/mtag_edge_verdicts.golden"));
  CliResult seq = Run(args);
  ASSERT_EQ(seq.exit_code, 0) << seq.err;
  EXPECT_EQ(seq.out, golden);
  CliResult staged = Run(absl::StrCat(args, " --staged"));
  ASSERT_EQ(staged.exit_code, 0) << staged.err;
  EXPECT_EQ(staged.out, seq.out);
  EXPECT_EQ(Run(args).out, seq.out);
}

TEST_F(CliTest, RunWritesTrace) {
  std::string config = CompileMtag();
  std::string trace = Path("trace.jsonl");
  CliResult r = Run(absl::StrCat("run ", config, " --rules ",
                                 SourcePath("tests/testdata/mtag_edge_rules.json"), " --packets ",
                                 SourcePath("tests/testdata/mtag_packets.txt"), " --trace ", trace));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  std::string text = ReadFileOrDie(trace);
  std::vector<std::string> lines = absl::StrSplit(text, '\n', absl::SkipEmpty());
  ASSERT_FALSE(lines.empty());
  for (const std::string& line : lines) {
    EXPECT_TRUE(absl::StartsWith(line, "{\"packet\":")) << line;
  }
  EXPECT_TRUE(absl::StrContains(
      text, "{\"packet\":1,\"event\":\"TABLE\",\"table\":\"mTag_table\",\"hit\":true,"));
  EXPECT_TRUE(absl::StrContains(text, "{\"packet\":8,\"event\":\"ERROR\""));
}

TEST_F(CliTest, RunRejectsBadRulesBeforeAnyPacket) {
  std::string config = CompileMtag();
  std::string rules = Write("rules.json", R"([
    {"table": "source_check", "key": [false], "action": "pass"},
    {"table": "mTag_table", "key": ["0x1", "0x2"], "action": "add_mTag", "params": [1, 2, 3, 4]}
  ])");
  CliResult r = Run(absl::StrCat("run ", config, " --rules ", rules, " --packets ",
                                 SourcePath("tests/testdata/mtag_packets.txt")));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(r.out, "");
  EXPECT_TRUE(absl::StrContains(r.err, "rule 0: TypeMismatch")) << r.err;
  EXPECT_TRUE(absl::StrContains(r.err, "rule 1: TypeMismatch")) << r.err;

  std::string garbage = Write("garbage.json", "[{");
  CliResult g = Run(absl::StrCat("run ", config, " --rules ", garbage, " --packets ",
                                 SourcePath("tests/testdata/mtag_packets.txt")));
  EXPECT_EQ(g.exit_code, 1);
  EXPECT_EQ(g.out, "");
}

TEST_F(CliTest, RunIoErrors) {
  std::string config = CompileMtag();
  EXPECT_EQ(Run(absl::StrCat("run ", config, " --packets ", Path("absent.txt"))).exit_code, 2);
  EXPECT_EQ(Run(absl::StrCat("run ", Path("absent.json"), " --packets ",
                             SourcePath("tests/testdata/mtag_packets.txt")))
                .exit_code,
            2);
  std::string broken = Write("broken.json", "{\"version\": \"p4mc-1\"}");
  CliResult r = Run(absl::StrCat("run ", broken, " --packets ",
                                 SourcePath("tests/testdata/mtag_packets.txt")));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_TRUE(absl::StrContains(r.err, "MalformedConfig")) << r.err;
}

TEST_F(CliTest, RunDefaultPort) {
  std::string config = CompileMtag();
  std::string rules = Write("rules.json", R"([
    {"table": "source_check", "key": [false, 9], "action": "pass"},
    {"table": "local_switching", "default": true, "action": "set_egress", "params": [4]}
  ])");
  std::string packets =
      Write("p.txt", "00aabbccddee0000000000018100000a08004500001400010000401100000a0000010a000002\n");
  CliResult r = Run(absl::StrCat("run ", config, " --rules ", rules, " --packets ", packets,
                                 " --port 9"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(absl::StartsWith(r.out, "verdict egress=4 ")) << r.out;
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_NE(Run("").exit_code, 0);
  EXPECT_EQ(Run("frobnicate").exit_code, 2);
  EXPECT_EQ(Run("compile").exit_code, 2);
}

}  // namespace
}  // namespace p4mc
