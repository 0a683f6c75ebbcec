// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

#include <map>
#include <set>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "gtest/gtest.h"
#include "oracles.h"
#include "p4mc/parser_compiler.h"
#include "test_util.h"

namespace p4mc {
namespace {

using ::p4mc::testing::CheckOrDie;
using ::p4mc::testing::ClassOf;
using ::p4mc::testing::Concat;
using ::p4mc::testing::EthernetFrame;
using ::p4mc::testing::Ipv4Stub;
using ::p4mc::testing::MtagBytes;
using ::p4mc::testing::ParseOrDie;
using ::p4mc::testing::ProgramSource;
using ::p4mc::testing::ReadFileOrDie;
using ::p4mc::testing::SourcePath;
using ::p4mc::testing::VlanTag;

std::string RowText(const StateTableEntry& e) {
  std::string value = e.is_wildcard() ? "*" : absl::StrFormat("0x%x", e.value);
  return absl::StrCat(e.state, " ", value, " ", e.next.stop ? "stop" : e.next.state);
}

std::vector<std::string> GoldenLines(const std::string& relative) {
  std::vector<std::string> out;
  for (absl::string_view line : absl::StrSplit(ReadFileOrDie(SourcePath(relative)), '\n')) {
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line[0] == '#') continue;
    out.emplace_back(line);
  }
  return out;
}

ParserProgram CompileOrDie(absl::string_view source) {
  absl::StatusOr<ParserProgram> pp = CompileParser(CheckOrDie(source));
  EXPECT_TRUE(pp.ok()) << pp.status();
  return pp.ok() ? *pp : ParserProgram{};
}

TEST(CompileParser, MtagVlanAndMtagRowsMatchGolden) {
  ParserProgram pp = CompileOrDie(ProgramSource("mtag.p4"));
  std::vector<std::string> rows;
  for (const StateTableEntry& e : pp.entries) {
    if (e.state == "vlan" || e.state == "mTag") rows.push_back(RowText(e));
  }
  EXPECT_EQ(rows, GoldenLines("tests/testdata/mtag_vlan_mtag_rows.golden"));
}

TEST(CompileParser, ExactRowsUseFullMaskAndWildcardComesLast) {
  ParserProgram pp = CompileOrDie(ProgramSource("mtag.p4"));
  std::map<std::string, std::vector<const StateTableEntry*>> by_state;
  for (const StateTableEntry& e : pp.entries) by_state[e.state].push_back(&e);
  for (const auto& [state, rows] : by_state) {
    const StatePlan* plan = pp.FindPlan(state);
    ASSERT_NE(plan, nullptr) << state;
    std::set<uint64_t> seen;
    int wildcards = 0;
    for (size_t i = 0; i < rows.size(); ++i) {
      EXPECT_EQ(rows[i]->priority, static_cast<int>(i)) << state;
      if (rows[i]->is_wildcard()) {
        ++wildcards;
        EXPECT_EQ(i, rows.size() - 1) << state;
        continue;
      }
      ASSERT_TRUE(plan->select.has_value()) << state;
      EXPECT_EQ(rows[i]->mask, WidthMask(plan->select->width)) << state;
      EXPECT_TRUE(seen.insert(rows[i]->value & rows[i]->mask).second) << state;
    }
    EXPECT_LE(wildcards, 1) << state;
  }
}

TEST(CompileParser, StartExtractsNothing) {
  ParserProgram pp = CompileOrDie(ProgramSource("mtag.p4"));
  const StatePlan* start = pp.FindPlan("start");
  ASSERT_NE(start, nullptr);
  EXPECT_EQ(start->header_index, -1);
  EXPECT_EQ(start->width, 0u);
  EXPECT_FALSE(start->select.has_value());
  ASSERT_EQ(start->row_count, 1);
  const StateTableEntry& row = pp.entries[start->first_row];
  EXPECT_TRUE(row.is_wildcard());
  EXPECT_EQ(row.next.state, "ethernet");
}

TEST(CompileParser, SelectSliceLiesInHeader) {
  ParserProgram pp = CompileOrDie(ProgramSource("mtag.p4"));
  const StatePlan* vlan = pp.FindPlan("vlan");
  ASSERT_NE(vlan, nullptr);
  EXPECT_EQ(vlan->width, 32u);
  ASSERT_TRUE(vlan->select.has_value());
  EXPECT_EQ(vlan->select->offset, 16u);
  EXPECT_EQ(vlan->select->width, 16u);
}

TEST(CompileParser, Errors) {
  CheckedProgram p = CheckOrDie("header h { fields { a : 8; } } parser h { stop; }");
  EXPECT_EQ(ClassOf(CompileParser(p)), "MissingStartState");

  CheckedProgram q = CheckOrDie(R"(
    header a { fields { x : 8; } }
    header b { fields { y : 8; } }
    parser start { a; }
    parser a { b; }
    parser b { switch(y) { case 1: a; } }
  )");
  EXPECT_EQ(ClassOf(CompileParser(q)), "CyclicParserGraph");

  CheckedProgram r = CheckOrDie("header a { fields { x : 8; } } parser start { a; } parser a { stop; }");
  r.parser_states[0].next.state = "nowhere";
  EXPECT_EQ(ClassOf(CompileParser(r)), "UndeclaredNextState");
}

std::vector<uint8_t> TaggedPacket() {
  return Concat({EthernetFrame(0x00aabbccddee, 0x000000000001, 0x8100),
                 VlanTag(0x00a, 0xaaaa), MtagBytes(1, 2, 3, 4, 0x800), Ipv4Stub()});
}

TEST(SimulateParse, MtagStack) {
  ParserProgram pp = CompileOrDie(ProgramSource("mtag.p4"));
  ParseResult r = SimulateParse(pp, TaggedPacket());
  EXPECT_EQ(r.outcome, ParseOutcome::kStop);
  std::vector<std::pair<std::string, size_t>> got;
  for (const ExtractedHeader& h : r.headers) got.emplace_back(h.name, h.offset);
  // Offsets come from the independent width sums.
  ast::Ast ast = ParseOrDie(ProgramSource("mtag.p4"));
  uint64_t eth = testing::HeaderWidth(ast, "ethernet");
  uint64_t vlan = testing::HeaderWidth(ast, "vlan");
  uint64_t mtag = testing::HeaderWidth(ast, "mTag");
  EXPECT_EQ(got, (std::vector<std::pair<std::string, size_t>>{
                     {"ethernet", 0}, {"vlan", eth}, {"mTag", eth + vlan},
                     {"ipv4", eth + vlan + mtag}}));
  EXPECT_EQ(eth + vlan, 144u);
  EXPECT_EQ(r.consumed_bits, 192u + 160u);
}

TEST(SimulateParse, EmptyInputIsTruncated) {
  ParserProgram pp = CompileOrDie(ProgramSource("mtag.p4"));
  ParseResult r = SimulateParse(pp, {});
  EXPECT_EQ(r.outcome, ParseOutcome::kError);
  EXPECT_EQ(r.error_state, "ethernet");
  EXPECT_TRUE(r.headers.empty());
  EXPECT_EQ(r.consumed_bits, 0u);
}

TEST(SimulateParse, UnknownEthertypeStopsViaImplicitWildcard) {
  ParserProgram pp = CompileOrDie(ProgramSource("mtag.p4"));
  ParseResult r = SimulateParse(pp, EthernetFrame(1, 2, 0x1234));
  EXPECT_EQ(r.outcome, ParseOutcome::kStop);
  ASSERT_EQ(r.headers.size(), 1u);
  EXPECT_EQ(r.headers[0].name, "ethernet");
  EXPECT_EQ(r.headers[0].offset, 0u);
  EXPECT_EQ(r.consumed_bits, 112u);
}

TEST(SimulateParse, TruncatedMidStack) {
  ParserProgram pp = CompileOrDie(ProgramSource("mtag.p4"));
  std::vector<uint8_t> bytes = TaggedPacket();
  bytes.resize(20);
  ParseResult r = SimulateParse(pp, bytes);
  EXPECT_EQ(r.outcome, ParseOutcome::kError);
  EXPECT_EQ(r.error_state, "mTag");
  EXPECT_EQ(r.headers.size(), 2u);
  EXPECT_EQ(r.consumed_bits, 144u);
}

TEST(SimulateParse, OracleAgreesOnHandPickedPackets) {
  std::string source = ProgramSource("mtag.p4");
  ast::Ast ast = ParseOrDie(source);
  ParserProgram pp = CompileOrDie(source);
  std::vector<std::vector<uint8_t>> packets = {
      {}, TaggedPacket(), EthernetFrame(1, 2, 0x800),
      Concat({EthernetFrame(1, 2, 0x9100), VlanTag(7, 0x800), Ipv4Stub()}),
      Concat({EthernetFrame(1, 2, 0x8100), VlanTag(7, 0x1234)}),
      Concat({EthernetFrame(1, 2, 0x8100), VlanTag(7, 0xaaaa), MtagBytes(0, 0, 0, 0, 0x86dd)})};
  for (const auto& bytes : packets) {
    ParseResult r = SimulateParse(pp, bytes);
    testing::OracleParse o = testing::RecursiveParse(ast, bytes);
    ASSERT_EQ(r.headers.size(), o.headers.size());
    for (size_t i = 0; i < o.headers.size(); ++i) {
      EXPECT_EQ(r.headers[i].name, o.headers[i].name);
      EXPECT_EQ(r.headers[i].offset, o.headers[i].offset);
      EXPECT_EQ(r.headers[i].width, o.headers[i].width);
    }
    EXPECT_EQ(r.outcome == ParseOutcome::kError, o.error);
    EXPECT_EQ(r.error_state, o.error_state);
    EXPECT_EQ(r.consumed_bits, o.consumed);
  }
}

TEST(DeparseOrder, MtagFollowsParseGraph) {
  std::string source = ProgramSource("mtag.p4");
  CheckedProgram p = CheckOrDie(source);
  ParserProgram pp = CompileOrDie(source);
  std::vector<std::string> names;
  for (int h : DeparseOrder(p, pp)) names.push_back(p.headers[h].name);
  EXPECT_EQ(names, (std::vector<std::string>{"ethernet", "vlan", "mTag", "ipv4"}));
}

TEST(DeparseOrder, UnreachedHeadersComeLast) {
  std::string source = R"(
    header z { fields { a : 8; } }
    header a { fields { b : 8; } }
    header b { fields { c : 8; } }
    parser start { b; }
    parser b { a; }
    parser a { stop; }
  )";
  CheckedProgram p = CheckOrDie(source);
  ParserProgram pp = CompileOrDie(source);
  std::vector<std::string> names;
  for (int h : DeparseOrder(p, pp)) names.push_back(p.headers[h].name);
  EXPECT_EQ(names, (std::vector<std::string>{"b", "a", "z"}));
}

}  // namespace
}  // namespace p4mc
