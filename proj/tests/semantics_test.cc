// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

#include <set>
#include <string>
#include <vector>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "gtest/gtest.h"
#include "oracles.h"
#include "p4mc/frontend.h"
#include "p4mc/semantics.h"
#include "test_util.h"

namespace p4mc {
namespace {

using ::p4mc::testing::CheckOrDie;
using ::p4mc::testing::ClassOf;
using ::p4mc::testing::ParseOrDie;
using ::p4mc::testing::ProgramSource;

constexpr absl::string_view kPrelude = R"(
header h { fields { a : 8; b : 16; c : 4; } }
header g { fields { x : 32; } }
parser start { h; }
parser h { stop; }
)";

absl::StatusOr<CheckedProgram> CheckText(absl::string_view body) {
  return Check(ParseOrDie(absl::StrCat(kPrelude, body)));
}

TEST(Check, MtagFieldOffsetsMatchWidthSums) {
  std::string source = ProgramSource("mtag.p4");
  CheckedProgram p = CheckOrDie(source);
  std::optional<FieldRef> down1 = p.ResolveField("mTag", "down1");
  ASSERT_TRUE(down1.has_value());
  EXPECT_EQ(down1->offset, 16u);
  EXPECT_EQ(down1->width, 8u);
  auto sums = testing::WidthSums(ParseOrDie(source));
  for (const HeaderLayout& h : p.headers) {
    for (const FieldLayout& f : h.fields) {
      auto it = sums.find(absl::StrCat(h.name, ".", f.name));
      ASSERT_NE(it, sums.end()) << h.name << "." << f.name;
      EXPECT_EQ(f.offset, it->second.first) << h.name << "." << f.name;
      EXPECT_EQ(f.width, it->second.second) << h.name << "." << f.name;
    }
  }
}

TEST(Check, StandardMetadataIsAlwaysPresent) {
  CheckedProgram p = CheckOrDie(ProgramSource("mtag.p4"));
  std::vector<std::pair<std::string, uint32_t>> fields;
  for (const FieldLayout& f : p.metadata.fields) fields.emplace_back(f.name, f.width);
  EXPECT_EQ(fields, (std::vector<std::pair<std::string, uint32_t>>{
                        {"ingress_port", 16},
                        {"egress_spec", 16},
                        {"ingress_error", 1},
                        {"was_mtagged", 1}}));
}

TEST(Check, EntryControl) {
  EXPECT_EQ(CheckOrDie(ProgramSource("mtag.p4")).entry_control, "main");
  ASSERT_OK_AND_ASSIGN(CheckedProgram solo,
                       CheckText("table t { actions { fault_to_cpu; } } "
                                 "control ingress() { table(t); }"));
  EXPECT_EQ(solo.entry_control, "ingress");
  absl::StatusOr<CheckedProgram> two = CheckText(
      "table t { actions { fault_to_cpu; } } control a() { table(t); } "
      "control b() { table(t); }");
  EXPECT_EQ(ClassOf(two), "SemanticError");
}

TEST(Check, LpmMatchKind) {
  ASSERT_OK_AND_ASSIGN(CheckedProgram p,
                       CheckText("table t { reads { h.b : lpm; } actions { fault_to_cpu; } }"));
  ASSERT_EQ(p.tables[0].reads.size(), 1u);
  EXPECT_EQ(p.tables[0].reads[0].kind, MatchKind::kLpm);
  EXPECT_EQ(p.tables[0].reads[0].width(), 16u);
}

TEST(Check, HeaderWhereFieldRequired) {
  absl::StatusOr<CheckedProgram> p = CheckText("action a() { set_field(h, 1); }");
  EXPECT_EQ(ClassOf(p), "SemanticError");
}

TEST(Check, ValidOnFieldRejected) {
  absl::StatusOr<CheckedProgram> p =
      CheckText("table t { reads { h.a : valid; } actions { fault_to_cpu; } }");
  EXPECT_EQ(ClassOf(p), "SemanticError");
}

TEST(Check, CopyFieldNeedsTwoFields) {
  EXPECT_EQ(ClassOf(CheckText("action a() { copy_field(h.a, g); }")), "SemanticError");
  EXPECT_EQ(ClassOf(CheckText("action a() { copy_field(h.a); }")), "SemanticError");
  EXPECT_EQ(ClassOf(CheckText("action a() { add_header(h.a); }")), "SemanticError");
  EXPECT_EQ(ClassOf(CheckText("action a() { frobnicate(h.a); }")), "SemanticError");
}

TEST(Check, ReportsEveryError) {
  absl::StatusOr<CheckedProgram> p = CheckText(R"(
    header h { fields { z : 1; } }
    table t { reads { h.nope : exact; } actions { missing; } }
    control main() { table(unknown); }
  )");
  ASSERT_FALSE(p.ok());
  std::vector<Diagnostic> diags = GetDiagnostics(p.status());
  EXPECT_EQ(diags.size(), 4u) << p.status();
  for (const Diagnostic& d : diags) EXPECT_GT(d.span.line, 0) << d.message;
}

TEST(Check, DuplicateNames) {
  EXPECT_EQ(ClassOf(CheckText("header h { fields { q : 1; } }")), "SemanticError");
  EXPECT_EQ(ClassOf(CheckText("action a(p, p) { }")), "SemanticError");
  EXPECT_EQ(ClassOf(CheckText("header k { fields { q : 1; q : 2; } }")), "SemanticError");
}

TEST(Check, StandardMetadataWidthIsFixed) {
  EXPECT_EQ(ClassOf(CheckText("metadata { egress_spec : 9; }")), "SemanticError");
  EXPECT_TRUE(CheckText("metadata { egress_spec : 16; }").ok());
}

TEST(Check, ConstantMustFitField) {
  absl::StatusOr<CheckedProgram> p = CheckText("action a() { set_field(h.c, 0x10); }");
  ASSERT_EQ(ClassOf(p), "SemanticError");
  EXPECT_TRUE(absl::StrContains(p.status().message(), "does not fit")) << p.status();
  EXPECT_TRUE(CheckText("action a() { set_field(h.c, 0xf); }").ok());
}

TEST(Check, MissRequiresAppliedTable) {
  EXPECT_EQ(ClassOf(CheckText(R"(
    table t { actions { fault_to_cpu; } }
    table u { actions { fault_to_cpu; } }
    control main() { if (miss(t)) { table(u); } }
  )")),
            "SemanticError");
}

TEST(Check, SymbolsAreDeclaredNamesPlusStandardMetadata) {
  std::string source = ProgramSource("mtag.p4");
  ast::Ast ast = ParseOrDie(source);
  CheckedProgram p = CheckOrDie(source);
  std::set<std::string> declared, checked;
  for (const auto& h : ast.headers) {
    declared.insert(h.name);
    for (const auto& f : h.fields) declared.insert(h.name + "." + f.name);
  }
  for (const auto& m : ast.metadata) {
    for (const auto& f : m.fields) declared.insert("metadata." + f.name);
  }
  for (absl::string_view s : {kIngressPort, kEgressSpec, kIngressError}) {
    declared.insert(absl::StrCat("metadata.", s));
  }
  for (const auto& t : ast.tables) declared.insert("table " + t.name);
  for (const auto& a : ast.actions) declared.insert("action " + a.name);
  for (const auto& s : ast.parsers) declared.insert("state " + s.name);

  for (const HeaderLayout& h : p.headers) {
    checked.insert(h.name);
    for (const auto& f : h.fields) checked.insert(h.name + "." + f.name);
  }
  for (const auto& f : p.metadata.fields) checked.insert("metadata." + f.name);
  for (const auto& t : p.tables) checked.insert("table " + t.name);
  for (const auto& a : p.actions) {
    if (!a.builtin) checked.insert("action " + a.name);
  }
  for (const auto& s : p.parser_states) checked.insert("state " + s.name);
  EXPECT_EQ(checked, declared);
}

TEST(ActionParamSignature, AddMtag) {
  CheckedProgram p = CheckOrDie(ProgramSource("mtag.p4"));
  ASSERT_OK_AND_ASSIGN(std::vector<ParamSignature> sig,
                       ActionParamSignature(p, "add_mTag"));
  // Widths of mTag.up1..down2 and metadata.egress_spec, by hand.
  EXPECT_EQ(sig, (std::vector<ParamSignature>{{"up1", 8},
                                              {"up2", 8},
                                              {"down1", 8},
                                              {"down2", 8},
                                              {"egr_spec", 16}}));
}

TEST(ActionParamSignature, NoParams) {
  CheckedProgram p = CheckOrDie(ProgramSource("mtag.p4"));
  ASSERT_OK_AND_ASSIGN(std::vector<ParamSignature> sig, ActionParamSignature(p, "pass"));
  EXPECT_TRUE(sig.empty());
}

TEST(ActionParamSignature, WidestUseWinsAndUnusedIs64) {
  ASSERT_OK_AND_ASSIGN(CheckedProgram p,
                       CheckText("action a(v, unused) { set_field(h.a, v); set_field(h.b, v); }"));
  ASSERT_OK_AND_ASSIGN(std::vector<ParamSignature> sig, ActionParamSignature(p, "a"));
  EXPECT_EQ(sig, (std::vector<ParamSignature>{{"v", 16}, {"unused", 64}}));
}

TEST(ActionParamSignature, UnknownAction) {
  CheckedProgram p = CheckOrDie(ProgramSource("mtag.p4"));
  EXPECT_EQ(ClassOf(ActionParamSignature(p, "nope")), "UnknownAction");
}

TEST(ValidateActionParallelism, AddMtagHasOneReadThenWrite) {
  CheckedProgram p = CheckOrDie(ProgramSource("mtag.p4"));
  std::vector<ActionHazard> hazards = ValidateActionParallelism(p);
  ASSERT_EQ(hazards.size(), 1u);
  EXPECT_EQ(hazards[0].action, "add_mTag");
  EXPECT_EQ(hazards[0].kind, ActionHazard::Kind::kReadThenWrite);
  EXPECT_EQ(hazards[0].first, 1);   // copy_field(mTag.ethertype, vlan.ethertype)
  EXPECT_EQ(hazards[0].second, 2);  // set_field(vlan.ethertype, 0xaaaa)
  EXPECT_EQ(hazards[0].location, "vlan.ethertype");
}

TEST(ValidateActionParallelism, DisjointWritesAreQuiet) {
  ASSERT_OK_AND_ASSIGN(CheckedProgram p,
                       CheckText("action a() { set_field(h.a, 1); set_field(h.b, 2); }"));
  EXPECT_TRUE(ValidateActionParallelism(p).empty());
}

TEST(ValidateActionParallelism, WriteTwice) {
  ASSERT_OK_AND_ASSIGN(CheckedProgram p,
                       CheckText("action a() { set_field(h.a, 1); set_field(h.a, 2); }"));
  std::vector<ActionHazard> hazards = ValidateActionParallelism(p);
  ASSERT_EQ(hazards.size(), 1u);
  EXPECT_EQ(hazards[0].kind, ActionHazard::Kind::kWriteThenWrite);
  EXPECT_EQ(hazards[0].location, "h.a");
}

TEST(PrintProgram, CheckIsIdempotentOnMtag) {
  CheckedProgram p = CheckOrDie(ProgramSource("mtag.p4"));
  EXPECT_EQ(CheckOrDie(PrintProgram(p)), p);
}

}  // namespace
}  // namespace p4mc
