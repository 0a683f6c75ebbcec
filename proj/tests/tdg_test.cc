// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <string>
#include <vector>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "gtest/gtest.h"
#include "oracles.h"
#include "p4mc/tdg.h"
#include "test_util.h"

namespace p4mc {
namespace {

using ::p4mc::testing::CheckOrDie;
using ::p4mc::testing::ClassOf;
using ::p4mc::testing::OracleEdge;
using ::p4mc::testing::ParseOrDie;
using ::p4mc::testing::ProgramSource;

std::vector<OracleEdge> EdgesOf(const Tdg& tdg) {
  std::vector<OracleEdge> out;
  for (const TdgEdge& e : tdg.edges) out.push_back({e.from, e.to, DependencyKindName(e.kind)});
  return out;
}

std::vector<testing::WeightedEdge> Weighted(const Tdg& tdg) {
  std::vector<testing::WeightedEdge> out;
  for (const TdgEdge& e : tdg.edges) out.push_back({e.from, e.to, IsStrict(e.kind) ? 1 : 0});
  return out;
}

StageAssignment StagesOrDie(const Tdg& tdg) {
  absl::StatusOr<StageAssignment> s = AssignStages(tdg);
  EXPECT_TRUE(s.ok()) << s.status();
  return s.ok() ? *s : StageAssignment{};
}

bool HasEdge(const Tdg& tdg, int from, int to, DependencyKind kind) {
  return std::find(tdg.edges.begin(), tdg.edges.end(), TdgEdge{from, to, kind}) !=
         tdg.edges.end();
}

TEST(BuildTdg, MtagNodesAndEdges) {
  std::string source = ProgramSource("mtag.p4");
  Tdg tdg = BuildTdg(CheckOrDie(source));
  std::vector<std::string> names;
  for (const TdgNode& n : tdg.nodes) names.push_back(n.name);
  ASSERT_EQ(names, (std::vector<std::string>{"source_check", "local_switching",
                                             "mTag_table", "egress_check"}));
  const int sc = 0, ls = 1, mt = 2, ec = 3;
  EXPECT_TRUE(HasEdge(tdg, sc, ls, DependencyKind::kMatch));
  EXPECT_TRUE(HasEdge(tdg, sc, mt, DependencyKind::kMatch));
  EXPECT_TRUE(HasEdge(tdg, ls, mt, DependencyKind::kMatch));
  EXPECT_TRUE(HasEdge(tdg, mt, ec, DependencyKind::kMatch));
  EXPECT_TRUE(HasEdge(tdg, ls, ec, DependencyKind::kMatch));
  // source_check writes metadata.was_mtagged and metadata.ingress_error,
  // both of which egress_check consults.
  EXPECT_TRUE(HasEdge(tdg, sc, ec, DependencyKind::kMatch));
  EXPECT_EQ(tdg.edges.size(), 6u);
  EXPECT_EQ(EdgesOf(tdg), testing::OracleEdges(ParseOrDie(source)));
}

TEST(BuildTdg, MtagStagesAreMinimal) {
  Tdg tdg = BuildTdg(CheckOrDie(ProgramSource("mtag.p4")));
  StageAssignment s = StagesOrDie(tdg);
  EXPECT_EQ(s.stage, (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(s.depth, 4);
  EXPECT_EQ(s.depth, testing::ExhaustiveMinimalDepth(4, Weighted(tdg)));
}

TEST(BuildTdg, ParallelVariantSharesAStage) {
  std::string source = ProgramSource("mtag_parallel.p4");
  Tdg tdg = BuildTdg(CheckOrDie(source));
  ASSERT_EQ(tdg.nodes.size(), 4u);
  EXPECT_TRUE(HasEdge(tdg, 1, 2, DependencyKind::kPredication));
  EXPECT_EQ(EdgesOf(tdg), testing::OracleEdges(ParseOrDie(source)));
  StageAssignment s = StagesOrDie(tdg);
  EXPECT_EQ(s.stage, (std::vector<int>{0, 1, 1, 2}));
  EXPECT_EQ(s.depth, 3);
  EXPECT_EQ(s.depth, testing::ExhaustiveMinimalDepth(4, Weighted(tdg)));
}

TEST(BuildTdg, L2L3SampleAgreesWithOracle) {
  std::string source = ProgramSource("l2l3.p4");
  Tdg tdg = BuildTdg(CheckOrDie(source));
  ASSERT_EQ(tdg.nodes.size(), 7u);
  EXPECT_EQ(EdgesOf(tdg), testing::OracleEdges(ParseOrDie(source)));
  StageAssignment s = StagesOrDie(tdg);
  EXPECT_EQ(s.depth, testing::ExhaustiveMinimalDepth(7, Weighted(tdg)));
  // The ACL touches nothing the forwarding tables write.
  EXPECT_EQ(tdg.nodes[6].name, "acl");
  EXPECT_EQ(s.stage[6], 0);
}

TEST(BuildTdg, GuardsAccumulate) {
  Tdg tdg = BuildTdg(CheckOrDie(ProgramSource("mtag.p4")));
  EXPECT_EQ(tdg.nodes[0].PredicateText(), "true");
  EXPECT_EQ(tdg.nodes[2].PredicateText(),
            "!defined(metadata.ingress_error) && !defined(metadata.egress_spec)");
  EXPECT_EQ(tdg.nodes[3].guard.size(), 1u);
}

constexpr absl::string_view kTwoTables = R"(
header h { fields { a : 8; b : 8; } }
parser start { h; }
parser h { stop; }
action wa() { set_field(h.a, 1); }
action wb() { set_field(h.b, 1); }
table t { reads { h.a : exact; } actions { wa; } }
table u { reads { h.b : exact; } actions { wb; } }
)";

TEST(BuildTdg, DisjointTablesHaveNoEdges) {
  Tdg tdg = BuildTdg(CheckOrDie(absl::StrCat(kTwoTables, "control main() { table(t); table(u); }")));
  EXPECT_EQ(tdg.nodes.size(), 2u);
  EXPECT_TRUE(tdg.edges.empty());
}

TEST(BuildTdg, SingleTable) {
  Tdg tdg = BuildTdg(CheckOrDie(absl::StrCat(kTwoTables, "control main() { table(t); }")));
  EXPECT_EQ(tdg.nodes.size(), 1u);
  EXPECT_TRUE(tdg.edges.empty());
}

TEST(BuildTdg, RepeatedApplicationsAreSuffixed) {
  Tdg tdg = BuildTdg(CheckOrDie(
      absl::StrCat(kTwoTables, "control main() { table(t); table(u); table(t); }")));
  ASSERT_EQ(tdg.nodes.size(), 3u);
  EXPECT_EQ(tdg.nodes[2].name, "t#2");
  EXPECT_EQ(tdg.nodes[2].table, "t");
  EXPECT_TRUE(HasEdge(tdg, 0, 2, DependencyKind::kMatch));
}

TEST(BuildTdg, WriteAfterReadIsAnAntiDependency) {
  Tdg tdg = BuildTdg(CheckOrDie(absl::StrCat(kTwoTables, R"(
    table v { reads { h.b : exact; } actions { wa; } }
    control main() { table(v); table(t); }
  )")));
  EXPECT_TRUE(HasEdge(tdg, 0, 1, DependencyKind::kMatch));
  Tdg anti = BuildTdg(CheckOrDie(absl::StrCat(kTwoTables, "control main() { table(u); table(t); }")));
  EXPECT_TRUE(anti.edges.empty());
  Tdg war = BuildTdg(CheckOrDie(absl::StrCat(kTwoTables, R"(
    table r { reads { h.a : ternary; } actions { wb; } }
    control main() { table(r); table(t); }
  )")));
  ASSERT_EQ(war.edges.size(), 1u);
  EXPECT_EQ(war.edges[0].kind, DependencyKind::kAnti);
}

TdgNode Node(int index) {
  TdgNode n;
  n.index = index;
  n.name = n.table = absl::StrCat("n", index);
  return n;
}

TEST(ClassifyDependency, Definitions) {
  const Location egress{5, 1}, ethertype{1, 3}, dst{0, 0}, other{2, 0};
  TdgNode a = Node(0), b = Node(1);
  a.writes = {egress};
  b.match_reads = {egress};
  EXPECT_EQ(ClassifyDependency(a, b), DependencyKind::kMatch);

  a = Node(0), b = Node(1);
  a.writes = {ethertype};
  b.writes = {ethertype};
  b.match_reads = {dst};
  EXPECT_EQ(ClassifyDependency(a, b), DependencyKind::kAction);

  a = Node(0), b = Node(1);
  a.writes = {egress};
  b.writes = {other};
  b.contingent_on = {0};
  EXPECT_EQ(ClassifyDependency(a, b), DependencyKind::kPredication);

  b.predicate_reads = {egress};
  EXPECT_EQ(ClassifyDependency(a, b), DependencyKind::kMatch);

  a = Node(0), b = Node(1);
  a.match_reads = {dst};
  b.writes = {dst};
  EXPECT_EQ(ClassifyDependency(a, b), DependencyKind::kAnti);

  a = Node(0), b = Node(1);
  a.writes = {dst};
  b.writes = {other};
  EXPECT_EQ(ClassifyDependency(a, b), std::nullopt);
}

TEST(ClassifyDependency, RaisedFlagsCommute) {
  const Location flag{5, 2};
  TdgNode a = Node(0), b = Node(1);
  a.raises = {flag};
  b.raises = {flag};
  EXPECT_EQ(ClassifyDependency(a, b), std::nullopt);
  b.predicate_reads = {flag};
  EXPECT_EQ(ClassifyDependency(a, b), DependencyKind::kMatch);
  b = Node(1);
  b.writes = {flag};
  EXPECT_EQ(ClassifyDependency(a, b), DependencyKind::kAction);
  EXPECT_EQ(ClassifyDependency(b, a), DependencyKind::kAction);
}

TEST(AssignStages, EdgelessGraph) {
  Tdg tdg;
  for (int i = 0; i < 3; ++i) tdg.nodes.push_back(Node(i));
  StageAssignment s = StagesOrDie(tdg);
  EXPECT_EQ(s.stage, (std::vector<int>{0, 0, 0}));
  EXPECT_EQ(s.depth, 1);
}

TEST(AssignStages, EmptyGraph) {
  StageAssignment s = StagesOrDie(Tdg{});
  EXPECT_TRUE(s.stage.empty());
  EXPECT_EQ(s.depth, 0);
}

TEST(AssignStages, WeightsByKind) {
  Tdg tdg;
  for (int i = 0; i < 4; ++i) tdg.nodes.push_back(Node(i));
  tdg.edges = {{0, 1, DependencyKind::kPredication},
               {1, 2, DependencyKind::kAction},
               {0, 3, DependencyKind::kAnti}};
  StageAssignment s = StagesOrDie(tdg);
  EXPECT_EQ(s.stage, (std::vector<int>{0, 0, 1, 0}));
  EXPECT_EQ(s.depth, 2);
}

TEST(AssignStages, RejectsBackwardEdge) {
  Tdg tdg;
  for (int i = 0; i < 2; ++i) tdg.nodes.push_back(Node(i));
  tdg.edges = {{1, 0, DependencyKind::kMatch}};
  EXPECT_EQ(ClassOf(AssignStages(tdg)), "CycleDetected");
}

TEST(ExportDot, SingleNode) {
  Tdg tdg;
  tdg.nodes.push_back(Node(0));
  std::string dot = ExportDot(tdg, StagesOrDie(tdg));
  EXPECT_EQ(testing::DotSyntaxError(dot), "");
  EXPECT_TRUE(absl::StrContains(dot, "label=\"n0\\nstage=0\""));
  EXPECT_FALSE(absl::StrContains(dot, "->"));
}

TEST(ExportDot, Mtag) {
  Tdg tdg = BuildTdg(CheckOrDie(ProgramSource("mtag.p4")));
  std::string dot = ExportDot(tdg, StagesOrDie(tdg));
  EXPECT_EQ(testing::DotSyntaxError(dot), "");
  size_t arrows = 0, nodes = 0;
  for (size_t pos = 0; (pos = dot.find("->", pos)) != std::string::npos; pos += 2) ++arrows;
  for (size_t pos = 0; (pos = dot.find("stage=", pos)) != std::string::npos; pos += 6) ++nodes;
  EXPECT_EQ(nodes, 4u);
  EXPECT_EQ(arrows, tdg.edges.size());
  EXPECT_TRUE(absl::StrContains(dot, "label=\"egress_check\\nstage=3\""));
  EXPECT_TRUE(absl::StrContains(dot, "[label=\"MATCH\"]"));
  EXPECT_EQ(dot, ExportDot(tdg, StagesOrDie(tdg)));
}

}  // namespace
}  // namespace p4mc
