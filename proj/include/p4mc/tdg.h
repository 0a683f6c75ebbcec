// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

// Table dependency graph: one node per table application in the entry control,
// edges recording why a later application must wait for an earlier one, and a
// minimal-depth assignment of nodes to pipeline stages.

#ifndef P4MC_TDG_H_
#define P4MC_TDG_H_

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "p4mc/program.h"

namespace p4mc {

enum class DependencyKind {
  kMatch,        // b matches on, acts on, or branches on a field a writes
  kAction,       // a and b write a common field
  kPredication,  // b's guard consults a's hit/miss outcome; no shared data
  kAnti,         // b writes a field a matched on or read in its action
};

const char* DependencyKindName(DependencyKind kind);

// Edges of these kinds force the later node into a strictly later stage.
inline bool IsStrict(DependencyKind kind) {
  return kind == DependencyKind::kMatch || kind == DependencyKind::kAction;
}

// One `if` condition enclosing a node, taken positively (then-branch) or
// negatively (else-branch). `position` is the number of table applications
// that precede the condition in control order.
struct GuardTerm {
  Condition condition;
  bool polarity = true;
  int position = 0;
  bool operator==(const GuardTerm&) const = default;
};

struct TdgNode {
  std::string name;  // table name; repeated applications get "#2", "#3", ...
  std::string table;
  int index = 0;     // position in control order
  std::set<Location> match_reads;
  std::set<Location> action_reads;
  std::set<Location> writes;
  // Flags the node can only set to 1, such as metadata.ingress_error on a
  // fault. Two nodes raising the same flag commute.
  std::set<Location> raises;
  std::set<Location> predicate_reads;
  std::vector<GuardTerm> guard;    // conjunction; empty = unconditional
  std::vector<int> contingent_on;  // earlier nodes whose outcome the guard uses

  std::set<Location> read_set() const;
  std::string PredicateText() const;
  bool operator==(const TdgNode&) const = default;
};

struct TdgEdge {
  int from = 0;
  int to = 0;
  DependencyKind kind = DependencyKind::kMatch;
  bool operator==(const TdgEdge&) const = default;
};

struct Tdg {
  std::vector<TdgNode> nodes;
  std::vector<TdgEdge> edges;  // sorted by (to, from)
  bool operator==(const Tdg&) const = default;
};

Tdg BuildTdg(const CheckedProgram& program);

// `a` precedes `b` in control order. Precedence: match, action, predication,
// anti.
std::optional<DependencyKind> ClassifyDependency(const TdgNode& a,
                                                 const TdgNode& b);

struct StageAssignment {
  std::vector<int> stage;  // indexed like Tdg::nodes
  int depth = 0;
  bool operator==(const StageAssignment&) const = default;
};

// Longest-path layering. Errors: CycleDetected when an edge points backwards.
absl::StatusOr<StageAssignment> AssignStages(const Tdg& tdg);

std::string ExportDot(const Tdg& tdg, const StageAssignment& stages);

}  // namespace p4mc

#endif  // P4MC_TDG_H_
