// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference computations used to check the library.  None of
// these call into the code they check; they work from the AST or raw bytes.

#ifndef P4MC_TESTS_TESTING_ORACLES_H_
#define P4MC_TESTS_TESTING_ORACLES_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "absl/strings/string_view.h"
#include "p4mc/ast.h"

namespace p4mc::testing {

// "header.field" -> (offset, width), by summing declared widths.
std::map<std::string, std::pair<uint64_t, uint64_t>> WidthSums(const ast::Ast& ast);
uint64_t HeaderWidth(const ast::Ast& ast, absl::string_view header);

struct OracleHeader {
  std::string name;
  size_t offset = 0;
  uint64_t width = 0;
};

struct OracleParse {
  std::vector<OracleHeader> headers;
  bool error = false;
  std::string error_state;
  size_t consumed = 0;
};

// Walks the parser declarations directly, recursively.
OracleParse RecursiveParse(const ast::Ast& ast, const std::vector<uint8_t>& bytes);

// RFC 1071 checksum over a byte string (odd length padded with zero).
uint16_t InternetChecksum(const std::vector<uint8_t>& bytes);

struct WeightedEdge {
  int from = 0;
  int to = 0;
  int weight = 0;
};

// Smallest depth d such that some assignment of nodes to [0, d) satisfies
// stage(to) >= stage(from) + weight for every edge.  Exhaustive; small n only.
int ExhaustiveMinimalDepth(int nodes, const std::vector<WeightedEdge>& edges);

// Accepts the DOT subset emitted by the library: a digraph of node and edge
// statements with attribute lists.  Returns an empty string when valid.
std::string DotSyntaxError(absl::string_view text);

// Pairwise read/write overlap over the AST.  Kinds are the strings MATCH,
// ACTION, PREDICATION, ANTI.
struct OracleEdge {
  int from = 0;
  int to = 0;
  std::string kind;
  bool operator==(const OracleEdge&) const = default;
};
struct OracleNode {
  std::string table;
  std::set<std::string> reads;  // match and action reads
  std::set<std::string> predicate_reads;
  std::set<std::string> writes;
  std::set<std::string> raises;  // set to 1 only
  std::set<int> contingent_on;
};
std::vector<OracleNode> OracleNodes(const ast::Ast& ast);
std::vector<OracleEdge> OracleEdges(const ast::Ast& ast);

}  // namespace p4mc::testing

#endif  // P4MC_TESTS_TESTING_ORACLES_H_
