// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

// Lowers parser state declarations into a flat state table: rows of
// (state, lookup value, lookup mask, next state), consulted in priority order.

#ifndef P4MC_PARSER_COMPILER_H_
#define P4MC_PARSER_COMPILER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "p4mc/program.h"

namespace p4mc {

struct StateTableEntry {
  std::string state;
  uint64_t value = 0;
  uint64_t mask = 0;  // 0 marks the wildcard row
  StateRef next;
  int priority = 0;   // consultation order within the state, 0 first

  bool is_wildcard() const { return mask == 0; }
  bool operator==(const StateTableEntry&) const = default;
};

struct SelectSlice {
  uint32_t offset = 0;  // bit offset within the extracted header
  uint32_t width = 0;
  bool operator==(const SelectSlice&) const = default;
};

struct StatePlan {
  std::string state;
  std::string header;  // empty for the start state
  int header_index = -1;
  uint32_t width = 0;
  std::optional<SelectSlice> select;
  // Rows of this state occupy entries[first_row, first_row + row_count).
  int first_row = 0;
  int row_count = 0;
  bool operator==(const StatePlan&) const = default;
};

struct ParserProgram {
  std::string start = std::string(kStartState);
  std::vector<StateTableEntry> entries;
  std::vector<StatePlan> plan;

  const StatePlan* FindPlan(absl::string_view state) const;
  bool operator==(const ParserProgram&) const = default;
};

// Errors: MissingStartState, UndeclaredNextState, CyclicParserGraph.
absl::StatusOr<ParserProgram> CompileParser(const CheckedProgram& program);

struct ExtractedHeader {
  std::string name;
  int header_index = -1;
  size_t offset = 0;  // bits from the start of the packet
  uint32_t width = 0;
  bool operator==(const ExtractedHeader&) const = default;
};

enum class ParseOutcome { kStop, kError };

struct ParseResult {
  std::vector<ExtractedHeader> headers;
  ParseOutcome outcome = ParseOutcome::kStop;
  size_t consumed_bits = 0;
  std::string error_state;  // the state whose header was truncated
  bool operator==(const ParseResult&) const = default;
};

ParseResult SimulateParse(const ParserProgram& parser,
                          std::span<const uint8_t> bytes);

// Header indices in deparse order: a topological order of the parse graph,
// followed by headers the parser never reaches, in declaration order.
std::vector<int> DeparseOrder(const CheckedProgram& program,
                              const ParserProgram& parser);

}  // namespace p4mc

#endif  // P4MC_PARSER_COMPILER_H_
