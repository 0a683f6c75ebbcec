// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

// The resolved, type-checked form of a P4 program. Every name is bound to a
// declaration and every field reference carries its bit layout. This is the
// input to parser compilation, dependency analysis and code emission.

#ifndef P4MC_PROGRAM_H_
#define P4MC_PROGRAM_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/strings/string_view.h"
#include "p4mc/ast.h"

namespace p4mc {

using ast::MatchKind;

inline constexpr absl::string_view kMetadataName = "metadata";
inline constexpr absl::string_view kStartState = "start";
inline constexpr absl::string_view kFaultToCpu = "fault_to_cpu";

// Standard metadata fields, always present in this order.
inline constexpr absl::string_view kIngressPort = "ingress_port";
inline constexpr absl::string_view kEgressSpec = "egress_spec";
inline constexpr absl::string_view kIngressError = "ingress_error";
inline constexpr uint32_t kIngressPortWidth = 16;
inline constexpr uint32_t kEgressSpecWidth = 16;
inline constexpr uint32_t kIngressErrorWidth = 1;

inline constexpr uint32_t kMaxFieldWidth = 64;
inline constexpr uint64_t kDefaultMaxSize = 1024;

struct FieldLayout {
  std::string name;
  uint32_t offset = 0;
  uint32_t width = 0;
  bool operator==(const FieldLayout&) const = default;
};

struct HeaderLayout {
  std::string name;
  std::vector<FieldLayout> fields;
  uint32_t width = 0;

  int FieldIndex(absl::string_view field) const;
  bool operator==(const HeaderLayout&) const = default;
};

// A resolved `header.field`. `header` indexes CheckedProgram::headers, or is
// CheckedProgram::metadata_index() for metadata fields.
struct FieldRef {
  int header = 0;
  int field = 0;
  std::string header_name;
  std::string field_name;
  uint32_t offset = 0;
  uint32_t width = 0;

  std::string ToString() const { return header_name + "." + field_name; }
  bool operator==(const FieldRef&) const = default;
};

inline uint64_t WidthMask(uint32_t width) {
  return width >= 64 ? ~uint64_t{0} : (uint64_t{1} << width) - 1;
}

struct StateRef {
  bool stop = false;
  std::string state;
  bool operator==(const StateRef&) const = default;
};

struct ParserCase {
  uint64_t value = 0;
  StateRef next;
  bool operator==(const ParserCase&) const = default;
};

struct ParserState {
  std::string name;
  int header = -1;  // -1 for `start`, which extracts nothing
  bool is_switch = false;
  StateRef next;               // !is_switch
  int select_field = -1;       // is_switch: index into the header's fields
  std::vector<ParserCase> cases;
  std::optional<StateRef> default_next;
  bool operator==(const ParserState&) const = default;
};

struct TableRead {
  MatchKind kind = MatchKind::kExact;
  FieldRef field;  // all kinds except kValid
  int header = -1;  // kValid
  std::string header_name;

  std::string ToString() const;
  uint32_t width() const { return kind == MatchKind::kValid ? 1 : field.width; }
  bool operator==(const TableRead&) const = default;
};

struct Table {
  std::string name;
  std::vector<TableRead> reads;
  std::vector<std::string> actions;
  uint64_t max_size = kDefaultMaxSize;
  bool operator==(const Table&) const = default;
};

enum class PrimitiveOp {
  kSetField,
  kCopyField,
  kAddHeader,
  kRemoveHeader,
  kIncrement,
  kChecksum,
};

const char* PrimitiveName(PrimitiveOp op);
std::optional<PrimitiveOp> PrimitiveFromName(absl::string_view name);

struct Operand {
  enum class Kind { kField, kHeader, kParam, kConst };
  Kind kind = Kind::kConst;
  FieldRef field;           // kField
  int header = -1;          // kHeader
  std::string header_name;  // kHeader
  int param = -1;           // kParam
  std::string param_name;   // kParam
  uint64_t value = 0;       // kConst magnitude
  bool negative = false;    // kConst (increment deltas only)

  bool operator==(const Operand&) const = default;
};

struct PrimitiveCall {
  PrimitiveOp op = PrimitiveOp::kSetField;
  std::vector<Operand> args;
  bool operator==(const PrimitiveCall&) const = default;
};

struct Action {
  std::string name;
  std::vector<std::string> params;
  std::vector<PrimitiveCall> body;
  bool builtin = false;  // library actions such as fault_to_cpu
  bool operator==(const Action&) const = default;
};

struct Condition {
  enum class Kind { kDefined, kValid, kMiss, kEquals, kNot, kAnd, kOr };
  Kind kind = Kind::kDefined;
  FieldRef field;    // kDefined, kEquals
  int header = -1;   // kValid
  std::string name;  // kValid: header name; kMiss: table name
  uint64_t value = 0;
  std::vector<Condition> operands;

  std::string ToString() const;
  bool operator==(const Condition&) const = default;
};

struct ControlStatement {
  enum class Kind { kApply, kIf };
  Kind kind = Kind::kApply;
  std::string table;
  Condition condition;
  std::vector<ControlStatement> then_body;
  std::vector<ControlStatement> else_body;
  bool operator==(const ControlStatement&) const = default;
};

struct CheckedProgram {
  std::vector<HeaderLayout> headers;  // packet headers, declaration order
  HeaderLayout metadata;
  std::vector<ParserState> parser_states;
  std::vector<Table> tables;
  std::vector<Action> actions;
  std::string entry_control;  // empty when the program declares no control
  std::vector<ControlStatement> control;

  int metadata_index() const { return static_cast<int>(headers.size()); }
  bool is_metadata(int header) const { return header == metadata_index(); }
  const HeaderLayout& layout(int header) const {
    return is_metadata(header) ? metadata : headers[header];
  }
  int HeaderIndex(absl::string_view name) const;  // -1 if absent
  const Table* FindTable(absl::string_view name) const;
  const Action* FindAction(absl::string_view name) const;
  const ParserState* FindState(absl::string_view name) const;
  std::optional<FieldRef> ResolveField(absl::string_view header,
                                       absl::string_view field) const;

  bool operator==(const CheckedProgram&) const = default;
};

// A storage cell for dependency analysis: a field, or a header's validity bit
// (field == kValidityBit). Metadata fields include their defined-bit.
struct Location {
  static constexpr int kValidityBit = -1;
  int header = 0;
  int field = 0;
  auto operator<=>(const Location&) const = default;
};

std::string LocationName(const CheckedProgram& program, const Location& loc);

// Storage touched by one primitive call.
struct PrimitiveEffects {
  std::vector<Location> value_reads;     // field values consumed
  std::vector<Location> validity_reads;  // header validity checks
  std::vector<Location> writes;          // fields or validity bits written
  int wholesale_header = -1;  // add/remove_header: every field rewritten
  bool may_fault = false;     // touches a packet-header field
};

PrimitiveEffects EffectsOf(const CheckedProgram& program,
                           const PrimitiveCall& call);

// Source text that checks back to an equal CheckedProgram.
std::string PrintProgram(const CheckedProgram& program);

}  // namespace p4mc

#endif  // P4MC_PROGRAM_H_
