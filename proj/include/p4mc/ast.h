// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

// Untyped syntax tree for P4 source. Nodes mirror the surface syntax one to
// one; no name resolution happens at this level.

#ifndef P4MC_AST_H_
#define P4MC_AST_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "p4mc/status.h"

namespace p4mc::ast {

struct FieldDecl {
  std::string name;
  uint64_t width = 0;
  Span span;
  bool operator==(const FieldDecl&) const = default;
};

struct HeaderDecl {
  std::string name;
  std::vector<FieldDecl> fields;
  Span span;
  bool operator==(const HeaderDecl&) const = default;
};

// `metadata { name : width; ... }` adds program-specific metadata fields.
struct MetadataDecl {
  std::vector<FieldDecl> fields;
  Span span;
  bool operator==(const MetadataDecl&) const = default;
};

// `a` (a header) or `a.b` (a field of header a).
struct NameRef {
  std::string header;
  std::optional<std::string> field;
  Span span;

  bool is_field() const { return field.has_value(); }
  std::string ToString() const {
    return field.has_value() ? header + "." + *field : header;
  }
  bool operator==(const NameRef&) const = default;
};

// Next state of a parser transition; `stop` ends parsing.
struct Target {
  bool stop = false;
  std::string state;
  Span span;
  bool operator==(const Target&) const = default;
};

struct SelectCase {
  uint64_t value = 0;
  Target next;
  Span span;
  bool operator==(const SelectCase&) const = default;
};

struct ParserStateDecl {
  enum class Kind { kTransition, kSwitch };
  std::string name;
  Kind kind = Kind::kTransition;
  Target next;                         // kTransition
  std::string select_field;            // kSwitch
  std::vector<SelectCase> cases;       // kSwitch
  std::optional<Target> default_next;  // kSwitch
  Span span;
  bool operator==(const ParserStateDecl&) const = default;
};

enum class MatchKind { kExact, kTernary, kValid, kLpm };

struct ReadDecl {
  NameRef ref;
  MatchKind kind = MatchKind::kExact;
  Span span;
  bool operator==(const ReadDecl&) const = default;
};

struct NameDecl {
  std::string name;
  Span span;
  bool operator==(const NameDecl&) const = default;
};

struct TableDecl {
  std::string name;
  std::vector<ReadDecl> reads;
  std::vector<NameDecl> actions;
  std::optional<uint64_t> max_size;
  Span span;
  bool operator==(const TableDecl&) const = default;
};

struct ArgDecl {
  enum class Kind { kRef, kInt };
  Kind kind = Kind::kRef;
  NameRef ref;
  uint64_t magnitude = 0;
  bool negative = false;
  Span span;
  bool operator==(const ArgDecl&) const = default;
};

struct CallDecl {
  std::string name;
  std::vector<ArgDecl> args;
  Span span;
  bool operator==(const CallDecl&) const = default;
};

struct ActionDecl {
  std::string name;
  std::vector<NameDecl> params;
  std::vector<CallDecl> body;
  Span span;
  bool operator==(const ActionDecl&) const = default;
};

struct PredicateExpr {
  enum class Kind { kDefined, kValid, kMiss, kEquals, kNot, kAnd, kOr };
  Kind kind = Kind::kDefined;
  NameRef ref;     // kDefined, kValid, kEquals; kMiss uses ref.header
  uint64_t value = 0;                  // kEquals
  std::vector<PredicateExpr> operands;  // kNot (1), kAnd/kOr (2)
  Span span;
  bool operator==(const PredicateExpr&) const = default;
};

struct Statement {
  enum class Kind { kApply, kIf };
  Kind kind = Kind::kApply;
  NameDecl table;  // kApply
  PredicateExpr condition;
  std::vector<Statement> then_body;
  std::vector<Statement> else_body;
  Span span;
  bool operator==(const Statement&) const = default;
};

struct ControlDecl {
  std::string name;
  std::vector<Statement> body;
  Span span;
  bool operator==(const ControlDecl&) const = default;
};

struct Ast {
  std::vector<HeaderDecl> headers;
  std::vector<MetadataDecl> metadata;
  std::vector<ParserStateDecl> parsers;
  std::vector<TableDecl> tables;
  std::vector<ActionDecl> actions;
  std::vector<ControlDecl> controls;
  bool operator==(const Ast&) const = default;
};

const char* MatchKindName(MatchKind kind);

}  // namespace p4mc::ast

#endif  // P4MC_AST_H_
