// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef P4MC_FRONTEND_H_
#define P4MC_FRONTEND_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "p4mc/ast.h"

namespace p4mc {

struct SourceProgram {
  std::string text;
  std::string origin = "<memory>";
};

struct Token {
  enum class Kind {
    kIdent,
    kInt,
    kLBrace,
    kRBrace,
    kLParen,
    kRParen,
    kColon,
    kSemi,
    kComma,
    kDot,
    kBang,
    kMinus,
    kEqEq,
    kAndAnd,
    kOrOr,
    // Keywords.
    kHeader,
    kFields,
    kParser,
    kSwitch,
    kCase,
    kDefault,
    kStop,
    kTable,
    kReads,
    kActions,
    kMaxSize,
    kAction,
    kControl,
    kIf,
    kElse,
    kExact,
    kTernary,
    kValid,
    kLpm,
    kEnd,
  };

  Kind kind = Kind::kEnd;
  std::string text;
  uint64_t value = 0;  // kInt only
  Span span;

  bool operator==(const Token& other) const {
    return kind == other.kind && text == other.text && value == other.value;
  }
};

// Human-readable spelling of a token kind, used in diagnostics.
absl::string_view TokenKindName(Token::Kind kind);

// Errors carry class "LexError" and a single located diagnostic.
absl::StatusOr<std::vector<Token>> Tokenize(const SourceProgram& source);

// Errors carry class "ParseError" and a single located diagnostic.
absl::StatusOr<ast::Ast> Parse(const std::vector<Token>& tokens);

absl::StatusOr<ast::Ast> ParseProgram(const SourceProgram& source);

// Renders an Ast back to source text that parses to an equal Ast.
std::string PrintAst(const ast::Ast& ast);
std::string PrintPredicate(const ast::PredicateExpr& predicate);

}  // namespace p4mc

#endif  // P4MC_FRONTEND_H_
