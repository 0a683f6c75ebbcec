// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "absl/strings/str_cat.h"
#include "p4mc/frontend.h"
#include "status_macros.h"

namespace p4mc {

namespace {

using Kind = Token::Kind;
using namespace ast;  // NOLINT

absl::Status ParseError(Span span, std::string message) {
  return DiagnosticsError("ParseError",
                          {Diagnostic{span, Severity::kError,
                                      std::move(message)}});
}

std::string Describe(const Token& token) {
  if (token.kind == Kind::kEnd) return "end of input";
  return absl::StrCat("'", token.text, "'");
}

// Recursive-descent parser over a token vector that always ends in kEnd.
class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {}

  absl::StatusOr<Ast> ParseAll() {
    Ast ast;
    if (Peek().kind == Kind::kEnd) {
      return ParseError(Peek().span, "expected declaration, found end of input");
    }
    while (Peek().kind != Kind::kEnd) {
      const Token& t = Peek();
      switch (t.kind) {
        case Kind::kHeader: {
          ASSIGN_OR_RETURN(HeaderDecl h, ParseHeader());
          ast.headers.push_back(std::move(h));
          break;
        }
        case Kind::kParser: {
          ASSIGN_OR_RETURN(ParserStateDecl p, ParseParserState());
          ast.parsers.push_back(std::move(p));
          break;
        }
        case Kind::kTable: {
          ASSIGN_OR_RETURN(TableDecl table, ParseTable());
          ast.tables.push_back(std::move(table));
          break;
        }
        case Kind::kAction: {
          ASSIGN_OR_RETURN(ActionDecl a, ParseAction());
          ast.actions.push_back(std::move(a));
          break;
        }
        case Kind::kControl: {
          ASSIGN_OR_RETURN(ControlDecl c, ParseControl());
          ast.controls.push_back(std::move(c));
          break;
        }
        default:
          if (t.kind == Kind::kIdent && t.text == "metadata") {
            ASSIGN_OR_RETURN(MetadataDecl m, ParseMetadata());
            ast.metadata.push_back(std::move(m));
            break;
          }
          return ParseError(t.span, absl::StrCat("expected declaration, found ",
                                                 Describe(t)));
      }
    }
    return ast;
  }

 private:
  const Token& Peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  const Token& Next() {
    const Token& t = Peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  bool Accept(Kind kind) {
    if (Peek().kind != kind) return false;
    Next();
    return true;
  }
  absl::StatusOr<Token> Expect(Kind kind) {
    const Token& t = Peek();
    if (t.kind != kind) {
      return ParseError(t.span, absl::StrCat("expected ", TokenKindName(kind),
                                             ", found ", Describe(t)));
    }
    return Next();
  }

  absl::StatusOr<NameRef> ParseRef() {
    ASSIGN_OR_RETURN(Token head, Expect(Kind::kIdent));
    NameRef ref{head.text, std::nullopt, head.span};
    if (Accept(Kind::kDot)) {
      ASSIGN_OR_RETURN(Token field, Expect(Kind::kIdent));
      ref.field = field.text;
    }
    return ref;
  }

  absl::StatusOr<std::vector<FieldDecl>> ParseFieldList() {
    RETURN_IF_ERROR(Expect(Kind::kLBrace).status());
    std::vector<FieldDecl> fields;
    while (!Accept(Kind::kRBrace)) {
      ASSIGN_OR_RETURN(Token name, Expect(Kind::kIdent));
      RETURN_IF_ERROR(Expect(Kind::kColon).status());
      ASSIGN_OR_RETURN(Token width, Expect(Kind::kInt));
      RETURN_IF_ERROR(Expect(Kind::kSemi).status());
      if (width.value < 1) {
        return ParseError(width.span, absl::StrCat("field '", name.text,
                                                   "' must be at least 1 bit wide"));
      }
      fields.push_back(FieldDecl{name.text, width.value, name.span});
    }
    return fields;
  }

  absl::StatusOr<HeaderDecl> ParseHeader() {
    Token kw = Next();
    ASSIGN_OR_RETURN(Token name, Expect(Kind::kIdent));
    RETURN_IF_ERROR(Expect(Kind::kLBrace).status());
    RETURN_IF_ERROR(Expect(Kind::kFields).status());
    ASSIGN_OR_RETURN(std::vector<FieldDecl> fields, ParseFieldList());
    RETURN_IF_ERROR(Expect(Kind::kRBrace).status());
    return HeaderDecl{name.text, std::move(fields), kw.span};
  }

  absl::StatusOr<MetadataDecl> ParseMetadata() {
    Token kw = Next();
    ASSIGN_OR_RETURN(std::vector<FieldDecl> fields, ParseFieldList());
    return MetadataDecl{std::move(fields), kw.span};
  }

  absl::StatusOr<Target> ParseTarget() {
    const Token& t = Peek();
    if (t.kind == Kind::kStop) {
      Next();
      return Target{true, "", t.span};
    }
    ASSIGN_OR_RETURN(Token name, Expect(Kind::kIdent));
    return Target{false, name.text, name.span};
  }

  absl::StatusOr<ParserStateDecl> ParseParserState() {
    Token kw = Next();
    ASSIGN_OR_RETURN(Token name, Expect(Kind::kIdent));
    RETURN_IF_ERROR(Expect(Kind::kLBrace).status());
    ParserStateDecl state;
    state.name = name.text;
    state.span = kw.span;
    if (Peek().kind == Kind::kSwitch) {
      Next();
      state.kind = ParserStateDecl::Kind::kSwitch;
      RETURN_IF_ERROR(Expect(Kind::kLParen).status());
      ASSIGN_OR_RETURN(Token field, Expect(Kind::kIdent));
      if (Peek().kind == Kind::kDot) {
        return ParseError(Peek().span,
                          "switch may only select on a field of the state's "
                          "own header");
      }
      state.select_field = field.text;
      RETURN_IF_ERROR(Expect(Kind::kRParen).status());
      RETURN_IF_ERROR(Expect(Kind::kLBrace).status());
      std::set<uint64_t> seen;
      while (!Accept(Kind::kRBrace)) {
        const Token& t = Peek();
        if (t.kind == Kind::kCase) {
          Next();
          ASSIGN_OR_RETURN(Token value, Expect(Kind::kInt));
          RETURN_IF_ERROR(Expect(Kind::kColon).status());
          ASSIGN_OR_RETURN(Target next, ParseTarget());
          RETURN_IF_ERROR(Expect(Kind::kSemi).status());
          if (!seen.insert(value.value).second) {
            return ParseError(value.span,
                              absl::StrCat("duplicate case value ", value.text));
          }
          state.cases.push_back(SelectCase{value.value, next, t.span});
        } else if (t.kind == Kind::kDefault) {
          Next();
          if (state.default_next.has_value()) {
            return ParseError(t.span, "duplicate default case");
          }
          RETURN_IF_ERROR(Expect(Kind::kColon).status());
          ASSIGN_OR_RETURN(Target next, ParseTarget());
          RETURN_IF_ERROR(Expect(Kind::kSemi).status());
          state.default_next = next;
        } else {
          return ParseError(t.span, absl::StrCat("expected 'case' or 'default', "
                                                 "found ", Describe(t)));
        }
      }
    } else {
      ASSIGN_OR_RETURN(state.next, ParseTarget());
      RETURN_IF_ERROR(Expect(Kind::kSemi).status());
    }
    RETURN_IF_ERROR(Expect(Kind::kRBrace).status());
    return state;
  }

  absl::StatusOr<MatchKind> ParseMatchKind() {
    const Token& t = Next();
    switch (t.kind) {
      case Kind::kExact: return MatchKind::kExact;
      case Kind::kTernary: return MatchKind::kTernary;
      case Kind::kValid: return MatchKind::kValid;
      case Kind::kLpm: return MatchKind::kLpm;
      default:
        return ParseError(t.span, absl::StrCat("expected match kind (exact, "
                                               "ternary, valid, lpm), found ",
                                               Describe(t)));
    }
  }

  absl::StatusOr<TableDecl> ParseTable() {
    Token kw = Next();
    ASSIGN_OR_RETURN(Token name, Expect(Kind::kIdent));
    RETURN_IF_ERROR(Expect(Kind::kLBrace).status());
    TableDecl table;
    table.name = name.text;
    table.span = kw.span;
    bool saw_reads = false, saw_actions = false;
    while (!Accept(Kind::kRBrace)) {
      const Token& t = Peek();
      if (t.kind == Kind::kReads) {
        Next();
        if (saw_reads) return ParseError(t.span, "duplicate 'reads' attribute");
        saw_reads = true;
        RETURN_IF_ERROR(Expect(Kind::kLBrace).status());
        while (!Accept(Kind::kRBrace)) {
          ASSIGN_OR_RETURN(NameRef ref, ParseRef());
          RETURN_IF_ERROR(Expect(Kind::kColon).status());
          ASSIGN_OR_RETURN(MatchKind kind, ParseMatchKind());
          RETURN_IF_ERROR(Expect(Kind::kSemi).status());
          Span span = ref.span;
          table.reads.push_back(ReadDecl{std::move(ref), kind, span});
        }
      } else if (t.kind == Kind::kActions) {
        Next();
        if (saw_actions) {
          return ParseError(t.span, "duplicate 'actions' attribute");
        }
        saw_actions = true;
        RETURN_IF_ERROR(Expect(Kind::kLBrace).status());
        while (!Accept(Kind::kRBrace)) {
          ASSIGN_OR_RETURN(Token action, Expect(Kind::kIdent));
          RETURN_IF_ERROR(Expect(Kind::kSemi).status());
          table.actions.push_back(NameDecl{action.text, action.span});
        }
      } else if (t.kind == Kind::kMaxSize) {
        Next();
        if (table.max_size.has_value()) {
          return ParseError(t.span, "duplicate 'max_size' attribute");
        }
        RETURN_IF_ERROR(Expect(Kind::kColon).status());
        ASSIGN_OR_RETURN(Token size, Expect(Kind::kInt));
        RETURN_IF_ERROR(Expect(Kind::kSemi).status());
        if (size.value < 1) {
          return ParseError(size.span, "max_size must be at least 1");
        }
        table.max_size = size.value;
      } else {
        return ParseError(t.span, absl::StrCat("expected 'reads', 'actions', "
                                               "'max_size' or '}', found ",
                                               Describe(t)));
      }
    }
    if (table.actions.empty()) {
      return ParseError(kw.span, absl::StrCat("table '", table.name,
                                              "' must list at least one action"));
    }
    return table;
  }

  absl::StatusOr<ArgDecl> ParseArg() {
    const Token& t = Peek();
    ArgDecl arg;
    arg.span = t.span;
    if (t.kind == Kind::kMinus || t.kind == Kind::kInt) {
      arg.kind = ArgDecl::Kind::kInt;
      arg.negative = Accept(Kind::kMinus);
      ASSIGN_OR_RETURN(Token value, Expect(Kind::kInt));
      arg.magnitude = value.value;
      return arg;
    }
    if (t.kind != Kind::kIdent) {
      return ParseError(t.span, absl::StrCat("expected argument, found ",
                                             Describe(t)));
    }
    arg.kind = ArgDecl::Kind::kRef;
    ASSIGN_OR_RETURN(arg.ref, ParseRef());
    return arg;
  }

  absl::StatusOr<ActionDecl> ParseAction() {
    Token kw = Next();
    ASSIGN_OR_RETURN(Token name, Expect(Kind::kIdent));
    ActionDecl action;
    action.name = name.text;
    action.span = kw.span;
    RETURN_IF_ERROR(Expect(Kind::kLParen).status());
    if (!Accept(Kind::kRParen)) {
      do {
        ASSIGN_OR_RETURN(Token param, Expect(Kind::kIdent));
        action.params.push_back(NameDecl{param.text, param.span});
      } while (Accept(Kind::kComma));
      RETURN_IF_ERROR(Expect(Kind::kRParen).status());
    }
    RETURN_IF_ERROR(Expect(Kind::kLBrace).status());
    while (!Accept(Kind::kRBrace)) {
      ASSIGN_OR_RETURN(Token callee, Expect(Kind::kIdent));
      CallDecl call{callee.text, {}, callee.span};
      RETURN_IF_ERROR(Expect(Kind::kLParen).status());
      if (!Accept(Kind::kRParen)) {
        do {
          ASSIGN_OR_RETURN(ArgDecl arg, ParseArg());
          call.args.push_back(std::move(arg));
        } while (Accept(Kind::kComma));
        RETURN_IF_ERROR(Expect(Kind::kRParen).status());
      }
      RETURN_IF_ERROR(Expect(Kind::kSemi).status());
      action.body.push_back(std::move(call));
    }
    return action;
  }

  // predicate := conjunction ('||' conjunction)*
  absl::StatusOr<PredicateExpr> ParsePredicate() {
    ASSIGN_OR_RETURN(PredicateExpr lhs, ParseConjunction());
    while (Peek().kind == Kind::kOrOr) {
      Span span = Next().span;
      ASSIGN_OR_RETURN(PredicateExpr rhs, ParseConjunction());
      PredicateExpr both;
      both.kind = PredicateExpr::Kind::kOr;
      both.span = span;
      both.operands.push_back(std::move(lhs));
      both.operands.push_back(std::move(rhs));
      lhs = std::move(both);
    }
    return lhs;
  }

  absl::StatusOr<PredicateExpr> ParseConjunction() {
    ASSIGN_OR_RETURN(PredicateExpr lhs, ParseUnary());
    while (Peek().kind == Kind::kAndAnd) {
      Span span = Next().span;
      ASSIGN_OR_RETURN(PredicateExpr rhs, ParseUnary());
      PredicateExpr both;
      both.kind = PredicateExpr::Kind::kAnd;
      both.span = span;
      both.operands.push_back(std::move(lhs));
      both.operands.push_back(std::move(rhs));
      lhs = std::move(both);
    }
    return lhs;
  }

  absl::StatusOr<PredicateExpr> ParseUnary() {
    const Token& t = Peek();
    PredicateExpr expr;
    expr.span = t.span;
    if (t.kind == Kind::kBang) {
      Next();
      expr.kind = PredicateExpr::Kind::kNot;
      ASSIGN_OR_RETURN(PredicateExpr inner, ParseUnary());
      expr.operands.push_back(std::move(inner));
      return expr;
    }
    if (t.kind == Kind::kLParen) {
      Next();
      ASSIGN_OR_RETURN(expr, ParsePredicate());
      RETURN_IF_ERROR(Expect(Kind::kRParen).status());
      return expr;
    }
    if (t.kind == Kind::kValid) {
      Next();
      expr.kind = PredicateExpr::Kind::kValid;
      RETURN_IF_ERROR(Expect(Kind::kLParen).status());
      ASSIGN_OR_RETURN(expr.ref, ParseRef());
      RETURN_IF_ERROR(Expect(Kind::kRParen).status());
      return expr;
    }
    if (t.kind == Kind::kIdent && Peek(1).kind == Kind::kLParen &&
        (t.text == "defined" || t.text == "miss")) {
      Next();
      Next();
      expr.kind = t.text == "defined" ? PredicateExpr::Kind::kDefined
                                      : PredicateExpr::Kind::kMiss;
      ASSIGN_OR_RETURN(expr.ref, ParseRef());
      RETURN_IF_ERROR(Expect(Kind::kRParen).status());
      return expr;
    }
    if (t.kind != Kind::kIdent) {
      return ParseError(t.span, absl::StrCat("expected predicate, found ",
                                             Describe(t)));
    }
    expr.kind = PredicateExpr::Kind::kEquals;
    ASSIGN_OR_RETURN(expr.ref, ParseRef());
    RETURN_IF_ERROR(Expect(Kind::kEqEq).status());
    ASSIGN_OR_RETURN(Token value, Expect(Kind::kInt));
    expr.value = value.value;
    return expr;
  }

  absl::StatusOr<std::vector<Statement>> ParseBlock() {
    RETURN_IF_ERROR(Expect(Kind::kLBrace).status());
    std::vector<Statement> body;
    while (!Accept(Kind::kRBrace)) {
      ASSIGN_OR_RETURN(Statement s, ParseStatement());
      body.push_back(std::move(s));
    }
    return body;
  }

  absl::StatusOr<Statement> ParseStatement() {
    const Token& t = Peek();
    Statement s;
    s.span = t.span;
    if (t.kind == Kind::kTable) {
      Next();
      s.kind = Statement::Kind::kApply;
      RETURN_IF_ERROR(Expect(Kind::kLParen).status());
      ASSIGN_OR_RETURN(Token name, Expect(Kind::kIdent));
      s.table = NameDecl{name.text, name.span};
      RETURN_IF_ERROR(Expect(Kind::kRParen).status());
      RETURN_IF_ERROR(Expect(Kind::kSemi).status());
      return s;
    }
    if (t.kind == Kind::kIf) {
      Next();
      s.kind = Statement::Kind::kIf;
      RETURN_IF_ERROR(Expect(Kind::kLParen).status());
      ASSIGN_OR_RETURN(s.condition, ParsePredicate());
      RETURN_IF_ERROR(Expect(Kind::kRParen).status());
      ASSIGN_OR_RETURN(s.then_body, ParseBlock());
      if (Accept(Kind::kElse)) {
        if (Peek().kind == Kind::kIf) {
          ASSIGN_OR_RETURN(Statement nested, ParseStatement());
          s.else_body.push_back(std::move(nested));
        } else {
          ASSIGN_OR_RETURN(s.else_body, ParseBlock());
        }
      }
      return s;
    }
    return ParseError(t.span, absl::StrCat("expected 'table' or 'if', found ",
                                           Describe(t)));
  }

  absl::StatusOr<ControlDecl> ParseControl() {
    Token kw = Next();
    ASSIGN_OR_RETURN(Token name, Expect(Kind::kIdent));
    RETURN_IF_ERROR(Expect(Kind::kLParen).status());
    RETURN_IF_ERROR(Expect(Kind::kRParen).status());
    ControlDecl control{name.text, {}, kw.span};
    ASSIGN_OR_RETURN(control.body, ParseBlock());
    return control;
  }

  const std::vector<Token>& tokens_;
  size_t pos_ = 0;
};

}  // namespace

const char* ast::MatchKindName(MatchKind kind) {
  switch (kind) {
    case MatchKind::kExact: return "exact";
    case MatchKind::kTernary: return "ternary";
    case MatchKind::kValid: return "valid";
    case MatchKind::kLpm: return "lpm";
  }
  return "?";
}

absl::StatusOr<Ast> Parse(const std::vector<Token>& tokens) {
  if (tokens.empty() || tokens.back().kind != Kind::kEnd) {
    std::vector<Token> terminated = tokens;
    Token end;
    end.kind = Kind::kEnd;
    if (!tokens.empty()) end.span = tokens.back().span;
    terminated.push_back(end);
    return Parser(terminated).ParseAll();
  }
  return Parser(tokens).ParseAll();
}

absl::StatusOr<Ast> ParseProgram(const SourceProgram& source) {
  ASSIGN_OR_RETURN(std::vector<Token> tokens, Tokenize(source));
  return Parse(tokens);
}

}  // namespace p4mc
