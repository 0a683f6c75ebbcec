// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

#include <string>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "p4mc/frontend.h"

namespace p4mc {

namespace {

using namespace ast;  // NOLINT

std::string Hex(uint64_t v) { return absl::StrFormat("0x%x", v); }

std::string PrintTarget(const Target& t) { return t.stop ? "stop" : t.state; }

void PrintFields(const std::vector<FieldDecl>& fields, int indent,
                 std::string* out) {
  std::string pad(indent, ' ');
  for (const FieldDecl& f : fields) {
    absl::StrAppend(out, pad, f.name, " : ", f.width, ";\n");
  }
}

void PrintStatements(const std::vector<Statement>& body, int indent,
                     std::string* out) {
  std::string pad(indent, ' ');
  for (const Statement& s : body) {
    if (s.kind == Statement::Kind::kApply) {
      absl::StrAppend(out, pad, "table(", s.table.name, ");\n");
      continue;
    }
    absl::StrAppend(out, pad, "if (", PrintPredicate(s.condition), ") {\n");
    PrintStatements(s.then_body, indent + 4, out);
    absl::StrAppend(out, pad, "}");
    if (!s.else_body.empty()) {
      absl::StrAppend(out, " else {\n");
      PrintStatements(s.else_body, indent + 4, out);
      absl::StrAppend(out, pad, "}");
    }
    absl::StrAppend(out, "\n");
  }
}

}  // namespace

std::string PrintPredicate(const PredicateExpr& p) {
  switch (p.kind) {
    case PredicateExpr::Kind::kDefined:
      return absl::StrCat("defined(", p.ref.ToString(), ")");
    case PredicateExpr::Kind::kValid:
      return absl::StrCat("valid(", p.ref.ToString(), ")");
    case PredicateExpr::Kind::kMiss:
      return absl::StrCat("miss(", p.ref.ToString(), ")");
    case PredicateExpr::Kind::kEquals:
      return absl::StrCat(p.ref.ToString(), " == ", Hex(p.value));
    case PredicateExpr::Kind::kNot:
      return absl::StrCat("!", PrintPredicate(p.operands[0]));
    case PredicateExpr::Kind::kAnd:
      return absl::StrCat("(", PrintPredicate(p.operands[0]), " && ",
                          PrintPredicate(p.operands[1]), ")");
    case PredicateExpr::Kind::kOr:
      return absl::StrCat("(", PrintPredicate(p.operands[0]), " || ",
                          PrintPredicate(p.operands[1]), ")");
  }
  return "";
}

std::string PrintAst(const Ast& ast) {
  std::string out;
  for (const HeaderDecl& h : ast.headers) {
    absl::StrAppend(&out, "header ", h.name, " {\n    fields {\n");
    PrintFields(h.fields, 8, &out);
    absl::StrAppend(&out, "    }\n}\n\n");
  }
  for (const MetadataDecl& m : ast.metadata) {
    absl::StrAppend(&out, "metadata {\n");
    PrintFields(m.fields, 4, &out);
    absl::StrAppend(&out, "}\n\n");
  }
  for (const ParserStateDecl& p : ast.parsers) {
    absl::StrAppend(&out, "parser ", p.name, " {\n");
    if (p.kind == ParserStateDecl::Kind::kTransition) {
      absl::StrAppend(&out, "    ", PrintTarget(p.next), ";\n");
    } else {
      absl::StrAppend(&out, "    switch(", p.select_field, ") {\n");
      for (const SelectCase& c : p.cases) {
        absl::StrAppend(&out, "        case ", Hex(c.value), ": ",
                        PrintTarget(c.next), ";\n");
      }
      if (p.default_next.has_value()) {
        absl::StrAppend(&out, "        default: ", PrintTarget(*p.default_next),
                        ";\n");
      }
      absl::StrAppend(&out, "    }\n");
    }
    absl::StrAppend(&out, "}\n\n");
  }
  for (const TableDecl& t : ast.tables) {
    absl::StrAppend(&out, "table ", t.name, " {\n");
    if (!t.reads.empty()) {
      absl::StrAppend(&out, "    reads {\n");
      for (const ReadDecl& r : t.reads) {
        absl::StrAppend(&out, "        ", r.ref.ToString(), " : ",
                        MatchKindName(r.kind), ";\n");
      }
      absl::StrAppend(&out, "    }\n");
    }
    absl::StrAppend(&out, "    actions {\n");
    for (const NameDecl& a : t.actions) {
      absl::StrAppend(&out, "        ", a.name, ";\n");
    }
    absl::StrAppend(&out, "    }\n");
    if (t.max_size.has_value()) {
      absl::StrAppend(&out, "    max_size : ", *t.max_size, ";\n");
    }
    absl::StrAppend(&out, "}\n\n");
  }
  for (const ActionDecl& a : ast.actions) {
    absl::StrAppend(&out, "action ", a.name, "(");
    for (size_t i = 0; i < a.params.size(); ++i) {
      absl::StrAppend(&out, i ? ", " : "", a.params[i].name);
    }
    absl::StrAppend(&out, ") {\n");
    for (const CallDecl& c : a.body) {
      absl::StrAppend(&out, "    ", c.name, "(");
      for (size_t i = 0; i < c.args.size(); ++i) {
        const ArgDecl& arg = c.args[i];
        absl::StrAppend(&out, i ? ", " : "");
        if (arg.kind == ArgDecl::Kind::kRef) {
          absl::StrAppend(&out, arg.ref.ToString());
        } else {
          absl::StrAppend(&out, arg.negative ? "-" : "", Hex(arg.magnitude));
        }
      }
      absl::StrAppend(&out, ");\n");
    }
    absl::StrAppend(&out, "}\n\n");
  }
  for (const ControlDecl& c : ast.controls) {
    absl::StrAppend(&out, "control ", c.name, "() {\n");
    PrintStatements(c.body, 4, &out);
    absl::StrAppend(&out, "}\n\n");
  }
  return out;
}

}  // namespace p4mc
