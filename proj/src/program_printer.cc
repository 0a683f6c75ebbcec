// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

#include <string>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "p4mc/program.h"

namespace p4mc {

namespace {

std::string Hex(uint64_t v) { return absl::StrFormat("0x%x", v); }

std::string Name(const StateRef& ref) { return ref.stop ? "stop" : ref.state; }

std::string OperandText(const Operand& op) {
  switch (op.kind) {
    case Operand::Kind::kField: return op.field.ToString();
    case Operand::Kind::kHeader: return op.header_name;
    case Operand::Kind::kParam: return op.param_name;
    case Operand::Kind::kConst: return (op.negative ? "-" : "") + Hex(op.value);
  }
  return "";
}

void PrintBody(const std::vector<ControlStatement>& body, int indent,
               std::string* out) {
  std::string pad(indent, ' ');
  for (const ControlStatement& s : body) {
    if (s.kind == ControlStatement::Kind::kApply) {
      absl::StrAppend(out, pad, "table(", s.table, ");\n");
      continue;
    }
    absl::StrAppend(out, pad, "if (", s.condition.ToString(), ") {\n");
    PrintBody(s.then_body, indent + 4, out);
    absl::StrAppend(out, pad, "}");
    if (!s.else_body.empty()) {
      absl::StrAppend(out, " else {\n");
      PrintBody(s.else_body, indent + 4, out);
      absl::StrAppend(out, pad, "}");
    }
    absl::StrAppend(out, "\n");
  }
}

}  // namespace

std::string PrintProgram(const CheckedProgram& program) {
  std::string out;
  for (const HeaderLayout& h : program.headers) {
    absl::StrAppend(&out, "header ", h.name, " {\n    fields {\n");
    for (const FieldLayout& f : h.fields) {
      absl::StrAppend(&out, "        ", f.name, " : ", f.width, ";\n");
    }
    absl::StrAppend(&out, "    }\n}\n\n");
  }
  if (program.metadata.fields.size() > 3) {
    absl::StrAppend(&out, "metadata {\n");
    for (size_t i = 3; i < program.metadata.fields.size(); ++i) {
      const FieldLayout& f = program.metadata.fields[i];
      absl::StrAppend(&out, "    ", f.name, " : ", f.width, ";\n");
    }
    absl::StrAppend(&out, "}\n\n");
  }
  for (const ParserState& s : program.parser_states) {
    absl::StrAppend(&out, "parser ", s.name, " {\n");
    if (!s.is_switch) {
      absl::StrAppend(&out, "    ", Name(s.next), ";\n");
    } else {
      absl::StrAppend(&out, "    switch(",
                      program.headers[s.header].fields[s.select_field].name,
                      ") {\n");
      for (const ParserCase& c : s.cases) {
        absl::StrAppend(&out, "        case ", Hex(c.value), ": ", Name(c.next),
                        ";\n");
      }
      if (s.default_next.has_value()) {
        absl::StrAppend(&out, "        default: ", Name(*s.default_next), ";\n");
      }
      absl::StrAppend(&out, "    }\n");
    }
    absl::StrAppend(&out, "}\n\n");
  }
  for (const Table& t : program.tables) {
    absl::StrAppend(&out, "table ", t.name, " {\n");
    if (!t.reads.empty()) {
      absl::StrAppend(&out, "    reads {\n");
      for (const TableRead& r : t.reads) {
        absl::StrAppend(&out, "        ", r.ToString(), " : ",
                        ast::MatchKindName(r.kind), ";\n");
      }
      absl::StrAppend(&out, "    }\n");
    }
    absl::StrAppend(&out, "    actions {\n");
    for (const std::string& a : t.actions) {
      absl::StrAppend(&out, "        ", a, ";\n");
    }
    absl::StrAppend(&out, "    }\n    max_size : ", t.max_size, ";\n}\n\n");
  }
  for (const Action& a : program.actions) {
    if (a.builtin) continue;
    absl::StrAppend(&out, "action ", a.name, "(");
    for (size_t i = 0; i < a.params.size(); ++i) {
      absl::StrAppend(&out, i ? ", " : "", a.params[i]);
    }
    absl::StrAppend(&out, ") {\n");
    for (const PrimitiveCall& c : a.body) {
      absl::StrAppend(&out, "    ", PrimitiveName(c.op), "(");
      for (size_t i = 0; i < c.args.size(); ++i) {
        absl::StrAppend(&out, i ? ", " : "", OperandText(c.args[i]));
      }
      absl::StrAppend(&out, ");\n");
    }
    absl::StrAppend(&out, "}\n\n");
  }
  if (!program.entry_control.empty()) {
    absl::StrAppend(&out, "control ", program.entry_control, "() {\n");
    PrintBody(program.control, 4, &out);
    absl::StrAppend(&out, "}\n");
  }
  return out;
}

}  // namespace p4mc
