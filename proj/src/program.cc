// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

#include "p4mc/program.h"

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/string_view.h"

namespace p4mc {

int HeaderLayout::FieldIndex(absl::string_view field) const {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].name == field) return static_cast<int>(i);
  }
  return -1;
}

std::string TableRead::ToString() const {
  return kind == MatchKind::kValid ? header_name : field.ToString();
}

const char* PrimitiveName(PrimitiveOp op) {
  switch (op) {
    case PrimitiveOp::kSetField: return "set_field";
    case PrimitiveOp::kCopyField: return "copy_field";
    case PrimitiveOp::kAddHeader: return "add_header";
    case PrimitiveOp::kRemoveHeader: return "remove_header";
    case PrimitiveOp::kIncrement: return "increment";
    case PrimitiveOp::kChecksum: return "checksum";
  }
  return "?";
}

std::optional<PrimitiveOp> PrimitiveFromName(absl::string_view name) {
  for (PrimitiveOp op :
       {PrimitiveOp::kSetField, PrimitiveOp::kCopyField, PrimitiveOp::kAddHeader,
        PrimitiveOp::kRemoveHeader, PrimitiveOp::kIncrement,
        PrimitiveOp::kChecksum}) {
    if (name == PrimitiveName(op)) return op;
  }
  return std::nullopt;
}

std::string Condition::ToString() const {
  switch (kind) {
    case Kind::kDefined: return absl::StrCat("defined(", field.ToString(), ")");
    case Kind::kValid: return absl::StrCat("valid(", name, ")");
    case Kind::kMiss: return absl::StrCat("miss(", name, ")");
    case Kind::kEquals:
      return absl::StrFormat("%s == 0x%x", field.ToString(), value);
    case Kind::kNot: return absl::StrCat("!", operands[0].ToString());
    case Kind::kAnd:
      return absl::StrCat("(", operands[0].ToString(), " && ",
                          operands[1].ToString(), ")");
    case Kind::kOr:
      return absl::StrCat("(", operands[0].ToString(), " || ",
                          operands[1].ToString(), ")");
  }
  return "";
}

int CheckedProgram::HeaderIndex(absl::string_view name) const {
  if (name == kMetadataName) return metadata_index();
  for (size_t i = 0; i < headers.size(); ++i) {
    if (headers[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

const Table* CheckedProgram::FindTable(absl::string_view name) const {
  for (const Table& t : tables) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

const Action* CheckedProgram::FindAction(absl::string_view name) const {
  for (const Action& a : actions) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

const ParserState* CheckedProgram::FindState(absl::string_view name) const {
  for (const ParserState& s : parser_states) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::optional<FieldRef> CheckedProgram::ResolveField(
    absl::string_view header, absl::string_view field) const {
  int h = HeaderIndex(header);
  if (h < 0) return std::nullopt;
  const HeaderLayout& hl = layout(h);
  int f = hl.FieldIndex(field);
  if (f < 0) return std::nullopt;
  return FieldRef{h, f, hl.name, hl.fields[f].name, hl.fields[f].offset,
                  hl.fields[f].width};
}

std::string LocationName(const CheckedProgram& program, const Location& loc) {
  const HeaderLayout& hl = program.layout(loc.header);
  if (loc.field == Location::kValidityBit) return hl.name + ".$valid";
  return hl.name + "." + hl.fields[loc.field].name;
}

PrimitiveEffects EffectsOf(const CheckedProgram& program,
                           const PrimitiveCall& call) {
  PrimitiveEffects e;
  auto read_value = [&](const FieldRef& f) {
    e.value_reads.push_back({f.header, f.field});
    if (!program.is_metadata(f.header)) {
      e.validity_reads.push_back({f.header, Location::kValidityBit});
      e.may_fault = true;
    }
  };
  auto write = [&](const FieldRef& f) {
    e.writes.push_back({f.header, f.field});
    if (!program.is_metadata(f.header)) {
      e.validity_reads.push_back({f.header, Location::kValidityBit});
      e.may_fault = true;
    }
  };
  const std::vector<Operand>& args = call.args;
  switch (call.op) {
    case PrimitiveOp::kSetField:
      write(args[0].field);
      break;
    case PrimitiveOp::kCopyField:
      read_value(args[1].field);
      write(args[0].field);
      break;
    case PrimitiveOp::kAddHeader:
    case PrimitiveOp::kRemoveHeader:
      e.writes.push_back({args[0].header, Location::kValidityBit});
      e.wholesale_header = args[0].header;
      break;
    case PrimitiveOp::kIncrement:
      read_value(args[0].field);
      write(args[0].field);
      break;
    case PrimitiveOp::kChecksum:
      for (size_t i = 1; i < args.size(); ++i) {
        if (args[i].kind == Operand::Kind::kHeader) {
          const HeaderLayout& hl = program.layout(args[i].header);
          for (size_t f = 0; f < hl.fields.size(); ++f) {
            read_value(FieldRef{args[i].header, static_cast<int>(f), hl.name,
                                hl.fields[f].name, hl.fields[f].offset,
                                hl.fields[f].width});
          }
        } else {
          read_value(args[i].field);
        }
      }
      write(args[0].field);
      break;
  }
  return e;
}

}  // namespace p4mc
