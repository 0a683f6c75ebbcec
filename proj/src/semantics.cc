// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

#include "p4mc/semantics.h"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/string_view.h"
#include "p4mc/status.h"

namespace p4mc {

namespace {

using namespace ast;  // NOLINT

class Checker {
 public:
  explicit Checker(const Ast& ast) : ast_(ast) {}

  absl::StatusOr<CheckedProgram> Run() {
    CheckHeaders();
    CheckMetadata();
    CheckActions();
    CheckTables();
    CheckParserStates();
    CheckControls();
    if (!errors_.empty()) return DiagnosticsError("SemanticError", errors_);
    return std::move(program_);
  }

 private:
  void Error(Span span, std::string message) {
    errors_.push_back(Diagnostic{span, Severity::kError, std::move(message)});
  }

  HeaderLayout LayoutFields(const std::string& owner,
                            const std::vector<FieldDecl>& fields,
                            HeaderLayout layout) {
    for (const FieldDecl& f : fields) {
      if (layout.FieldIndex(f.name) >= 0) {
        Error(f.span, absl::StrCat("duplicate field '", f.name, "' in ", owner));
        continue;
      }
      if (f.width > kMaxFieldWidth) {
        Error(f.span, absl::StrCat("field '", owner, ".", f.name, "' is ",
                                   f.width, " bits wide; the limit is ",
                                   kMaxFieldWidth));
        continue;
      }
      layout.fields.push_back(FieldLayout{f.name, layout.width,
                                          static_cast<uint32_t>(f.width)});
      layout.width += static_cast<uint32_t>(f.width);
    }
    return layout;
  }

  void CheckHeaders() {
    for (const HeaderDecl& h : ast_.headers) {
      if (h.name == kMetadataName) {
        Error(h.span, "'metadata' is reserved and cannot name a header");
        continue;
      }
      if (program_.HeaderIndex(h.name) >= 0) {
        Error(h.span, absl::StrCat("duplicate header '", h.name, "'"));
        continue;
      }
      HeaderLayout layout;
      layout.name = h.name;
      program_.headers.push_back(LayoutFields(h.name, h.fields, layout));
    }
  }

  void CheckMetadata() {
    HeaderLayout& md = program_.metadata;
    md.name = std::string(kMetadataName);
    auto add = [&md](absl::string_view name, uint32_t width) {
      md.fields.push_back(FieldLayout{std::string(name), md.width, width});
      md.width += width;
    };
    add(kIngressPort, kIngressPortWidth);
    add(kEgressSpec, kEgressSpecWidth);
    add(kIngressError, kIngressErrorWidth);
    std::set<std::string> extras;
    for (const MetadataDecl& decl : ast_.metadata) {
      for (const FieldDecl& f : decl.fields) {
        int existing = md.FieldIndex(f.name);
        if (existing >= 0 && existing < 3) {
          if (md.fields[existing].width != f.width) {
            Error(f.span, absl::StrCat("standard metadata field '", f.name,
                                       "' is ", md.fields[existing].width,
                                       " bits wide and cannot be redeclared "
                                       "with width ", f.width));
          }
          continue;
        }
        if (existing >= 0) {
          Error(f.span, absl::StrCat("duplicate metadata field '", f.name, "'"));
          continue;
        }
        if (f.width > kMaxFieldWidth) {
          Error(f.span, absl::StrCat("metadata field '", f.name, "' is ",
                                     f.width, " bits wide; the limit is ",
                                     kMaxFieldWidth));
          continue;
        }
        add(f.name, static_cast<uint32_t>(f.width));
      }
    }
  }

  std::optional<FieldRef> ResolveFieldRef(const NameRef& ref) {
    if (!ref.is_field()) {
      Error(ref.span, absl::StrCat("expected a field reference, found '",
                                   ref.header, "'"));
      return std::nullopt;
    }
    int h = program_.HeaderIndex(ref.header);
    if (h < 0) {
      Error(ref.span, absl::StrCat("unknown header '", ref.header, "'"));
      return std::nullopt;
    }
    std::optional<FieldRef> f = program_.ResolveField(ref.header, *ref.field);
    if (!f.has_value()) {
      Error(ref.span, absl::StrCat("header '", ref.header, "' has no field '",
                                   *ref.field, "'"));
    }
    return f;
  }

  // A bare name that must denote a packet header (not metadata).
  std::optional<int> ResolvePacketHeader(const NameRef& ref,
                                         absl::string_view what) {
    if (ref.is_field()) {
      Error(ref.span, absl::StrCat(what, " expects a header, found field '",
                                   ref.ToString(), "'"));
      return std::nullopt;
    }
    if (ref.header == kMetadataName) {
      Error(ref.span, absl::StrCat(what, " cannot be applied to metadata"));
      return std::nullopt;
    }
    int h = program_.HeaderIndex(ref.header);
    if (h < 0) {
      Error(ref.span, absl::StrCat("unknown header '", ref.header, "'"));
      return std::nullopt;
    }
    return h;
  }

  // Argument positions of each primitive.
  enum class Slot { kField, kHeader, kValue, kDelta, kFieldOrHeader };

  std::optional<Operand> ResolveArg(const ActionDecl& action, const ArgDecl& arg,
                                    Slot slot, const std::string& where) {
    Operand op;
    if (arg.kind == ArgDecl::Kind::kInt) {
      if (slot != Slot::kValue && slot != Slot::kDelta) {
        Error(arg.span, absl::StrCat(where, " expects a ",
                                     slot == Slot::kHeader ? "header" : "field",
                                     ", found an integer"));
        return std::nullopt;
      }
      if (arg.negative && slot != Slot::kDelta) {
        Error(arg.span, absl::StrCat(where, " does not accept a negative value"));
        return std::nullopt;
      }
      op.kind = Operand::Kind::kConst;
      op.value = arg.magnitude;
      op.negative = arg.negative && arg.magnitude != 0;
      return op;
    }
    const NameRef& ref = arg.ref;
    if (ref.is_field()) {
      if (slot == Slot::kHeader) {
        Error(arg.span, absl::StrCat(where, " expects a header, found field '",
                                     ref.ToString(), "'"));
        return std::nullopt;
      }
      if (slot == Slot::kValue || slot == Slot::kDelta) {
        Error(arg.span, absl::StrCat(where, " expects a parameter or constant, "
                                     "found field '", ref.ToString(), "'"));
        return std::nullopt;
      }
      std::optional<FieldRef> f = ResolveFieldRef(ref);
      if (!f.has_value()) return std::nullopt;
      op.kind = Operand::Kind::kField;
      op.field = *f;
      return op;
    }
    for (size_t i = 0; i < action.params.size(); ++i) {
      if (action.params[i].name == ref.header) {
        if (slot != Slot::kValue && slot != Slot::kDelta) {
          Error(arg.span, absl::StrCat(where, " expects a ",
                                       slot == Slot::kHeader ? "header" : "field",
                                       ", found parameter '", ref.header, "'"));
          return std::nullopt;
        }
        op.kind = Operand::Kind::kParam;
        op.param = static_cast<int>(i);
        op.param_name = ref.header;
        return op;
      }
    }
    int h = program_.HeaderIndex(ref.header);
    if (h < 0) {
      Error(arg.span, absl::StrCat("unknown name '", ref.header, "'"));
      return std::nullopt;
    }
    if (slot != Slot::kHeader && slot != Slot::kFieldOrHeader) {
      Error(arg.span, absl::StrCat(where, " expects a ",
                                   slot == Slot::kField ? "field reference"
                                                        : "parameter or constant",
                                   ", found header '", ref.header, "'"));
      return std::nullopt;
    }
    if (program_.is_metadata(h) && slot == Slot::kHeader) {
      Error(arg.span, absl::StrCat(where, " cannot be applied to metadata"));
      return std::nullopt;
    }
    op.kind = Operand::Kind::kHeader;
    op.header = h;
    op.header_name = ref.header;
    return op;
  }

  void CheckActions() {
    std::set<std::string> names;
    for (const ActionDecl& a : ast_.actions) {
      if (a.name == kFaultToCpu) {
        Error(a.span, absl::StrCat("'", kFaultToCpu,
                                   "' is a library action and cannot be "
                                   "redeclared"));
        continue;
      }
      if (!names.insert(a.name).second) {
        Error(a.span, absl::StrCat("duplicate action '", a.name, "'"));
        continue;
      }
      Action action;
      action.name = a.name;
      std::set<std::string> params;
      for (const NameDecl& p : a.params) {
        if (!params.insert(p.name).second) {
          Error(p.span, absl::StrCat("duplicate parameter '", p.name,
                                     "' in action '", a.name, "'"));
        }
        action.params.push_back(p.name);
      }
      bool ok = true;
      for (const CallDecl& call : a.body) {
        std::optional<PrimitiveCall> resolved = ResolveCall(a, call);
        if (resolved.has_value()) {
          action.body.push_back(std::move(*resolved));
        } else {
          ok = false;
        }
      }
      if (ok) program_.actions.push_back(std::move(action));
    }
  }

  std::optional<PrimitiveCall> ResolveCall(const ActionDecl& a,
                                           const CallDecl& call) {
    std::optional<PrimitiveOp> op = PrimitiveFromName(call.name);
    if (!op.has_value()) {
      Error(call.span, absl::StrCat("unknown primitive action '", call.name,
                                    "'"));
      return std::nullopt;
    }
    std::vector<Slot> slots;
    size_t min_args = 0, max_args = 0;
    switch (*op) {
      case PrimitiveOp::kSetField:
        slots = {Slot::kField, Slot::kValue, Slot::kValue};
        min_args = 2;
        max_args = 3;
        break;
      case PrimitiveOp::kCopyField:
        slots = {Slot::kField, Slot::kField};
        min_args = max_args = 2;
        break;
      case PrimitiveOp::kAddHeader:
      case PrimitiveOp::kRemoveHeader:
        slots = {Slot::kHeader};
        min_args = max_args = 1;
        break;
      case PrimitiveOp::kIncrement:
        slots = {Slot::kField, Slot::kDelta};
        min_args = max_args = 2;
        break;
      case PrimitiveOp::kChecksum:
        slots = {Slot::kField};
        min_args = 2;
        max_args = SIZE_MAX;
        break;
    }
    if (call.args.size() < min_args || call.args.size() > max_args) {
      std::string expected =
          min_args == max_args ? absl::StrCat(min_args)
          : max_args == SIZE_MAX
              ? absl::StrCat("at least ", min_args)
              : absl::StrCat(min_args, " or ", max_args);
      Error(call.span, absl::StrCat(call.name, " takes ", expected,
                                    " arguments, found ", call.args.size()));
      return std::nullopt;
    }
    PrimitiveCall out;
    out.op = *op;
    bool ok = true;
    for (size_t i = 0; i < call.args.size(); ++i) {
      Slot slot = i < slots.size() ? slots[i] : Slot::kFieldOrHeader;
      std::string where = absl::StrCat("argument ", i + 1, " of ", call.name);
      std::optional<Operand> arg = ResolveArg(a, call.args[i], slot, where);
      if (!arg.has_value()) {
        ok = false;
        continue;
      }
      out.args.push_back(std::move(*arg));
    }
    if (!ok) return std::nullopt;
    // Constants must fit the field they are applied to.
    if (*op == PrimitiveOp::kSetField || *op == PrimitiveOp::kIncrement) {
      const FieldRef& target = out.args[0].field;
      for (size_t i = 1; i < out.args.size(); ++i) {
        const Operand& v = out.args[i];
        if (v.kind == Operand::Kind::kConst && v.value > WidthMask(target.width)) {
          Error(call.args[i].span,
                absl::StrFormat("constant 0x%x does not fit %d-bit field %s",
                                v.value, target.width, target.ToString()));
          ok = false;
        }
      }
    }
    if (!ok) return std::nullopt;
    return out;
  }

  void CheckTables() {
    std::set<std::string> names;
    bool uses_library_action = false;
    for (const TableDecl& t : ast_.tables) {
      if (!names.insert(t.name).second) {
        Error(t.span, absl::StrCat("duplicate table '", t.name, "'"));
        continue;
      }
      Table table;
      table.name = t.name;
      table.max_size = t.max_size.value_or(kDefaultMaxSize);
      bool ok = true;
      int lpm_count = 0;
      for (const ReadDecl& r : t.reads) {
        TableRead read;
        read.kind = r.kind;
        if (r.kind == MatchKind::kValid) {
          std::optional<int> h = ResolvePacketHeader(r.ref, "'valid' match");
          if (!h.has_value()) {
            ok = false;
            continue;
          }
          read.header = *h;
          read.header_name = r.ref.header;
        } else {
          if (!r.ref.is_field()) {
            Error(r.span, absl::StrCat("'", MatchKindName(r.kind),
                                       "' match requires a field, found '",
                                       r.ref.header, "'"));
            ok = false;
            continue;
          }
          std::optional<FieldRef> f = ResolveFieldRef(r.ref);
          if (!f.has_value()) {
            ok = false;
            continue;
          }
          read.field = *f;
          if (r.kind == MatchKind::kLpm && ++lpm_count > 1) {
            Error(r.span, absl::StrCat("table '", t.name,
                                       "' has more than one lpm field"));
            ok = false;
          }
        }
        table.reads.push_back(std::move(read));
      }
      std::set<std::string> listed;
      for (const NameDecl& a : t.actions) {
        if (!listed.insert(a.name).second) {
          Error(a.span, absl::StrCat("action '", a.name, "' listed twice in "
                                     "table '", t.name, "'"));
          ok = false;
          continue;
        }
        if (a.name == kFaultToCpu) {
          uses_library_action = true;
        } else if (!DeclaresAction(a.name)) {
          Error(a.span, absl::StrCat("unknown action '", a.name, "'"));
          ok = false;
          continue;
        }
        table.actions.push_back(a.name);
      }
      if (ok) program_.tables.push_back(std::move(table));
    }
    if (uses_library_action) {
      Action builtin;
      builtin.name = std::string(kFaultToCpu);
      builtin.builtin = true;
      program_.actions.push_back(std::move(builtin));
    }
  }

  bool DeclaresAction(const std::string& name) const {
    for (const ActionDecl& a : ast_.actions) {
      if (a.name == name) return true;
    }
    return false;
  }

  bool DeclaresState(const std::string& name) const {
    for (const ParserStateDecl& p : ast_.parsers) {
      if (p.name == name) return true;
    }
    return false;
  }

  std::optional<StateRef> ResolveTarget(const Target& t) {
    if (t.stop) return StateRef{true, ""};
    if (!DeclaresState(t.state)) {
      Error(t.span, absl::StrCat("undeclared parser state '", t.state, "'"));
      return std::nullopt;
    }
    return StateRef{false, t.state};
  }

  void CheckParserStates() {
    std::set<std::string> names;
    for (const ParserStateDecl& p : ast_.parsers) {
      if (!names.insert(p.name).second) {
        Error(p.span, absl::StrCat("duplicate parser state '", p.name, "'"));
        continue;
      }
      ParserState state;
      state.name = p.name;
      bool ok = true;
      if (p.name == kStartState) {
        if (p.kind == ParserStateDecl::Kind::kSwitch) {
          Error(p.span, "the start state extracts no header and cannot switch");
          continue;
        }
      } else {
        int h = program_.HeaderIndex(p.name);
        if (h < 0 || program_.is_metadata(h)) {
          Error(p.span, absl::StrCat("parser state '", p.name,
                                     "' does not name a declared header"));
          continue;
        }
        state.header = h;
      }
      if (p.kind == ParserStateDecl::Kind::kTransition) {
        std::optional<StateRef> next = ResolveTarget(p.next);
        if (!next.has_value()) continue;
        state.next = *next;
      } else {
        state.is_switch = true;
        const HeaderLayout& hl = program_.layout(state.header);
        state.select_field = hl.FieldIndex(p.select_field);
        if (state.select_field < 0) {
          Error(p.span, absl::StrCat("header '", hl.name, "' has no field '",
                                     p.select_field, "'"));
          continue;
        }
        uint32_t width = hl.fields[state.select_field].width;
        for (const SelectCase& c : p.cases) {
          if (c.value > WidthMask(width)) {
            Error(c.span, absl::StrFormat("case value 0x%x does not fit %d-bit "
                                          "field %s.%s", c.value, width,
                                          hl.name, p.select_field));
            ok = false;
          }
          std::optional<StateRef> next = ResolveTarget(c.next);
          if (!next.has_value()) {
            ok = false;
            continue;
          }
          state.cases.push_back(ParserCase{c.value, *next});
        }
        if (p.default_next.has_value()) {
          std::optional<StateRef> next = ResolveTarget(*p.default_next);
          if (!next.has_value()) {
            ok = false;
          } else {
            state.default_next = *next;
          }
        }
      }
      if (ok) program_.parser_states.push_back(std::move(state));
    }
  }

  std::optional<Condition> ResolveCondition(const PredicateExpr& p,
                                            const std::set<std::string>& applied) {
    Condition c;
    switch (p.kind) {
      case PredicateExpr::Kind::kDefined: {
        c.kind = Condition::Kind::kDefined;
        std::optional<FieldRef> f = ResolveFieldRef(p.ref);
        if (!f.has_value()) return std::nullopt;
        c.field = *f;
        return c;
      }
      case PredicateExpr::Kind::kValid: {
        c.kind = Condition::Kind::kValid;
        std::optional<int> h = ResolvePacketHeader(p.ref, "valid()");
        if (!h.has_value()) return std::nullopt;
        c.header = *h;
        c.name = p.ref.header;
        return c;
      }
      case PredicateExpr::Kind::kMiss: {
        c.kind = Condition::Kind::kMiss;
        if (p.ref.is_field()) {
          Error(p.span, "miss() expects a table name");
          return std::nullopt;
        }
        bool declared = std::any_of(
            ast_.tables.begin(), ast_.tables.end(),
            [&](const TableDecl& t) { return t.name == p.ref.header; });
        if (!declared) {
          Error(p.span, absl::StrCat("unknown table '", p.ref.header, "'"));
          return std::nullopt;
        }
        if (!applied.count(p.ref.header)) {
          Error(p.span, absl::StrCat("miss(", p.ref.header, ") refers to a "
                                     "table this control never applies"));
          return std::nullopt;
        }
        c.name = p.ref.header;
        return c;
      }
      case PredicateExpr::Kind::kEquals: {
        c.kind = Condition::Kind::kEquals;
        std::optional<FieldRef> f = ResolveFieldRef(p.ref);
        if (!f.has_value()) return std::nullopt;
        if (p.value > WidthMask(f->width)) {
          Error(p.span, absl::StrFormat("constant 0x%x does not fit %d-bit "
                                        "field %s", p.value, f->width,
                                        f->ToString()));
          return std::nullopt;
        }
        c.field = *f;
        c.value = p.value;
        return c;
      }
      case PredicateExpr::Kind::kNot:
      case PredicateExpr::Kind::kAnd:
      case PredicateExpr::Kind::kOr: {
        c.kind = p.kind == PredicateExpr::Kind::kNot   ? Condition::Kind::kNot
                 : p.kind == PredicateExpr::Kind::kAnd ? Condition::Kind::kAnd
                                                       : Condition::Kind::kOr;
        bool ok = true;
        for (const PredicateExpr& operand : p.operands) {
          std::optional<Condition> r = ResolveCondition(operand, applied);
          if (!r.has_value()) {
            ok = false;
            continue;
          }
          c.operands.push_back(std::move(*r));
        }
        if (!ok) return std::nullopt;
        return c;
      }
    }
    return std::nullopt;
  }

  static void CollectApplied(const std::vector<Statement>& body,
                             std::set<std::string>* out) {
    for (const Statement& s : body) {
      if (s.kind == Statement::Kind::kApply) {
        out->insert(s.table.name);
      } else {
        CollectApplied(s.then_body, out);
        CollectApplied(s.else_body, out);
      }
    }
  }

  std::vector<ControlStatement> ResolveBody(
      const std::vector<Statement>& body, const std::set<std::string>& applied) {
    std::vector<ControlStatement> out;
    for (const Statement& s : body) {
      ControlStatement cs;
      if (s.kind == Statement::Kind::kApply) {
        cs.kind = ControlStatement::Kind::kApply;
        cs.table = s.table.name;
        bool declared = std::any_of(
            ast_.tables.begin(), ast_.tables.end(),
            [&](const TableDecl& t) { return t.name == s.table.name; });
        if (!declared) {
          Error(s.table.span, absl::StrCat("unknown table '", s.table.name, "'"));
          continue;
        }
      } else {
        cs.kind = ControlStatement::Kind::kIf;
        std::optional<Condition> c = ResolveCondition(s.condition, applied);
        if (c.has_value()) cs.condition = std::move(*c);
        cs.then_body = ResolveBody(s.then_body, applied);
        cs.else_body = ResolveBody(s.else_body, applied);
      }
      out.push_back(std::move(cs));
    }
    return out;
  }

  void CheckControls() {
    std::set<std::string> names;
    const ControlDecl* entry = nullptr;
    for (const ControlDecl& c : ast_.controls) {
      if (!names.insert(c.name).second) {
        Error(c.span, absl::StrCat("duplicate control '", c.name, "'"));
        continue;
      }
      if (c.name == "main") entry = &c;
    }
    if (entry == nullptr && ast_.controls.size() == 1) {
      entry = &ast_.controls[0];
    }
    if (entry == nullptr && ast_.controls.size() > 1) {
      Error(ast_.controls[1].span,
            "multiple controls are declared but none is named 'main'");
    }
    for (const ControlDecl& c : ast_.controls) {
      std::set<std::string> applied;
      CollectApplied(c.body, &applied);
      std::vector<ControlStatement> body = ResolveBody(c.body, applied);
      if (&c == entry) {
        program_.entry_control = c.name;
        program_.control = std::move(body);
      }
    }
  }

  const Ast& ast_;
  CheckedProgram program_;
  std::vector<Diagnostic> errors_;
};

}  // namespace

absl::StatusOr<CheckedProgram> Check(const Ast& ast) {
  return Checker(ast).Run();
}

absl::StatusOr<std::vector<ParamSignature>> ActionParamSignature(
    const CheckedProgram& program, absl::string_view action_name) {
  const Action* action = program.FindAction(action_name);
  if (action == nullptr) {
    return MakeError(absl::StatusCode::kNotFound, "UnknownAction",
                     absl::StrCat("no action named '", action_name, "'"));
  }
  std::vector<ParamSignature> out;
  for (const std::string& p : action->params) out.push_back({p, 0});
  for (const PrimitiveCall& call : action->body) {
    if (call.op != PrimitiveOp::kSetField && call.op != PrimitiveOp::kIncrement) {
      continue;
    }
    for (size_t i = 1; i < call.args.size(); ++i) {
      const Operand& arg = call.args[i];
      if (arg.kind != Operand::Kind::kParam) continue;
      uint32_t& w = out[arg.param].width;
      w = std::max(w, call.args[0].field.width);
    }
  }
  for (ParamSignature& p : out) {
    if (p.width == 0) p.width = 64;
  }
  return out;
}

std::string ActionHazard::ToString() const {
  switch (kind) {
    case Kind::kReadThenWrite:
      return absl::StrFormat(
          "action '%s': primitive %d reads %s, which primitive %d writes; "
          "reads see the values from before the action",
          action, first + 1, location, second + 1);
    case Kind::kWriteThenRead:
      return absl::StrFormat(
          "action '%s': primitive %d writes %s, which primitive %d reads; "
          "reads see the values from before the action",
          action, first + 1, location, second + 1);
    case Kind::kWriteThenWrite:
      break;
  }
  return absl::StrFormat(
      "action '%s': primitives %d and %d both write %s; the later write wins",
      action, first + 1, second + 1, location);
}

std::vector<ActionHazard> ValidateActionParallelism(
    const CheckedProgram& program) {
  std::vector<ActionHazard> hazards;
  for (const Action& action : program.actions) {
    std::vector<PrimitiveEffects> effects;
    for (const PrimitiveCall& call : action.body) {
      effects.push_back(EffectsOf(program, call));
    }
    auto overlaps = [](const std::vector<Location>& a,
                       const std::vector<Location>& b) {
      std::vector<Location> out;
      for (const Location& x : a) {
        if (std::find(b.begin(), b.end(), x) != b.end() &&
            std::find(out.begin(), out.end(), x) == out.end()) {
          out.push_back(x);
        }
      }
      return out;
    };
    for (size_t i = 0; i < effects.size(); ++i) {
      for (size_t j = i + 1; j < effects.size(); ++j) {
        auto report = [&](ActionHazard::Kind kind,
                          const std::vector<Location>& locs) {
          for (const Location& loc : locs) {
            hazards.push_back(ActionHazard{action.name, static_cast<int>(i),
                                           static_cast<int>(j), kind,
                                           LocationName(program, loc)});
          }
        };
        report(ActionHazard::Kind::kReadThenWrite,
               overlaps(effects[i].value_reads, effects[j].writes));
        report(ActionHazard::Kind::kWriteThenRead,
               overlaps(effects[i].writes, effects[j].value_reads));
        report(ActionHazard::Kind::kWriteThenWrite,
               overlaps(effects[i].writes, effects[j].writes));
      }
    }
  }
  return hazards;
}

}  // namespace p4mc
