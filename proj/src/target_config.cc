// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

#include "p4mc/target_config.h"

#include <set>
#include <string>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "hex.h"
#include "json.hpp"
#include "p4mc/frontend.h"
#include "p4mc/semantics.h"
#include "p4mc/status.h"
#include "status_macros.h"

namespace p4mc {

namespace {

using Json = nlohmann::ordered_json;

// ---- Serialization ---------------------------------------------------------

Json LayoutJson(const HeaderLayout& h) {
  Json fields = Json::array();
  for (const FieldLayout& f : h.fields) {
    fields.push_back({{"name", f.name}, {"offset", f.offset}, {"width", f.width}});
  }
  return {{"name", h.name}, {"width", h.width}, {"fields", std::move(fields)}};
}

Json OperandJson(const Operand& op) {
  switch (op.kind) {
    case Operand::Kind::kField: return {{"field", op.field.ToString()}};
    case Operand::Kind::kHeader: return {{"header", op.header_name}};
    case Operand::Kind::kParam: return {{"param", op.param_name}};
    case Operand::Kind::kConst:
      return {{"const", (op.negative ? "-" : "") + HexString(op.value)}};
  }
  return nullptr;
}

Json ConditionJson(const Condition& c) {
  switch (c.kind) {
    case Condition::Kind::kDefined: return {{"defined", c.field.ToString()}};
    case Condition::Kind::kValid: return {{"valid", c.name}};
    case Condition::Kind::kMiss: return {{"miss", c.name}};
    case Condition::Kind::kEquals:
      return {{"equals", c.field.ToString()}, {"value", HexString(c.value)}};
    case Condition::Kind::kNot: return {{"not", ConditionJson(c.operands[0])}};
    case Condition::Kind::kAnd:
    case Condition::Kind::kOr: {
      Json ops = Json::array();
      for (const Condition& o : c.operands) ops.push_back(ConditionJson(o));
      return {{c.kind == Condition::Kind::kAnd ? "and" : "or", std::move(ops)}};
    }
  }
  return nullptr;
}

Json StatementsJson(const std::vector<ControlStatement>& body) {
  Json out = Json::array();
  for (const ControlStatement& s : body) {
    if (s.kind == ControlStatement::Kind::kApply) {
      out.push_back({{"apply", s.table}});
    } else {
      out.push_back({{"if", ConditionJson(s.condition)},
                     {"then", StatementsJson(s.then_body)},
                     {"else", StatementsJson(s.else_body)}});
    }
  }
  return out;
}

// ---- Deserialization -------------------------------------------------------

struct ConfigError {
  std::string kind;  // version | schema | reference
  std::string path;
  std::string message;
};

[[noreturn]] void Fail(std::string kind, std::string path, std::string message) {
  throw ConfigError{std::move(kind), std::move(path), std::move(message)};
}

class Decoder {
 public:
  TargetConfig Run(const Json& root) {
    Expect(root.is_object(), "", "expected a JSON object");
    const Json& version = Member(root, "version", "");
    Expect(version.is_string(), "/version", "expected a string");
    if (version.get<std::string>() != kConfigVersion) {
      Fail("version", "/version",
           absl::StrCat("unsupported format version '",
                        version.get<std::string>(), "', expected '",
                        kConfigVersion, "'"));
    }
    config_.version = version.get<std::string>();
    CheckedProgram& p = config_.program;

    const Json& headers = Array(Member(root, "headers", ""), "/headers");
    for (size_t i = 0; i < headers.size(); ++i) {
      std::string path = absl::StrCat("/headers/", i);
      HeaderLayout layout = DecodeLayout(headers[i], path);
      if (layout.name == kMetadataName || p.HeaderIndex(layout.name) >= 0) {
        Fail("schema", path + "/name",
             absl::StrCat("duplicate header '", layout.name, "'"));
      }
      p.headers.push_back(std::move(layout));
    }
    p.metadata = DecodeLayout(Member(root, "metadata", ""), "/metadata");
    p.metadata.name = std::string(kMetadataName);
    CheckStandardMetadata(p.metadata);

    DecodeParser(Member(root, "parser", ""));

    const Json& order = Array(Member(root, "deparse_order", ""), "/deparse_order");
    for (size_t i = 0; i < order.size(); ++i) {
      std::string path = absl::StrCat("/deparse_order/", i);
      std::string name = String(order[i], path);
      int h = p.HeaderIndex(name);
      if (h < 0 || p.is_metadata(h)) {
        Fail("reference", path, absl::StrCat("undeclared header '", name, "'"));
      }
      config_.deparse_order.push_back(name);
    }

    const Json& actions = Array(Member(root, "actions", ""), "/actions");
    for (size_t i = 0; i < actions.size(); ++i) {
      p.actions.push_back(DecodeAction(actions[i], absl::StrCat("/actions/", i)));
    }
    const Json& tables = Array(Member(root, "tables", ""), "/tables");
    for (size_t i = 0; i < tables.size(); ++i) {
      p.tables.push_back(DecodeTable(tables[i], absl::StrCat("/tables/", i)));
    }

    const Json& control = Object(Member(root, "control", ""), "/control");
    p.entry_control = String(Member(control, "name", "/control"), "/control/name");
    p.control = DecodeStatements(Member(control, "body", "/control"),
                                 "/control/body");

    const Json& pipeline = Object(Member(root, "pipeline", ""), "/pipeline");
    config_.stage_count = static_cast<int>(
        Int(Member(pipeline, "stage_count", "/pipeline"), "/pipeline/stage_count"));
    const Json& nodes = Array(Member(pipeline, "nodes", "/pipeline"),
                              "/pipeline/nodes");
    for (size_t i = 0; i < nodes.size(); ++i) {
      std::string path = absl::StrCat("/pipeline/nodes/", i);
      const Json& n = Object(nodes[i], path);
      PipelineNode node;
      node.name = String(Member(n, "name", path), path + "/name");
      node.table = String(Member(n, "table", path), path + "/table");
      node.stage = static_cast<int>(Int(Member(n, "stage", path), path + "/stage"));
      if (p.FindTable(node.table) == nullptr) {
        Fail("reference", path + "/table",
             absl::StrCat("undeclared table '", node.table, "'"));
      }
      if (node.stage < 0 || node.stage >= config_.stage_count) {
        Fail("schema", path + "/stage", "stage outside the pipeline");
      }
      config_.pipeline.push_back(std::move(node));
    }
    return std::move(config_);
  }

 private:
  static void Expect(bool ok, const std::string& path, const std::string& what) {
    if (!ok) Fail("schema", path.empty() ? "/" : path, what);
  }
  static const Json& Member(const Json& obj, const char* key,
                            const std::string& path) {
    Expect(obj.is_object(), path, "expected a JSON object");
    auto it = obj.find(key);
    if (it == obj.end()) Fail("schema", absl::StrCat(path, "/", key), "missing");
    return *it;
  }
  static const Json& Array(const Json& j, const std::string& path) {
    Expect(j.is_array(), path, "expected an array");
    return j;
  }
  static const Json& Object(const Json& j, const std::string& path) {
    Expect(j.is_object(), path, "expected an object");
    return j;
  }
  static std::string String(const Json& j, const std::string& path) {
    Expect(j.is_string(), path, "expected a string");
    return j.get<std::string>();
  }
  static int64_t Int(const Json& j, const std::string& path) {
    Expect(j.is_number_integer(), path, "expected an integer");
    return j.get<int64_t>();
  }
  static uint64_t Hex(const Json& j, const std::string& path) {
    std::optional<uint64_t> v = ParseUint(String(j, path));
    Expect(v.has_value(), path, "expected a hex string");
    return *v;
  }

  HeaderLayout DecodeLayout(const Json& j, const std::string& path) {
    Object(j, path);
    HeaderLayout out;
    if (j.contains("name")) out.name = String(j["name"], path + "/name");
    const Json& fields = Array(Member(j, "fields", path), path + "/fields");
    for (size_t i = 0; i < fields.size(); ++i) {
      std::string fp = absl::StrCat(path, "/fields/", i);
      FieldLayout f;
      f.name = String(Member(fields[i], "name", fp), fp + "/name");
      int64_t width = Int(Member(fields[i], "width", fp), fp + "/width");
      int64_t offset = Int(Member(fields[i], "offset", fp), fp + "/offset");
      Expect(width >= 1 && width <= kMaxFieldWidth, fp + "/width",
             "field width out of range");
      Expect(offset == out.width, fp + "/offset",
             "offset disagrees with preceding widths");
      Expect(out.FieldIndex(f.name) < 0, fp + "/name", "duplicate field");
      f.width = static_cast<uint32_t>(width);
      f.offset = out.width;
      out.width += f.width;
      out.fields.push_back(std::move(f));
    }
    if (j.contains("width")) {
      Expect(Int(j["width"], path + "/width") == out.width, path + "/width",
             "width disagrees with field widths");
    }
    return out;
  }

  static void CheckStandardMetadata(const HeaderLayout& md) {
    const std::pair<absl::string_view, uint32_t> standard[] = {
        {kIngressPort, kIngressPortWidth},
        {kEgressSpec, kEgressSpecWidth},
        {kIngressError, kIngressErrorWidth}};
    for (size_t i = 0; i < 3; ++i) {
      std::string path = absl::StrCat("/metadata/fields/", i);
      Expect(i < md.fields.size() && md.fields[i].name == standard[i].first &&
                 md.fields[i].width == standard[i].second,
             path, absl::StrCat("expected standard field ", standard[i].first));
    }
  }

  FieldRef DecodeFieldRef(const Json& j, const std::string& path) {
    std::string text = String(j, path);
    size_t dot = text.find('.');
    Expect(dot != std::string::npos, path, "expected 'header.field'");
    std::optional<FieldRef> f = config_.program.ResolveField(
        text.substr(0, dot), text.substr(dot + 1));
    if (!f.has_value()) {
      Fail("reference", path, absl::StrCat("undeclared field '", text, "'"));
    }
    return *f;
  }

  int DecodeHeader(const Json& j, const std::string& path, bool allow_metadata) {
    std::string name = String(j, path);
    int h = config_.program.HeaderIndex(name);
    if (h < 0 || (!allow_metadata && config_.program.is_metadata(h))) {
      Fail("reference", path, absl::StrCat("undeclared header '", name, "'"));
    }
    return h;
  }

  StateRef DecodeNext(const Json& j, const std::string& path,
                      const std::set<std::string>& states) {
    std::string name = String(j, path);
    if (name == "stop") return StateRef{true, ""};
    if (!states.count(name)) {
      Fail("reference", path, absl::StrCat("undeclared parser state '", name, "'"));
    }
    return StateRef{false, name};
  }

  void DecodeParser(const Json& j) {
    Object(j, "/parser");
    ParserProgram& pp = config_.parser;
    pp.start = String(Member(j, "start", "/parser"), "/parser/start");
    const Json& states = Array(Member(j, "states", "/parser"), "/parser/states");
    std::set<std::string> names;
    for (size_t i = 0; i < states.size(); ++i) {
      std::string path = absl::StrCat("/parser/states/", i);
      const Json& s = Object(states[i], path);
      StatePlan plan;
      plan.state = String(Member(s, "name", path), path + "/name");
      Expect(names.insert(plan.state).second, path + "/name", "duplicate state");
      const Json& header = Member(s, "header", path);
      if (!header.is_null()) {
        plan.header_index = DecodeHeader(header, path + "/header", false);
        plan.header = header.get<std::string>();
        plan.width = config_.program.headers[plan.header_index].width;
      }
      const Json& select = Member(s, "select", path);
      if (!select.is_null()) {
        std::string sp = path + "/select";
        Object(select, sp);
        int64_t offset = Int(Member(select, "offset", sp), sp + "/offset");
        int64_t width = Int(Member(select, "width", sp), sp + "/width");
        Expect(plan.header_index >= 0 && offset >= 0 && width >= 1 &&
                   width <= kMaxFieldWidth && offset + width <= plan.width,
               sp, "select slice lies outside the extracted header");
        plan.select = SelectSlice{static_cast<uint32_t>(offset),
                                  static_cast<uint32_t>(width)};
      }
      pp.plan.push_back(std::move(plan));
    }
    if (!names.count(pp.start)) {
      Fail("reference", "/parser/start",
           absl::StrCat("undeclared parser state '", pp.start, "'"));
    }
    const Json& rows = Array(Member(j, "rows", "/parser"), "/parser/rows");
    size_t plan_index = 0;
    for (size_t i = 0; i < rows.size(); ++i) {
      std::string path = absl::StrCat("/parser/rows/", i);
      const Json& r = Object(rows[i], path);
      StateTableEntry e;
      e.state = String(Member(r, "state", path), path + "/state");
      if (!names.count(e.state)) {
        Fail("reference", path + "/state",
             absl::StrCat("undeclared parser state '", e.state, "'"));
      }
      e.value = Hex(Member(r, "value", path), path + "/value");
      e.mask = Hex(Member(r, "mask", path), path + "/mask");
      e.next = DecodeNext(Member(r, "next", path), path + "/next", names);
      // Rows are grouped by state, in state order.
      while (plan_index < pp.plan.size() && pp.plan[plan_index].state != e.state) {
        ++plan_index;
      }
      Expect(plan_index < pp.plan.size(), path + "/state",
             "rows must be grouped by state in state order");
      StatePlan& plan = pp.plan[plan_index];
      if (plan.row_count == 0) plan.first_row = static_cast<int>(i);
      e.priority = plan.row_count++;
      pp.entries.push_back(std::move(e));
    }
  }

  Operand DecodeOperand(const Json& j, const std::string& path,
                        const Action& action) {
    Object(j, path);
    Operand op;
    if (j.contains("field")) {
      op.kind = Operand::Kind::kField;
      op.field = DecodeFieldRef(j["field"], path + "/field");
    } else if (j.contains("header")) {
      op.kind = Operand::Kind::kHeader;
      op.header = DecodeHeader(j["header"], path + "/header", true);
      op.header_name = j["header"].get<std::string>();
    } else if (j.contains("param")) {
      op.kind = Operand::Kind::kParam;
      op.param_name = String(j["param"], path + "/param");
      for (size_t i = 0; i < action.params.size(); ++i) {
        if (action.params[i] == op.param_name) op.param = static_cast<int>(i);
      }
      if (op.param < 0) {
        Fail("reference", path + "/param",
             absl::StrCat("undeclared parameter '", op.param_name, "'"));
      }
    } else if (j.contains("const")) {
      op.kind = Operand::Kind::kConst;
      std::string text = String(j["const"], path + "/const");
      if (!text.empty() && text[0] == '-') {
        op.negative = true;
        text.erase(0, 1);
      }
      std::optional<uint64_t> v = ParseUint(text);
      Expect(v.has_value(), path + "/const", "expected a hex string");
      op.value = *v;
    } else {
      Fail("schema", path, "expected one of field, header, param, const");
    }
    return op;
  }

  // Operand kinds each primitive expects; the engine relies on these shapes.
  static void CheckShape(const PrimitiveCall& call, const std::string& path) {
    using K = Operand::Kind;
    auto is = [&](size_t i, std::initializer_list<K> kinds) {
      if (i >= call.args.size()) return false;
      for (K k : kinds) {
        if (call.args[i].kind == k) return true;
      }
      return false;
    };
    const size_t n = call.args.size();
    bool ok = false;
    switch (call.op) {
      case PrimitiveOp::kSetField:
        ok = (n == 2 || n == 3) && is(0, {K::kField}) &&
             is(1, {K::kParam, K::kConst}) && (n == 2 || is(2, {K::kParam, K::kConst}));
        break;
      case PrimitiveOp::kCopyField:
        ok = n == 2 && is(0, {K::kField}) && is(1, {K::kField});
        break;
      case PrimitiveOp::kAddHeader:
      case PrimitiveOp::kRemoveHeader:
        ok = n == 1 && is(0, {K::kHeader}) && call.args[0].header_name != kMetadataName;
        break;
      case PrimitiveOp::kIncrement:
        ok = n == 2 && is(0, {K::kField}) && is(1, {K::kParam, K::kConst});
        break;
      case PrimitiveOp::kChecksum:
        ok = n >= 2 && is(0, {K::kField});
        for (size_t i = 1; i < n; ++i) ok = ok && is(i, {K::kField, K::kHeader});
        break;
    }
    Expect(ok, path + "/args", absl::StrCat("malformed arguments for ",
                                            PrimitiveName(call.op)));
  }

  Action DecodeAction(const Json& j, const std::string& path) {
    Object(j, path);
    Action action;
    action.name = String(Member(j, "name", path), path + "/name");
    Expect(config_.program.FindAction(action.name) == nullptr, path + "/name",
           "duplicate action");
    if (j.contains("builtin")) {
      Expect(j["builtin"].is_boolean(), path + "/builtin", "expected a boolean");
      action.builtin = j["builtin"].get<bool>();
    }
    const Json& params = Array(Member(j, "params", path), path + "/params");
    for (size_t i = 0; i < params.size(); ++i) {
      std::string pp = absl::StrCat(path, "/params/", i);
      action.params.push_back(String(Member(params[i], "name", pp), pp + "/name"));
      Int(Member(params[i], "width", pp), pp + "/width");
    }
    const Json& body = Array(Member(j, "body", path), path + "/body");
    for (size_t i = 0; i < body.size(); ++i) {
      std::string cp = absl::StrCat(path, "/body/", i);
      Object(body[i], cp);
      PrimitiveCall call;
      std::string op = String(Member(body[i], "op", cp), cp + "/op");
      std::optional<PrimitiveOp> prim = PrimitiveFromName(op);
      if (!prim.has_value()) {
        Fail("schema", cp + "/op", absl::StrCat("unknown primitive '", op, "'"));
      }
      call.op = *prim;
      const Json& args = Array(Member(body[i], "args", cp), cp + "/args");
      for (size_t a = 0; a < args.size(); ++a) {
        call.args.push_back(
            DecodeOperand(args[a], absl::StrCat(cp, "/args/", a), action));
      }
      CheckShape(call, cp);
      action.body.push_back(std::move(call));
    }
    Expect(!action.builtin || action.name == kFaultToCpu, path + "/builtin",
           absl::StrCat("unknown library action '", action.name, "'"));
    return action;
  }

  Table DecodeTable(const Json& j, const std::string& path) {
    Object(j, path);
    Table table;
    table.name = String(Member(j, "name", path), path + "/name");
    Expect(config_.program.FindTable(table.name) == nullptr, path + "/name",
           "duplicate table");
    const Json& reads = Array(Member(j, "reads", path), path + "/reads");
    for (size_t i = 0; i < reads.size(); ++i) {
      std::string rp = absl::StrCat(path, "/reads/", i);
      const Json& r = Object(reads[i], rp);
      std::string kind = String(Member(r, "kind", rp), rp + "/kind");
      TableRead read;
      if (kind == "valid") {
        read.kind = MatchKind::kValid;
        read.header = DecodeHeader(Member(r, "header", rp), rp + "/header", false);
        read.header_name = r["header"].get<std::string>();
      } else {
        if (kind == "exact") {
          read.kind = MatchKind::kExact;
        } else if (kind == "ternary") {
          read.kind = MatchKind::kTernary;
        } else if (kind == "lpm") {
          read.kind = MatchKind::kLpm;
        } else {
          Fail("schema", rp + "/kind", absl::StrCat("unknown match kind '", kind, "'"));
        }
        read.field = DecodeFieldRef(Member(r, "field", rp), rp + "/field");
      }
      table.reads.push_back(std::move(read));
    }
    const Json& actions = Array(Member(j, "actions", path), path + "/actions");
    Expect(!actions.empty(), path + "/actions", "a table needs at least one action");
    for (size_t i = 0; i < actions.size(); ++i) {
      std::string ap = absl::StrCat(path, "/actions/", i);
      std::string name = String(actions[i], ap);
      if (config_.program.FindAction(name) == nullptr) {
        Fail("reference", ap, absl::StrCat("undeclared action '", name, "'"));
      }
      table.actions.push_back(name);
    }
    int64_t max_size = Int(Member(j, "max_size", path), path + "/max_size");
    Expect(max_size >= 1, path + "/max_size", "max_size must be at least 1");
    table.max_size = static_cast<uint64_t>(max_size);
    Int(Member(j, "stage", path), path + "/stage");
    return table;
  }

  Condition DecodeCondition(const Json& j, const std::string& path) {
    Object(j, path);
    Expect(j.size() >= 1, path, "empty condition");
    const std::string key = j.begin().key();
    Condition c;
    if (key == "defined") {
      c.kind = Condition::Kind::kDefined;
      c.field = DecodeFieldRef(j["defined"], path + "/defined");
    } else if (key == "valid") {
      c.kind = Condition::Kind::kValid;
      c.header = DecodeHeader(j["valid"], path + "/valid", false);
      c.name = j["valid"].get<std::string>();
    } else if (key == "miss") {
      c.kind = Condition::Kind::kMiss;
      c.name = String(j["miss"], path + "/miss");
      if (config_.program.FindTable(c.name) == nullptr) {
        Fail("reference", path + "/miss",
             absl::StrCat("undeclared table '", c.name, "'"));
      }
    } else if (key == "equals") {
      c.kind = Condition::Kind::kEquals;
      c.field = DecodeFieldRef(j["equals"], path + "/equals");
      c.value = Hex(Member(j, "value", path), path + "/value");
    } else if (key == "not") {
      c.kind = Condition::Kind::kNot;
      c.operands.push_back(DecodeCondition(j["not"], path + "/not"));
    } else if (key == "and" || key == "or") {
      c.kind = key == "and" ? Condition::Kind::kAnd : Condition::Kind::kOr;
      const Json& ops = Array(j[key], path + "/" + key);
      Expect(ops.size() == 2, path + "/" + key, "expected two operands");
      for (size_t i = 0; i < ops.size(); ++i) {
        c.operands.push_back(DecodeCondition(ops[i], absl::StrCat(path, "/", key, "/", i)));
      }
    } else {
      Fail("schema", path, absl::StrCat("unknown condition '", key, "'"));
    }
    return c;
  }

  std::vector<ControlStatement> DecodeStatements(const Json& j,
                                                 const std::string& path) {
    Array(j, path);
    std::vector<ControlStatement> out;
    for (size_t i = 0; i < j.size(); ++i) {
      std::string sp = absl::StrCat(path, "/", i);
      const Json& s = Object(j[i], sp);
      ControlStatement cs;
      if (s.contains("apply")) {
        cs.kind = ControlStatement::Kind::kApply;
        cs.table = String(s["apply"], sp + "/apply");
        if (config_.program.FindTable(cs.table) == nullptr) {
          Fail("reference", sp + "/apply",
               absl::StrCat("undeclared table '", cs.table, "'"));
        }
      } else if (s.contains("if")) {
        cs.kind = ControlStatement::Kind::kIf;
        cs.condition = DecodeCondition(s["if"], sp + "/if");
        cs.then_body = DecodeStatements(Member(s, "then", sp), sp + "/then");
        cs.else_body = DecodeStatements(Member(s, "else", sp), sp + "/else");
      } else {
        Fail("schema", sp, "expected 'apply' or 'if'");
      }
      out.push_back(std::move(cs));
    }
    return out;
  }

  TargetConfig config_;
};

absl::Status Inconsistent(std::string message) {
  return MakeError(absl::StatusCode::kInternal, "InternalInconsistency", message);
}

}  // namespace

int TargetConfig::TableStage(absl::string_view table) const {
  for (const PipelineNode& n : pipeline) {
    if (n.table == table) return n.stage;
  }
  return -1;
}

absl::StatusOr<TargetConfig> Emit(const CheckedProgram& program,
                                  const ParserProgram& parser, const Tdg& tdg,
                                  const StageAssignment& stages) {
  if (stages.stage.size() != tdg.nodes.size()) {
    return Inconsistent("stage assignment does not cover the dependency graph");
  }
  for (const StatePlan& plan : parser.plan) {
    const ParserState* state = program.FindState(plan.state);
    if (state == nullptr || state->header != plan.header_index) {
      return Inconsistent(absl::StrCat("parser state '", plan.state,
                                       "' is not declared by the program"));
    }
  }
  TargetConfig config;
  config.parser = parser;
  config.program = program;
  config.program.parser_states.clear();
  config.program.tables.clear();
  for (size_t i = 0; i < tdg.nodes.size(); ++i) {
    const TdgNode& node = tdg.nodes[i];
    const Table* table = program.FindTable(node.table);
    if (table == nullptr) {
      return Inconsistent(absl::StrCat("dependency graph names unknown table '",
                                       node.table, "'"));
    }
    if (config.program.FindTable(node.table) == nullptr) {
      config.program.tables.push_back(*table);
    }
    config.pipeline.push_back({node.name, node.table, stages.stage[i]});
  }
  config.stage_count = stages.depth;
  for (int h : DeparseOrder(program, parser)) {
    config.deparse_order.push_back(program.headers[h].name);
  }
  return config;
}

std::string Serialize(const TargetConfig& config) {
  const CheckedProgram& p = config.program;
  Json root;
  root["version"] = config.version;
  Json headers = Json::array();
  for (const HeaderLayout& h : p.headers) headers.push_back(LayoutJson(h));
  root["headers"] = std::move(headers);
  Json metadata = LayoutJson(p.metadata);
  metadata.erase("name");
  root["metadata"] = std::move(metadata);

  Json states = Json::array();
  for (const StatePlan& plan : config.parser.plan) {
    Json s;
    s["name"] = plan.state;
    s["header"] = plan.header_index >= 0 ? Json(plan.header) : Json(nullptr);
    s["select"] = plan.select.has_value()
                      ? Json{{"offset", plan.select->offset},
                             {"width", plan.select->width}}
                      : Json(nullptr);
    states.push_back(std::move(s));
  }
  Json rows = Json::array();
  for (const StateTableEntry& e : config.parser.entries) {
    rows.push_back({{"state", e.state},
                    {"value", HexString(e.value)},
                    {"mask", HexString(e.mask)},
                    {"next", e.next.stop ? std::string("stop") : e.next.state}});
  }
  root["parser"] = {{"start", config.parser.start},
                    {"states", std::move(states)},
                    {"rows", std::move(rows)}};
  root["deparse_order"] = config.deparse_order;

  Json actions = Json::array();
  for (const Action& a : p.actions) {
    Json params = Json::array();
    absl::StatusOr<std::vector<ParamSignature>> sig =
        ActionParamSignature(p, a.name);
    for (size_t i = 0; i < a.params.size(); ++i) {
      uint32_t width = sig.ok() && i < sig->size() ? (*sig)[i].width : 64;
      params.push_back({{"name", a.params[i]}, {"width", width}});
    }
    Json body = Json::array();
    for (const PrimitiveCall& call : a.body) {
      Json args = Json::array();
      for (const Operand& op : call.args) args.push_back(OperandJson(op));
      body.push_back({{"op", PrimitiveName(call.op)}, {"args", std::move(args)}});
    }
    Json action;
    action["name"] = a.name;
    if (a.builtin) action["builtin"] = true;
    action["params"] = std::move(params);
    action["body"] = std::move(body);
    actions.push_back(std::move(action));
  }
  root["actions"] = std::move(actions);

  Json tables = Json::array();
  for (const Table& t : p.tables) {
    Json reads = Json::array();
    for (const TableRead& r : t.reads) {
      if (r.kind == MatchKind::kValid) {
        reads.push_back({{"kind", "valid"}, {"header", r.header_name}});
      } else {
        reads.push_back({{"kind", ast::MatchKindName(r.kind)},
                         {"field", r.field.ToString()}});
      }
    }
    tables.push_back({{"name", t.name},
                      {"reads", std::move(reads)},
                      {"actions", t.actions},
                      {"max_size", t.max_size},
                      {"stage", config.TableStage(t.name)}});
  }
  root["tables"] = std::move(tables);
  root["control"] = {{"name", p.entry_control},
                     {"body", StatementsJson(p.control)}};
  Json nodes = Json::array();
  for (const PipelineNode& n : config.pipeline) {
    nodes.push_back({{"name", n.name}, {"table", n.table}, {"stage", n.stage}});
  }
  root["pipeline"] = {{"stage_count", config.stage_count},
                      {"nodes", std::move(nodes)}};
  return root.dump(2) + "\n";
}

absl::StatusOr<TargetConfig> Load(absl::string_view bytes) {
  Json root;
  try {
    root = Json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::exception& e) {
    return MakeError(absl::StatusCode::kInvalidArgument, "MalformedConfig",
                     absl::StrCat("schema at /: ", e.what()));
  }
  try {
    return Decoder().Run(root);
  } catch (const ConfigError& e) {
    return MakeError(absl::StatusCode::kInvalidArgument, "MalformedConfig",
                     absl::StrCat(e.kind, " at ", e.path, ": ", e.message));
  } catch (const nlohmann::json::exception& e) {
    return MakeError(absl::StatusCode::kInvalidArgument, "MalformedConfig",
                     absl::StrCat("schema: ", e.what()));
  }
}

absl::StatusOr<TargetConfig> CompileSource(absl::string_view text,
                                           absl::string_view origin) {
  ASSIGN_OR_RETURN(ast::Ast ast,
                   ParseProgram(SourceProgram{std::string(text), std::string(origin)}));
  ASSIGN_OR_RETURN(CheckedProgram program, Check(ast));
  ASSIGN_OR_RETURN(ParserProgram parser, CompileParser(program));
  Tdg tdg = BuildTdg(program);
  ASSIGN_OR_RETURN(StageAssignment stages, AssignStages(tdg));
  return Emit(program, parser, tdg, stages);
}

}  // namespace p4mc
