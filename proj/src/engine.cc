// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

#include "p4mc/engine.h"

#include <algorithm>
#include <functional>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "hex.h"
#include "json.hpp"
#include "p4mc/bits.h"
#include "p4mc/parser_compiler.h"
#include "p4mc/semantics.h"
#include "p4mc/status.h"
#include "p4mc/tdg.h"
#include "status_macros.h"

namespace p4mc {

namespace {

absl::Status NotConfigured() {
  return MakeError(absl::StatusCode::kFailedPrecondition, "NotConfigured",
                   "switch has no configuration");
}

absl::Status TypeMismatch(absl::string_view message) {
  return MakeError(absl::StatusCode::kInvalidArgument, "TypeMismatch", message);
}

struct InstalledRule {
  int64_t id = 0;
  int64_t priority = 0;
  std::vector<KeyElement> key;
  const Action* action = nullptr;
  std::vector<uint64_t> params;
};

struct DefaultAction {
  const Action* action = nullptr;
  std::vector<uint64_t> params;
};

struct TableRuntime {
  const Table* table = nullptr;
  bool exact_only = true;
  int lpm_read = -1;
  std::map<int64_t, InstalledRule> rules;  // by id
  std::map<std::vector<uint64_t>, int64_t> exact_index;
  std::optional<DefaultAction> default_action;
};

struct HeaderInstance {
  bool valid = false;
  std::vector<uint64_t> values;
};

struct PacketState {
  std::vector<HeaderInstance> headers;  // packet headers, then metadata
  std::vector<bool> defined;            // per metadata field
  BitString payload;
  bool to_cpu = false;
  std::vector<TraceEvent> trace;
  int stage = -1;
};

struct MatchResult {
  bool hit = false;
  const InstalledRule* rule = nullptr;
};

struct IfPlan {
  const Condition* condition = nullptr;
  int position = 0;
  std::vector<std::pair<const Condition*, int>> atoms;  // atom, snapshot stage
};

struct NodePlan {
  int table = 0;  // index into Impl::tables
  int stage = 0;
  std::vector<std::pair<int, bool>> guard;  // if index, polarity
};

void CollectAtoms(const Condition& c, std::vector<const Condition*>* out) {
  switch (c.kind) {
    case Condition::Kind::kNot:
    case Condition::Kind::kAnd:
    case Condition::Kind::kOr:
      for (const Condition& op : c.operands) CollectAtoms(op, out);
      return;
    default:
      out->push_back(&c);
  }
}

std::vector<Location> AtomLocations(const CheckedProgram& program,
                                    const Condition& c) {
  switch (c.kind) {
    case Condition::Kind::kDefined:
      if (program.is_metadata(c.field.header)) {
        return {{c.field.header, c.field.field}};
      }
      return {{c.field.header, Location::kValidityBit}};
    case Condition::Kind::kValid:
      return {{c.header, Location::kValidityBit}};
    case Condition::Kind::kEquals:
      if (program.is_metadata(c.field.header)) {
        return {{c.field.header, c.field.field}};
      }
      return {{c.field.header, c.field.field},
              {c.field.header, Location::kValidityBit}};
    default:
      return {};
  }
}

bool EvalTree(const Condition& c,
              const std::function<bool(const Condition&)>& atom) {
  switch (c.kind) {
    case Condition::Kind::kNot: return !EvalTree(c.operands[0], atom);
    case Condition::Kind::kAnd:
      return EvalTree(c.operands[0], atom) && EvalTree(c.operands[1], atom);
    case Condition::Kind::kOr:
      return EvalTree(c.operands[0], atom) || EvalTree(c.operands[1], atom);
    default: return atom(c);
  }
}

uint64_t MatchValue(const PacketState& s, const FieldRef& f) {
  const HeaderInstance& h = s.headers[f.header];
  return h.valid ? h.values[f.field] : 0;
}

bool EvalAtom(const CheckedProgram& program, const Condition& c,
              const PacketState& s) {
  switch (c.kind) {
    case Condition::Kind::kDefined:
      if (program.is_metadata(c.field.header)) return s.defined[c.field.field];
      return s.headers[c.field.header].valid;
    case Condition::Kind::kValid: return s.headers[c.header].valid;
    case Condition::Kind::kEquals: return MatchValue(s, c.field) == c.value;
    default: return false;
  }
}

uint64_t Checksum16(const BitString& bits) {
  uint32_t sum = 0;
  for (size_t offset = 0; offset < bits.size(); offset += 16) {
    uint32_t take = static_cast<uint32_t>(std::min<size_t>(16, bits.size() - offset));
    uint32_t word = static_cast<uint32_t>(bits.Read(offset, take) << (16 - take));
    sum += word;
    sum = (sum & 0xffff) + (sum >> 16);
  }
  return ~sum & 0xffff;
}

bool KeyMatches(const KeyElement& k, uint64_t v, uint32_t width) {
  if (const auto* e = std::get_if<ExactKey>(&k)) return v == e->value;
  if (const auto* t = std::get_if<TernaryKey>(&k)) return (v & t->mask) == t->value;
  if (const auto* l = std::get_if<LpmKey>(&k)) {
    if (l->prefix_len == 0) return true;
    uint32_t shift = width - l->prefix_len;
    return (v >> shift) == (l->value >> shift);
  }
  return (v != 0) == std::get<ValidKey>(k).valid;
}

const char* KeyKindName(const KeyElement& k) {
  switch (k.index()) {
    case 0: return "exact";
    case 1: return "ternary";
    case 2: return "lpm";
    default: return "valid";
  }
}

}  // namespace

const char* TraceKindName(TraceEvent::Kind kind) {
  switch (kind) {
    case TraceEvent::Kind::kParse: return "PARSE";
    case TraceEvent::Kind::kError: return "ERROR";
    case TraceEvent::Kind::kTable: return "TABLE";
    case TraceEvent::Kind::kPrimitive: return "PRIMITIVE";
    case TraceEvent::Kind::kPredicate: return "PREDICATE";
    case TraceEvent::Kind::kDeparse: return "DEPARSE";
    case TraceEvent::Kind::kDrop: return "DROP";
  }
  return "?";
}

std::string TraceEvent::ToJson() const {
  nlohmann::ordered_json j;
  j["event"] = TraceKindName(kind);
  switch (kind) {
    case Kind::kParse:
      j["header"] = name;
      j["offset"] = a;
      break;
    case Kind::kError:
      j["source"] = name;
      j["message"] = detail;
      break;
    case Kind::kTable:
      j["table"] = name;
      j["hit"] = flag;
      j["rule"] = rule_id == 0 ? nlohmann::ordered_json(nullptr)
                               : nlohmann::ordered_json(rule_id);
      j["action"] = detail.empty() ? nlohmann::ordered_json(nullptr)
                                   : nlohmann::ordered_json(detail);
      break;
    case Kind::kPrimitive:
      j["op"] = name;
      j["target"] = detail;
      j["old"] = HexString(a);
      j["new"] = HexString(b);
      break;
    case Kind::kPredicate:
      j["text"] = name;
      j["value"] = flag;
      break;
    case Kind::kDeparse:
      j["length"] = a;
      j["egress"] = egress < 0 ? nlohmann::ordered_json("cpu")
                               : nlohmann::ordered_json(egress);
      break;
    case Kind::kDrop:
      break;
  }
  if (stage >= 0) j["stage"] = stage;
  return j.dump();
}

struct Switch::Impl {
  TargetConfig config;
  std::map<std::string, std::vector<ParamSignature>, std::less<>> signatures;
  std::map<std::string, int, std::less<>> table_index;
  std::vector<TableRuntime> tables;
  std::map<int64_t, int> rule_table;  // rule id -> index into tables
  int64_t next_id = 1;
  std::vector<int> deparse;
  int error_field = 0;
  int egress_field = 0;
  int port_field = 0;
  std::vector<IfPlan> ifs;
  std::vector<NodePlan> nodes;
  int depth = 0;

  const CheckedProgram& program() const { return config.program; }
  int md() const { return program().metadata_index(); }

  absl::Status Init();
  void Plan(const std::vector<ControlStatement>& body,
            std::vector<std::pair<int, bool>>* guard);

  absl::StatusOr<const Action*> ResolveAction(const TableRuntime& t,
                                              absl::string_view action) const;
  absl::Status CheckParams(const Action& action,
                           const std::vector<uint64_t>& params) const;

  // Packet processing.
  PacketState Begin(int port, std::span<const uint8_t> bytes) const;
  Verdict Finish(PacketState state) const;
  MatchResult Lookup(const TableRuntime& t, const PacketState& s) const;
  void Apply(const TableRuntime& t, const MatchResult& m, PacketState* s) const;
  void Execute(const Action& action, const std::vector<uint64_t>& params,
               PacketState* s) const;
  void WriteMetadata(PacketState* s, int field, uint64_t value) const {
    s->headers[md()].values[field] = value & WidthMask(program().metadata.fields[field].width);
    s->defined[field] = true;
  }
  void RunSequential(const std::vector<ControlStatement>& body, PacketState* s,
                     std::map<std::string, bool>* last_hit) const;
};

absl::Status Switch::Impl::Init() {
  const CheckedProgram& p = program();
  for (const Action& a : p.actions) {
    ASSIGN_OR_RETURN(signatures[a.name], ActionParamSignature(p, a.name));
  }
  for (const Table& t : p.tables) {
    TableRuntime rt;
    rt.table = &t;
    for (size_t i = 0; i < t.reads.size(); ++i) {
      MatchKind k = t.reads[i].kind;
      if (k == MatchKind::kTernary || k == MatchKind::kLpm) rt.exact_only = false;
      if (k == MatchKind::kLpm) {
        if (rt.lpm_read >= 0) {
          return MakeError(absl::StatusCode::kInvalidArgument, "MalformedConfig",
                           absl::StrCat("schema at /tables: table '", t.name,
                                        "' has more than one lpm read"));
        }
        rt.lpm_read = static_cast<int>(i);
      }
    }
    table_index[t.name] = static_cast<int>(tables.size());
    tables.push_back(std::move(rt));
  }
  for (const std::string& name : config.deparse_order) {
    deparse.push_back(p.HeaderIndex(name));
  }
  error_field = p.metadata.FieldIndex(kIngressError);
  egress_field = p.metadata.FieldIndex(kEgressSpec);
  port_field = p.metadata.FieldIndex(kIngressPort);

  // The schedule must respect every dependency of the control program.
  auto malformed = [](absl::string_view message) {
    return MakeError(absl::StatusCode::kInvalidArgument, "MalformedConfig",
                     absl::StrCat("schema at /pipeline: ", message));
  };
  Tdg tdg = BuildTdg(p);
  if (tdg.nodes.size() != config.pipeline.size()) {
    return malformed("pipeline does not match the control program");
  }
  for (size_t i = 0; i < tdg.nodes.size(); ++i) {
    if (tdg.nodes[i].name != config.pipeline[i].name ||
        tdg.nodes[i].table != config.pipeline[i].table) {
      return malformed(absl::StrCat("node ", i, " should be '",
                                    tdg.nodes[i].name, "'"));
    }
  }
  for (const TdgEdge& e : tdg.edges) {
    int need = config.pipeline[e.from].stage + (IsStrict(e.kind) ? 1 : 0);
    if (config.pipeline[e.to].stage < need) {
      return malformed(absl::StrCat("stage of '", tdg.nodes[e.to].name,
                                    "' violates its ", DependencyKindName(e.kind),
                                    " dependency on '", tdg.nodes[e.from].name,
                                    "'"));
    }
  }
  depth = config.stage_count;

  std::vector<std::pair<int, bool>> guard;
  Plan(p.control, &guard);
  for (IfPlan& plan : ifs) {
    std::vector<const Condition*> atoms;
    CollectAtoms(*plan.condition, &atoms);
    for (const Condition* atom : atoms) {
      int snapshot = 0;
      for (const Location& loc : AtomLocations(p, *atom)) {
        for (int n = 0; n < plan.position; ++n) {
          if (tdg.nodes[n].writes.count(loc) || tdg.nodes[n].raises.count(loc)) {
            snapshot = std::max(snapshot, nodes[n].stage + 1);
          }
        }
      }
      plan.atoms.push_back({atom, snapshot});
    }
  }
  return absl::OkStatus();
}

void Switch::Impl::Plan(const std::vector<ControlStatement>& body,
                        std::vector<std::pair<int, bool>>* guard) {
  for (const ControlStatement& s : body) {
    if (s.kind == ControlStatement::Kind::kApply) {
      NodePlan node;
      node.table = table_index.at(s.table);
      node.stage = config.pipeline[nodes.size()].stage;
      node.guard = *guard;
      nodes.push_back(std::move(node));
      continue;
    }
    int id = static_cast<int>(ifs.size());
    ifs.push_back({&s.condition, static_cast<int>(nodes.size()), {}});
    guard->push_back({id, true});
    Plan(s.then_body, guard);
    guard->back().second = false;
    Plan(s.else_body, guard);
    guard->pop_back();
  }
}

absl::StatusOr<const Action*> Switch::Impl::ResolveAction(
    const TableRuntime& t, absl::string_view action) const {
  if (std::find(t.table->actions.begin(), t.table->actions.end(), action) ==
      t.table->actions.end()) {
    return MakeError(absl::StatusCode::kNotFound, "UnknownAction",
                     absl::StrCat("table '", t.table->name,
                                  "' has no action '", action, "'"));
  }
  return program().FindAction(action);
}

absl::Status Switch::Impl::CheckParams(const Action& action,
                                       const std::vector<uint64_t>& params) const {
  const std::vector<ParamSignature>& sig = signatures.find(action.name)->second;
  if (params.size() != sig.size()) {
    return TypeMismatch(absl::StrCat("action '", action.name, "' expects ",
                                     sig.size(), " parameters, found ",
                                     params.size()));
  }
  for (size_t i = 0; i < sig.size(); ++i) {
    if (params[i] > WidthMask(sig[i].width)) {
      return TypeMismatch(absl::StrCat("parameter '", sig[i].name, "' of '",
                                       action.name, "' does not fit in ",
                                       sig[i].width, " bits"));
    }
  }
  return absl::OkStatus();
}

PacketState Switch::Impl::Begin(int port, std::span<const uint8_t> bytes) const {
  const CheckedProgram& p = program();
  PacketState s;
  for (const HeaderLayout& h : p.headers) {
    s.headers.push_back({false, std::vector<uint64_t>(h.fields.size(), 0)});
  }
  s.headers.push_back({true, std::vector<uint64_t>(p.metadata.fields.size(), 0)});
  s.defined.assign(p.metadata.fields.size(), false);

  BitString bits = BitString::FromBytes(bytes);
  ParseResult r = SimulateParse(config.parser, bytes);
  for (const ExtractedHeader& e : r.headers) {
    HeaderInstance& h = s.headers[e.header_index];
    h.valid = true;
    const HeaderLayout& layout = p.headers[e.header_index];
    for (size_t f = 0; f < layout.fields.size(); ++f) {
      h.values[f] = bits.Read(e.offset + layout.fields[f].offset,
                              layout.fields[f].width);
    }
    TraceEvent ev;
    ev.kind = TraceEvent::Kind::kParse;
    ev.name = e.name;
    ev.a = e.offset;
    s.trace.push_back(std::move(ev));
  }
  if (r.outcome == ParseOutcome::kError) {
    TraceEvent ev;
    ev.kind = TraceEvent::Kind::kError;
    ev.name = "parser";
    ev.detail = absl::StrCat("packet too short for header '", r.error_state, "'");
    s.trace.push_back(std::move(ev));
    WriteMetadata(&s, error_field, 1);
  }
  s.payload.AppendRange(bits, r.consumed_bits, bits.size() - r.consumed_bits);
  WriteMetadata(&s, port_field, static_cast<uint64_t>(port));
  return s;
}

Verdict Switch::Impl::Finish(PacketState s) const {
  const CheckedProgram& p = program();
  Verdict v;
  BitString out;
  for (int h : deparse) {
    if (!s.headers[h].valid) continue;
    const HeaderLayout& layout = p.headers[h];
    for (size_t f = 0; f < layout.fields.size(); ++f) {
      out.Append(s.headers[h].values[f], layout.fields[f].width);
    }
  }
  out.AppendRange(s.payload, 0, s.payload.size());
  v.bytes = out.ToBytes();
  TraceEvent ev;
  if (s.to_cpu) {
    v.kind = Verdict::Kind::kToCpu;
  } else if (s.defined[egress_field]) {
    v.kind = Verdict::Kind::kForward;
    v.egress_port = static_cast<int>(s.headers[md()].values[egress_field]);
    ev.egress = v.egress_port;
  } else {
    v.kind = Verdict::Kind::kDrop;
  }
  if (v.kind == Verdict::Kind::kDrop) {
    ev.kind = TraceEvent::Kind::kDrop;
  } else {
    ev.kind = TraceEvent::Kind::kDeparse;
    ev.a = v.bytes.size();
  }
  s.trace.push_back(std::move(ev));
  v.trace = std::move(s.trace);
  return v;
}

MatchResult Switch::Impl::Lookup(const TableRuntime& t,
                                 const PacketState& s) const {
  std::vector<uint64_t> key;
  key.reserve(t.table->reads.size());
  for (const TableRead& r : t.table->reads) {
    key.push_back(r.kind == MatchKind::kValid ? (s.headers[r.header].valid ? 1 : 0)
                                              : MatchValue(s, r.field));
  }
  MatchResult out;
  if (t.exact_only) {
    auto it = t.exact_index.find(key);
    if (it != t.exact_index.end()) {
      out.hit = true;
      out.rule = &t.rules.at(it->second);
    }
    return out;
  }
  int64_t best_prefix = -1;
  for (const auto& [id, rule] : t.rules) {
    bool match = true;
    for (size_t i = 0; i < key.size() && match; ++i) {
      match = KeyMatches(rule.key[i], key[i], t.table->reads[i].width());
    }
    if (!match) continue;
    int64_t prefix =
        t.lpm_read >= 0 ? std::get<LpmKey>(rule.key[t.lpm_read]).prefix_len : 0;
    // Rules iterate by ascending id, so ties keep the earlier rule.
    if (out.rule == nullptr || prefix > best_prefix ||
        (prefix == best_prefix && rule.priority > out.rule->priority)) {
      out.hit = true;
      out.rule = &rule;
      best_prefix = prefix;
    }
  }
  return out;
}

void Switch::Impl::Apply(const TableRuntime& t, const MatchResult& m,
                         PacketState* s) const {
  const Action* action = nullptr;
  const std::vector<uint64_t>* params = nullptr;
  if (m.hit) {
    action = m.rule->action;
    params = &m.rule->params;
  } else if (t.default_action.has_value()) {
    action = t.default_action->action;
    params = &t.default_action->params;
  }
  TraceEvent ev;
  ev.kind = TraceEvent::Kind::kTable;
  ev.name = t.table->name;
  ev.flag = m.hit;
  ev.rule_id = m.hit ? m.rule->id : 0;
  ev.detail = action != nullptr ? action->name : "";
  ev.stage = s->stage;
  s->trace.push_back(std::move(ev));
  if (action != nullptr) Execute(*action, *params, s);
}

void Switch::Impl::Execute(const Action& action,
                           const std::vector<uint64_t>& params,
                           PacketState* s) const {
  const CheckedProgram& p = program();
  auto primitive_event = [&](std::string op, std::string target, uint64_t old_value,
                             uint64_t new_value) {
    TraceEvent ev;
    ev.kind = TraceEvent::Kind::kPrimitive;
    ev.name = std::move(op);
    ev.detail = std::move(target);
    ev.a = old_value;
    ev.b = new_value;
    ev.stage = s->stage;
    s->trace.push_back(std::move(ev));
  };
  if (action.builtin) {
    // fault_to_cpu
    s->to_cpu = true;
    uint64_t old_value = s->headers[md()].values[error_field];
    WriteMetadata(s, error_field, 1);
    primitive_event(std::string(kFaultToCpu),
                    absl::StrCat(kMetadataName, ".", kIngressError), old_value, 1);
    return;
  }

  struct Pending {
    enum class Kind { kField, kAdd, kRemove, kFault };
    Kind kind = Kind::kField;
    FieldRef field;
    int header = -1;
    uint64_t value = 0;
    uint64_t mask = 0;
    std::string message;
  };

  // Phase 1: every read observes the state on entry to the action.
  std::vector<bool> entry_valid(s->headers.size());
  for (size_t h = 0; h < s->headers.size(); ++h) entry_valid[h] = s->headers[h].valid;
  std::vector<bool> added(s->headers.size(), false);
  auto readable = [&](const FieldRef& f) {
    return p.is_metadata(f.header) || entry_valid[f.header];
  };
  auto writable = [&](const FieldRef& f) {
    return p.is_metadata(f.header) || entry_valid[f.header] || added[f.header];
  };
  auto entry_value = [&](const FieldRef& f) {
    return s->headers[f.header].values[f.field];
  };
  auto scalar = [&](const Operand& op) {
    return op.kind == Operand::Kind::kParam ? params[op.param] : op.value;
  };
  auto invalid = [&](const FieldRef& f) {
    return absl::StrCat("header '", f.header_name, "' is not valid");
  };

  std::vector<Pending> pending;
  for (const PrimitiveCall& call : action.body) {
    Pending w;
    const std::vector<Operand>& args = call.args;
    switch (call.op) {
      case PrimitiveOp::kSetField: {
        w.field = args[0].field;
        const uint64_t full = WidthMask(w.field.width);
        w.mask = args.size() == 3 ? scalar(args[2]) & full : full;
        w.value = scalar(args[1]) & w.mask;
        if (!writable(w.field)) {
          w.kind = Pending::Kind::kFault;
          w.message = invalid(w.field);
        }
        break;
      }
      case PrimitiveOp::kCopyField: {
        w.field = args[0].field;
        w.mask = WidthMask(w.field.width);
        const FieldRef& src = args[1].field;
        if (!writable(w.field) || !readable(src)) {
          w.kind = Pending::Kind::kFault;
          w.message = invalid(writable(w.field) ? src : w.field);
        } else {
          w.value = entry_value(src) & w.mask;
        }
        break;
      }
      case PrimitiveOp::kAddHeader:
        w.kind = Pending::Kind::kAdd;
        w.header = args[0].header;
        added[w.header] = true;
        break;
      case PrimitiveOp::kRemoveHeader:
        w.kind = Pending::Kind::kRemove;
        w.header = args[0].header;
        break;
      case PrimitiveOp::kIncrement: {
        w.field = args[0].field;
        w.mask = WidthMask(w.field.width);
        if (!readable(w.field)) {
          w.kind = Pending::Kind::kFault;
          w.message = invalid(w.field);
          break;
        }
        uint64_t delta = scalar(args[1]);
        uint64_t old_value = entry_value(w.field);
        bool negative = args[1].kind == Operand::Kind::kConst && args[1].negative;
        w.value = (negative ? old_value - delta : old_value + delta) & w.mask;
        break;
      }
      case PrimitiveOp::kChecksum: {
        w.field = args[0].field;
        w.mask = WidthMask(w.field.width);
        if (!writable(w.field)) {
          w.kind = Pending::Kind::kFault;
          w.message = invalid(w.field);
          break;
        }
        BitString data;
        for (size_t i = 1; i < args.size() && w.kind != Pending::Kind::kFault; ++i) {
          std::vector<FieldRef> sources;
          if (args[i].kind == Operand::Kind::kField) {
            sources.push_back(args[i].field);
          } else {
            const HeaderLayout& hl = p.layout(args[i].header);
            for (size_t f = 0; f < hl.fields.size(); ++f) {
              sources.push_back(*p.ResolveField(args[i].header_name, hl.fields[f].name));
            }
          }
          for (const FieldRef& src : sources) {
            if (!readable(src)) {
              w.kind = Pending::Kind::kFault;
              w.message = invalid(src);
              break;
            }
            data.Append(entry_value(src), src.width);
          }
        }
        if (w.kind != Pending::Kind::kFault) w.value = Checksum16(data) & w.mask;
        break;
      }
    }
    w.message = w.kind == Pending::Kind::kFault
                    ? absl::StrCat(PrimitiveName(call.op), ": ", w.message)
                    : "";
    pending.push_back(std::move(w));
  }

  // Phase 2: writes land in listing order.
  for (size_t i = 0; i < pending.size(); ++i) {
    const Pending& w = pending[i];
    const char* op = PrimitiveName(action.body[i].op);
    switch (w.kind) {
      case Pending::Kind::kFault: {
        TraceEvent ev;
        ev.kind = TraceEvent::Kind::kError;
        ev.name = action.name;
        ev.detail = w.message;
        ev.stage = s->stage;
        s->trace.push_back(std::move(ev));
        WriteMetadata(s, error_field, 1);
        break;
      }
      case Pending::Kind::kField: {
        uint64_t& slot = s->headers[w.field.header].values[w.field.field];
        uint64_t old_value = slot;
        slot = (old_value & ~w.mask) | w.value;
        if (p.is_metadata(w.field.header)) s->defined[w.field.field] = true;
        primitive_event(op, w.field.ToString(), old_value, slot);
        break;
      }
      case Pending::Kind::kAdd: {
        HeaderInstance& h = s->headers[w.header];
        bool was_valid = h.valid;
        if (!was_valid) {
          h.valid = true;
          std::fill(h.values.begin(), h.values.end(), 0);
        }
        primitive_event(op, p.headers[w.header].name, was_valid, 1);
        break;
      }
      case Pending::Kind::kRemove: {
        HeaderInstance& h = s->headers[w.header];
        bool was_valid = h.valid;
        h.valid = false;
        std::fill(h.values.begin(), h.values.end(), 0);
        primitive_event(op, p.headers[w.header].name, was_valid, 0);
        break;
      }
    }
  }
}

void Switch::Impl::RunSequential(const std::vector<ControlStatement>& body,
                                 PacketState* s,
                                 std::map<std::string, bool>* last_hit) const {
  for (const ControlStatement& st : body) {
    if (st.kind == ControlStatement::Kind::kApply) {
      const TableRuntime& t = tables[table_index.find(st.table)->second];
      MatchResult m = Lookup(t, *s);
      Apply(t, m, s);
      (*last_hit)[st.table] = m.hit;
      continue;
    }
    bool value = EvalTree(st.condition, [&](const Condition& c) {
      if (c.kind == Condition::Kind::kMiss) {
        auto it = last_hit->find(c.name);
        return it != last_hit->end() && !it->second;
      }
      return EvalAtom(program(), c, *s);
    });
    TraceEvent ev;
    ev.kind = TraceEvent::Kind::kPredicate;
    ev.name = st.condition.ToString();
    ev.flag = value;
    s->trace.push_back(std::move(ev));
    RunSequential(value ? st.then_body : st.else_body, s, last_hit);
  }
}

Switch::Switch() = default;
Switch::~Switch() = default;
Switch::Switch(Switch&&) noexcept = default;
Switch& Switch::operator=(Switch&&) noexcept = default;

absl::StatusOr<Switch> Switch::Create(const TargetConfig& config) {
  // Round-tripping through the wire form applies every structural check.
  return FromConfigBytes(Serialize(config));
}

absl::StatusOr<Switch> Switch::FromConfigBytes(absl::string_view bytes) {
  ASSIGN_OR_RETURN(TargetConfig config, Load(bytes));
  Switch sw;
  sw.impl_ = std::make_unique<Impl>();
  sw.impl_->config = std::move(config);
  RETURN_IF_ERROR(sw.impl_->Init());
  return sw;
}

const TargetConfig* Switch::config() const {
  return impl_ ? &impl_->config : nullptr;
}

absl::StatusOr<int64_t> Switch::InsertRule(const Rule& rule) {
  if (!impl_) return NotConfigured();
  auto ti = impl_->table_index.find(rule.table);
  if (ti == impl_->table_index.end()) {
    return MakeError(absl::StatusCode::kNotFound, "UnknownTable",
                     absl::StrCat("no table '", rule.table, "'"));
  }
  TableRuntime& t = impl_->tables[ti->second];
  ASSIGN_OR_RETURN(const Action* action, impl_->ResolveAction(t, rule.action));

  const std::vector<TableRead>& reads = t.table->reads;
  if (rule.key.size() != reads.size()) {
    return TypeMismatch(absl::StrCat("table '", t.table->name, "' expects ",
                                     reads.size(), " key elements, found ",
                                     rule.key.size()));
  }
  std::vector<uint64_t> exact_key;
  for (size_t i = 0; i < reads.size(); ++i) {
    const KeyElement& k = rule.key[i];
    const TableRead& r = reads[i];
    const size_t expected = static_cast<size_t>(
        r.kind == MatchKind::kExact     ? 0
        : r.kind == MatchKind::kTernary ? 1
        : r.kind == MatchKind::kLpm     ? 2
                                        : 3);
    if (k.index() != expected) {
      return TypeMismatch(absl::StrCat("key element ", i, " for '", r.ToString(),
                                       "' expects ", MatchKindName(r.kind),
                                       ", found ", KeyKindName(k)));
    }
    const uint64_t mask = WidthMask(r.width());
    auto fits = [&](uint64_t v, absl::string_view what) -> absl::Status {
      if (v > mask) {
        return TypeMismatch(absl::StrCat(what, " of key element ", i, " for '",
                                         r.ToString(), "' does not fit in ",
                                         r.width(), " bits"));
      }
      return absl::OkStatus();
    };
    if (const auto* e = std::get_if<ExactKey>(&k)) {
      RETURN_IF_ERROR(fits(e->value, "value"));
      exact_key.push_back(e->value);
    } else if (const auto* tk = std::get_if<TernaryKey>(&k)) {
      RETURN_IF_ERROR(fits(tk->value, "value"));
      RETURN_IF_ERROR(fits(tk->mask, "mask"));
    } else if (const auto* l = std::get_if<LpmKey>(&k)) {
      RETURN_IF_ERROR(fits(l->value, "value"));
      if (l->prefix_len > r.width()) {
        return TypeMismatch(absl::StrCat("prefix length ", l->prefix_len,
                                         " exceeds the ", r.width(),
                                         "-bit field '", r.ToString(), "'"));
      }
    } else {
      exact_key.push_back(std::get<ValidKey>(k).valid ? 1 : 0);
    }
  }
  RETURN_IF_ERROR(impl_->CheckParams(*action, rule.params));
  if (!t.exact_only && !rule.priority.has_value()) {
    return TypeMismatch(absl::StrCat("table '", t.table->name,
                                     "' requires a rule priority"));
  }
  if (t.rules.size() >= t.table->max_size) {
    return MakeError(absl::StatusCode::kResourceExhausted, "TableFull",
                     absl::StrCat("table '", t.table->name, "' is full (",
                                  t.table->max_size, " entries)"));
  }
  if (t.exact_only && t.exact_index.count(exact_key)) {
    return MakeError(absl::StatusCode::kAlreadyExists, "DuplicateExactKey",
                     absl::StrCat("table '", t.table->name,
                                  "' already has rule ",
                                  t.exact_index[exact_key], " with this key"));
  }
  InstalledRule installed;
  installed.id = impl_->next_id++;
  installed.priority = rule.priority.value_or(0);
  installed.key = rule.key;
  installed.action = action;
  installed.params = rule.params;
  if (t.exact_only) t.exact_index[exact_key] = installed.id;
  impl_->rule_table[installed.id] = ti->second;
  int64_t id = installed.id;
  t.rules.emplace(id, std::move(installed));
  return id;
}

absl::Status Switch::RemoveRule(int64_t id) {
  if (!impl_) return NotConfigured();
  auto it = impl_->rule_table.find(id);
  if (it == impl_->rule_table.end()) {
    return MakeError(absl::StatusCode::kNotFound, "UnknownRuleId",
                     absl::StrCat("no rule with id ", id));
  }
  TableRuntime& t = impl_->tables[it->second];
  if (t.exact_only) {
    for (auto e = t.exact_index.begin(); e != t.exact_index.end(); ++e) {
      if (e->second == id) {
        t.exact_index.erase(e);
        break;
      }
    }
  }
  t.rules.erase(id);
  impl_->rule_table.erase(it);
  return absl::OkStatus();
}

absl::Status Switch::SetDefault(absl::string_view table, absl::string_view action,
                                const std::vector<uint64_t>& params) {
  if (!impl_) return NotConfigured();
  auto ti = impl_->table_index.find(table);
  if (ti == impl_->table_index.end()) {
    return MakeError(absl::StatusCode::kNotFound, "UnknownTable",
                     absl::StrCat("no table '", table, "'"));
  }
  TableRuntime& t = impl_->tables[ti->second];
  ASSIGN_OR_RETURN(const Action* a, impl_->ResolveAction(t, action));
  RETURN_IF_ERROR(impl_->CheckParams(*a, params));
  t.default_action = DefaultAction{a, params};
  return absl::OkStatus();
}

absl::StatusOr<size_t> Switch::RuleCount(absl::string_view table) const {
  if (!impl_) return NotConfigured();
  auto ti = impl_->table_index.find(table);
  if (ti == impl_->table_index.end()) {
    return MakeError(absl::StatusCode::kNotFound, "UnknownTable",
                     absl::StrCat("no table '", table, "'"));
  }
  return impl_->tables[ti->second].rules.size();
}

absl::StatusOr<Verdict> Switch::ProcessPacket(
    int ingress_port, std::span<const uint8_t> bytes) const {
  if (!impl_) return NotConfigured();
  PacketState s = impl_->Begin(ingress_port, bytes);
  std::map<std::string, bool> last_hit;
  impl_->RunSequential(impl_->program().control, &s, &last_hit);
  return impl_->Finish(std::move(s));
}

absl::StatusOr<Verdict> Switch::ProcessPacketStaged(
    int ingress_port, std::span<const uint8_t> bytes) const {
  if (!impl_) return NotConfigured();
  const Impl& im = *impl_;
  PacketState s = im.Begin(ingress_port, bytes);
  enum class Status { kPending, kExecuted, kSkipped };
  std::vector<Status> status(im.nodes.size(), Status::kPending);
  std::vector<bool> hit(im.nodes.size(), false);
  std::map<const Condition*, bool> snapshot;

  auto miss = [&](int position, const std::string& table) {
    for (int k = position - 1; k >= 0; --k) {
      if (status[k] == Status::kExecuted &&
          im.tables[im.nodes[k].table].table->name == table) {
        return !hit[k];
      }
    }
    return false;
  };

  for (int stage = 0; stage < im.depth; ++stage) {
    s.stage = stage;
    for (const IfPlan& plan : im.ifs) {
      for (const auto& [atom, at] : plan.atoms) {
        if (at == stage) snapshot[atom] = EvalAtom(im.program(), *atom, s);
      }
    }
    // All lookups of a stage see the state at the start of the stage.
    std::vector<std::pair<int, MatchResult>> matches;
    for (size_t n = 0; n < im.nodes.size(); ++n) {
      if (im.nodes[n].stage == stage) {
        matches.push_back({static_cast<int>(n),
                           im.Lookup(im.tables[im.nodes[n].table], s)});
      }
    }
    for (const auto& [n, m] : matches) {
      const NodePlan& node = im.nodes[n];
      bool run = true;
      for (const auto& [if_id, polarity] : node.guard) {
        const IfPlan& plan = im.ifs[if_id];
        bool value = EvalTree(*plan.condition, [&](const Condition& c) {
          if (c.kind == Condition::Kind::kMiss) return miss(plan.position, c.name);
          return snapshot.at(&c);
        });
        TraceEvent ev;
        ev.kind = TraceEvent::Kind::kPredicate;
        ev.name = plan.condition->ToString();
        ev.flag = value;
        ev.stage = stage;
        s.trace.push_back(std::move(ev));
        if (value != polarity) {
          run = false;
          break;
        }
      }
      status[n] = run ? Status::kExecuted : Status::kSkipped;
      if (!run) continue;
      hit[n] = m.hit;
      im.Apply(im.tables[node.table], m, &s);
    }
  }
  s.stage = -1;
  return im.Finish(std::move(s));
}

}  // namespace p4mc
