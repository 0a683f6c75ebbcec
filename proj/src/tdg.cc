// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

#include "p4mc/tdg.h"

#include <algorithm>
#include <map>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "p4mc/status.h"

namespace p4mc {

namespace {

bool Intersects(const std::set<Location>& a, const std::set<Location>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      return true;
    }
  }
  return false;
}

void ConditionReads(const CheckedProgram& program, const Condition& c,
                    std::set<Location>* reads, std::vector<std::string>* misses) {
  switch (c.kind) {
    case Condition::Kind::kDefined:
      if (program.is_metadata(c.field.header)) {
        reads->insert({c.field.header, c.field.field});
      } else {
        reads->insert({c.field.header, Location::kValidityBit});
      }
      break;
    case Condition::Kind::kValid:
      reads->insert({c.header, Location::kValidityBit});
      break;
    case Condition::Kind::kEquals:
      reads->insert({c.field.header, c.field.field});
      if (!program.is_metadata(c.field.header)) {
        reads->insert({c.field.header, Location::kValidityBit});
      }
      break;
    case Condition::Kind::kMiss:
      misses->push_back(c.name);
      break;
    default:
      for (const Condition& op : c.operands) {
        ConditionReads(program, op, reads, misses);
      }
  }
}

class Builder {
 public:
  explicit Builder(const CheckedProgram& program) : program_(program) {}

  Tdg Run() {
    Walk(program_.control);
    for (size_t b = 0; b < tdg_.nodes.size(); ++b) {
      for (size_t a = 0; a < b; ++a) {
        if (auto kind = ClassifyDependency(tdg_.nodes[a], tdg_.nodes[b])) {
          tdg_.edges.push_back(
              {static_cast<int>(a), static_cast<int>(b), *kind});
        }
      }
    }
    return std::move(tdg_);
  }

 private:
  void Walk(const std::vector<ControlStatement>& body) {
    for (const ControlStatement& s : body) {
      if (s.kind == ControlStatement::Kind::kApply) {
        AddNode(s.table);
        continue;
      }
      GuardTerm term{s.condition, true, static_cast<int>(tdg_.nodes.size())};
      guard_.push_back(term);
      Walk(s.then_body);
      guard_.back().polarity = false;
      Walk(s.else_body);
      guard_.pop_back();
    }
  }

  void AddNode(const std::string& table_name) {
    const Table& table = *program_.FindTable(table_name);
    TdgNode node;
    int count = ++applications_[table_name];
    node.name = count == 1 ? table_name : absl::StrCat(table_name, "#", count);
    node.table = table_name;
    node.index = static_cast<int>(tdg_.nodes.size());
    for (const TableRead& r : table.reads) {
      if (r.kind == MatchKind::kValid) {
        node.match_reads.insert({r.header, Location::kValidityBit});
        continue;
      }
      node.match_reads.insert({r.field.header, r.field.field});
      if (!program_.is_metadata(r.field.header)) {
        node.match_reads.insert({r.field.header, Location::kValidityBit});
      }
    }
    const int error_field = program_.metadata.FieldIndex(kIngressError);
    const Location error_flag{program_.metadata_index(), error_field};
    for (const std::string& action_name : table.actions) {
      const Action& action = *program_.FindAction(action_name);
      if (action.builtin) {
        node.raises.insert(error_flag);
        continue;
      }
      for (const PrimitiveCall& call : action.body) {
        PrimitiveEffects e = EffectsOf(program_, call);
        node.action_reads.insert(e.value_reads.begin(), e.value_reads.end());
        node.action_reads.insert(e.validity_reads.begin(),
                                 e.validity_reads.end());
        node.writes.insert(e.writes.begin(), e.writes.end());
        if (e.wholesale_header >= 0) {
          const HeaderLayout& hl = program_.layout(e.wholesale_header);
          for (size_t f = 0; f < hl.fields.size(); ++f) {
            node.writes.insert({e.wholesale_header, static_cast<int>(f)});
          }
        }
        if (e.may_fault) node.raises.insert(error_flag);
      }
    }
    node.guard = guard_;
    for (const GuardTerm& term : guard_) {
      std::vector<std::string> misses;
      ConditionReads(program_, term.condition, &node.predicate_reads, &misses);
      for (const std::string& t : misses) {
        for (const TdgNode& earlier : tdg_.nodes) {
          if (earlier.table == t && earlier.index < term.position &&
              std::find(node.contingent_on.begin(), node.contingent_on.end(),
                        earlier.index) == node.contingent_on.end()) {
            node.contingent_on.push_back(earlier.index);
          }
        }
      }
    }
    std::sort(node.contingent_on.begin(), node.contingent_on.end());
    tdg_.nodes.push_back(std::move(node));
  }

  const CheckedProgram& program_;
  Tdg tdg_;
  std::vector<GuardTerm> guard_;
  std::map<std::string, int> applications_;
};

}  // namespace

const char* DependencyKindName(DependencyKind kind) {
  switch (kind) {
    case DependencyKind::kMatch: return "MATCH";
    case DependencyKind::kAction: return "ACTION";
    case DependencyKind::kPredication: return "PREDICATION";
    case DependencyKind::kAnti: return "ANTI";
  }
  return "?";
}

std::set<Location> TdgNode::read_set() const {
  std::set<Location> out = match_reads;
  out.insert(action_reads.begin(), action_reads.end());
  return out;
}

std::string TdgNode::PredicateText() const {
  if (guard.empty()) return "true";
  std::vector<std::string> parts;
  for (const GuardTerm& t : guard) {
    std::string text = t.condition.ToString();
    parts.push_back(t.polarity ? text : absl::StrCat("!(", text, ")"));
  }
  return absl::StrJoin(parts, " && ");
}

std::optional<DependencyKind> ClassifyDependency(const TdgNode& a,
                                                 const TdgNode& b) {
  std::set<Location> b_reads = b.read_set();
  b_reads.insert(b.predicate_reads.begin(), b.predicate_reads.end());
  std::set<Location> a_writes = a.writes;
  a_writes.insert(a.raises.begin(), a.raises.end());
  if (Intersects(b_reads, a_writes)) return DependencyKind::kMatch;
  if (Intersects(b.writes, a_writes) || Intersects(b.raises, a.writes)) {
    return DependencyKind::kAction;
  }
  if (std::find(b.contingent_on.begin(), b.contingent_on.end(), a.index) !=
      b.contingent_on.end()) {
    return DependencyKind::kPredication;
  }
  if (Intersects(a.read_set(), b.writes) || Intersects(a.read_set(), b.raises)) {
    return DependencyKind::kAnti;
  }
  return std::nullopt;
}

Tdg BuildTdg(const CheckedProgram& program) { return Builder(program).Run(); }

absl::StatusOr<StageAssignment> AssignStages(const Tdg& tdg) {
  const int n = static_cast<int>(tdg.nodes.size());
  std::vector<std::vector<const TdgEdge*>> incoming(n);
  for (const TdgEdge& e : tdg.edges) {
    if (e.from < 0 || e.to >= n || e.from >= e.to) {
      return MakeError(absl::StatusCode::kInvalidArgument, "CycleDetected",
                       absl::StrCat("edge ", e.from, " -> ", e.to,
                                    " does not follow control order"));
    }
    incoming[e.to].push_back(&e);
  }
  StageAssignment out;
  out.stage.assign(n, 0);
  for (int v = 0; v < n; ++v) {
    for (const TdgEdge* e : incoming[v]) {
      out.stage[v] =
          std::max(out.stage[v], out.stage[e->from] + (IsStrict(e->kind) ? 1 : 0));
    }
    out.depth = std::max(out.depth, out.stage[v] + 1);
  }
  return out;
}

std::string ExportDot(const Tdg& tdg, const StageAssignment& stages) {
  std::string out = "digraph tdg {\n  node [shape=box];\n";
  for (size_t i = 0; i < tdg.nodes.size(); ++i) {
    int stage = i < stages.stage.size() ? stages.stage[i] : 0;
    // Node names are identifiers with an optional "#k" suffix; no escaping.
    absl::StrAppend(&out, "  n", i, " [label=\"", tdg.nodes[i].name,
                    "\\nstage=", stage, "\"];\n");
  }
  for (const TdgEdge& e : tdg.edges) {
    absl::StrAppend(&out, "  n", e.from, " -> n", e.to, " [label=\"",
                    DependencyKindName(e.kind), "\"];\n");
  }
  absl::StrAppend(&out, "}\n");
  return out;
}

}  // namespace p4mc
