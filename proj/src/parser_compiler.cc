// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

#include "p4mc/parser_compiler.h"

#include <algorithm>
#include <map>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "p4mc/bits.h"
#include "p4mc/status.h"

namespace p4mc {

namespace {

// Successor states of `plan`, in row order.
std::vector<std::string> Successors(const ParserProgram& parser,
                                    const StatePlan& plan) {
  std::vector<std::string> out;
  for (int i = 0; i < plan.row_count; ++i) {
    const StateTableEntry& row = parser.entries[plan.first_row + i];
    if (!row.next.stop) out.push_back(row.next.state);
  }
  return out;
}

}  // namespace

const StatePlan* ParserProgram::FindPlan(absl::string_view state) const {
  for (const StatePlan& p : plan) {
    if (p.state == state) return &p;
  }
  return nullptr;
}

absl::StatusOr<ParserProgram> CompileParser(const CheckedProgram& program) {
  if (program.FindState(kStartState) == nullptr) {
    return MakeError(absl::StatusCode::kInvalidArgument, "MissingStartState",
                     "the parser has no 'start' state");
  }
  ParserProgram out;
  for (const ParserState& state : program.parser_states) {
    StatePlan plan;
    plan.state = state.name;
    plan.header_index = state.header;
    if (state.header >= 0) {
      const HeaderLayout& hl = program.headers[state.header];
      plan.header = hl.name;
      plan.width = hl.width;
    }
    plan.first_row = static_cast<int>(out.entries.size());

    auto check_next = [&](const StateRef& next) -> absl::Status {
      if (!next.stop && program.FindState(next.state) == nullptr) {
        return MakeError(absl::StatusCode::kInvalidArgument,
                         "UndeclaredNextState",
                         absl::StrCat("state '", state.name,
                                      "' transitions to undeclared state '",
                                      next.state, "'"));
      }
      return absl::OkStatus();
    };

    int priority = 0;
    if (!state.is_switch) {
      if (absl::Status s = check_next(state.next); !s.ok()) return s;
      out.entries.push_back({state.name, 0, 0, state.next, priority++});
    } else {
      const FieldLayout& f = program.headers[state.header].fields[state.select_field];
      plan.select = SelectSlice{f.offset, f.width};
      const uint64_t mask = WidthMask(f.width);
      for (const ParserCase& c : state.cases) {
        if (absl::Status s = check_next(c.next); !s.ok()) return s;
        out.entries.push_back({state.name, c.value, mask, c.next, priority++});
      }
      // Values no case handles end parsing and keep what was extracted.
      StateRef fallback = state.default_next.value_or(StateRef{true, ""});
      if (absl::Status s = check_next(fallback); !s.ok()) return s;
      out.entries.push_back({state.name, 0, 0, fallback, priority++});
    }
    plan.row_count = priority;
    out.plan.push_back(std::move(plan));
  }

  // Reject cycles reachable from start (headers are singletons, so no state
  // may be visited twice along one path).
  std::map<std::string, int> color;  // 0 white, 1 on stack, 2 done
  std::vector<std::pair<std::string, size_t>> stack;
  stack.push_back({out.start, 0});
  color[out.start] = 1;
  while (!stack.empty()) {
    auto& [name, next_index] = stack.back();
    std::vector<std::string> succ = Successors(out, *out.FindPlan(name));
    if (next_index >= succ.size()) {
      color[name] = 2;
      stack.pop_back();
      continue;
    }
    const std::string child = succ[next_index++];
    int& c = color[child];
    if (c == 1) {
      return MakeError(absl::StatusCode::kInvalidArgument, "CyclicParserGraph",
                       absl::StrCat("parser state '", child,
                                    "' is reachable from itself"));
    }
    if (c == 0) {
      c = 1;
      stack.push_back({child, 0});
    }
  }
  return out;
}

ParseResult SimulateParse(const ParserProgram& parser,
                          std::span<const uint8_t> bytes) {
  const BitString packet = BitString::FromBytes(bytes);
  ParseResult result;
  size_t offset = 0;
  const StatePlan* plan = parser.FindPlan(parser.start);
  // Each state is visited at most once on an acyclic graph.
  for (size_t steps = 0; plan != nullptr && steps <= parser.plan.size(); ++steps) {
    const size_t header_offset = offset;
    if (plan->header_index >= 0) {
      if (packet.size() - offset < plan->width) {
        result.outcome = ParseOutcome::kError;
        result.error_state = plan->state;
        break;
      }
      result.headers.push_back(
          {plan->header, plan->header_index, offset, plan->width});
      offset += plan->width;
    }
    uint64_t key = 0;
    if (plan->select.has_value()) {
      key = packet.Read(header_offset + plan->select->offset, plan->select->width);
    }
    const StateTableEntry* hit = nullptr;
    for (int i = 0; i < plan->row_count; ++i) {
      const StateTableEntry& row = parser.entries[plan->first_row + i];
      if ((key & row.mask) == row.value) {
        hit = &row;
        break;
      }
    }
    if (hit == nullptr || hit->next.stop) break;
    plan = parser.FindPlan(hit->next.state);
  }
  result.consumed_bits = offset;
  return result;
}

std::vector<int> DeparseOrder(const CheckedProgram& program,
                              const ParserProgram& parser) {
  // Reverse DFS post-order from start.
  std::vector<std::string> post;
  std::set<std::string> seen;
  std::vector<std::pair<std::string, size_t>> stack;
  if (parser.FindPlan(parser.start) != nullptr) {
    stack.push_back({parser.start, 0});
    seen.insert(parser.start);
  }
  while (!stack.empty()) {
    auto& [name, next_index] = stack.back();
    std::vector<std::string> succ = Successors(parser, *parser.FindPlan(name));
    if (next_index >= succ.size()) {
      post.push_back(name);
      stack.pop_back();
      continue;
    }
    std::string child = succ[next_index++];
    if (seen.insert(child).second && parser.FindPlan(child) != nullptr) {
      stack.push_back({child, 0});
    }
  }
  std::vector<int> order;
  for (auto it = post.rbegin(); it != post.rend(); ++it) {
    const StatePlan* plan = parser.FindPlan(*it);
    if (plan->header_index >= 0) order.push_back(plan->header_index);
  }
  for (int h = 0; h < static_cast<int>(program.headers.size()); ++h) {
    if (std::find(order.begin(), order.end(), h) == order.end()) {
      order.push_back(h);
    }
  }
  return order;
}

}  // namespace p4mc
