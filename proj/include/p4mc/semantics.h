// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef P4MC_SEMANTICS_H_
#define P4MC_SEMANTICS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "p4mc/ast.h"
#include "p4mc/program.h"

namespace p4mc {

// Resolves names and checks kinds and widths. On failure the status has class
// "SemanticError" and carries every error found (see GetDiagnostics).
absl::StatusOr<CheckedProgram> Check(const ast::Ast& ast);

struct ParamSignature {
  std::string name;
  uint32_t width = 64;
  bool operator==(const ParamSignature&) const = default;
};

// Widths of an action's runtime parameters, inferred from their use sites.
// A parameter takes the widest field it is written to; unused ones are 64.
absl::StatusOr<std::vector<ParamSignature>> ActionParamSignature(
    const CheckedProgram& program, absl::string_view action);

struct ActionHazard {
  enum class Kind { kReadThenWrite, kWriteThenRead, kWriteThenWrite };
  std::string action;
  int first = 0;   // primitive index within the action body
  int second = 0;  // always > first
  Kind kind = Kind::kReadThenWrite;
  std::string location;

  std::string ToString() const;
  bool operator==(const ActionHazard&) const = default;
};

// Pairs of primitives within one action whose outcome would depend on
// execution order. These are warnings only; the engine evaluates all reads
// before any write.
std::vector<ActionHazard> ValidateActionParallelism(
    const CheckedProgram& program);

}  // namespace p4mc

#endif  // P4MC_SEMANTICS_H_
