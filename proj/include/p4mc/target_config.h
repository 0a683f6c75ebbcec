// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

// The compiled, self-contained switch configuration: everything the engine
// needs to run a program without its source. Serialized as JSON; see
// docs/target_config.md for the schema.

#ifndef P4MC_TARGET_CONFIG_H_
#define P4MC_TARGET_CONFIG_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "p4mc/parser_compiler.h"
#include "p4mc/program.h"
#include "p4mc/tdg.h"

namespace p4mc {

inline constexpr absl::string_view kConfigVersion = "p4mc-1";

struct PipelineNode {
  std::string name;
  std::string table;
  int stage = 0;
  bool operator==(const PipelineNode&) const = default;
};

struct TargetConfig {
  std::string version = std::string(kConfigVersion);
  // Tables are limited to those the control applies; parser declarations are
  // replaced by `parser`.
  CheckedProgram program;
  ParserProgram parser;
  std::vector<std::string> deparse_order;
  std::vector<PipelineNode> pipeline;
  int stage_count = 0;

  // Stage of the table's first application.
  int TableStage(absl::string_view table) const;
  bool operator==(const TargetConfig&) const = default;
};

// Errors: InternalInconsistency when the inputs disagree on a name.
absl::StatusOr<TargetConfig> Emit(const CheckedProgram& program,
                                  const ParserProgram& parser, const Tdg& tdg,
                                  const StageAssignment& stages);

// Deterministic: equal configs serialize to identical bytes.
std::string Serialize(const TargetConfig& config);

// Errors: MalformedConfig; the message names the failure kind (version,
// schema, reference) and the JSON path of the offending element.
absl::StatusOr<TargetConfig> Load(absl::string_view bytes);

// Source text through every compile pass to a config.
absl::StatusOr<TargetConfig> CompileSource(absl::string_view text,
                                           absl::string_view origin = "<memory>");

}  // namespace p4mc

#endif  // P4MC_TARGET_CONFIG_H_
