// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

// File formats for populating and driving a Switch: the JSON rules file,
// the hex packets file, and verdict lines.

#ifndef P4MC_RULES_IO_H_
#define P4MC_RULES_IO_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "p4mc/engine.h"

namespace p4mc {

struct RuleEntry {
  Rule rule;
  bool is_default = false;  // {"table": ..., "default": true, "action": ...}
};

// A JSON array of rule objects.  Values are hex strings ("0x0a") or
// non-negative integers.  Key elements: exact -> value; ternary ->
// {"value", "mask"}; lpm -> {"value", "prefix_len"}; valid -> true/false.
absl::StatusOr<std::vector<RuleEntry>> ParseRules(absl::string_view json);

// Installs every entry, in order.  Returns one message per rejected entry.
std::vector<std::string> InstallRules(Switch* sw,
                                      const std::vector<RuleEntry>& entries);

struct PacketInput {
  int line = 0;
  std::optional<int> port;  // "port=<n>" prefix
  std::vector<uint8_t> bytes;
};

// One packet per line as hex octets; blank lines and '#' comments ignored.
absl::StatusOr<std::vector<PacketInput>> ParsePackets(absl::string_view text);

std::string HexBytes(std::span<const uint8_t> bytes);
absl::StatusOr<std::vector<uint8_t>> ParseHexBytes(absl::string_view text);

// "verdict egress=<n> bytes=<hex>", "verdict DROP bytes=<hex>" or
// "verdict TO_CPU bytes=<hex>".
std::string FormatVerdict(const Verdict& verdict);

}  // namespace p4mc

#endif  // P4MC_RULES_IO_H_
