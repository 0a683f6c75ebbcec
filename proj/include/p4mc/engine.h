// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

// Software switch: rule population and packet processing for a loaded
// TargetConfig.  ProcessPacket is the reference interpreter; ProcessPacketStaged
// runs the same program stage by stage on the pipeline schedule.

#ifndef P4MC_ENGINE_H_
#define P4MC_ENGINE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "p4mc/target_config.h"

namespace p4mc {

struct ExactKey {
  uint64_t value = 0;
  bool operator==(const ExactKey&) const = default;
};
struct TernaryKey {
  uint64_t value = 0;
  uint64_t mask = 0;
  bool operator==(const TernaryKey&) const = default;
};
struct LpmKey {
  uint64_t value = 0;
  uint32_t prefix_len = 0;
  bool operator==(const LpmKey&) const = default;
};
struct ValidKey {
  bool valid = false;
  bool operator==(const ValidKey&) const = default;
};
using KeyElement = std::variant<ExactKey, TernaryKey, LpmKey, ValidKey>;

struct Rule {
  std::string table;
  std::optional<int64_t> priority;  // required for ternary/lpm tables
  std::vector<KeyElement> key;      // one element per table read
  std::string action;
  std::vector<uint64_t> params;
  bool operator==(const Rule&) const = default;
};

struct TraceEvent {
  enum class Kind { kParse, kError, kTable, kPrimitive, kPredicate, kDeparse, kDrop };
  Kind kind = Kind::kParse;
  std::string name;    // header, table, primitive, predicate text, error source
  std::string detail;  // action name, primitive target, error message
  uint64_t a = 0;      // PARSE offset; PRIMITIVE old value; DEPARSE length
  uint64_t b = 0;      // PRIMITIVE new value
  bool flag = false;   // TABLE hit; PREDICATE value
  int64_t rule_id = 0;  // TABLE: 0 when no rule matched
  int egress = -1;      // DEPARSE: -1 when sent to the CPU
  int stage = -1;       // staged executor only

  std::string ToJson() const;
  bool operator==(const TraceEvent&) const = default;
};

const char* TraceKindName(TraceEvent::Kind kind);

struct Verdict {
  enum class Kind { kForward, kDrop, kToCpu };
  Kind kind = Kind::kDrop;
  int egress_port = 0;  // kForward
  std::vector<uint8_t> bytes;
  std::vector<TraceEvent> trace;

  // Verdict and output bytes; traces may legitimately differ.
  bool SameOutcome(const Verdict& other) const {
    return kind == other.kind && egress_port == other.egress_port &&
           bytes == other.bytes;
  }
};

class Switch {
 public:
  // An unconfigured switch; every operation fails with NotConfigured.
  Switch();
  ~Switch();
  Switch(Switch&&) noexcept;
  Switch& operator=(Switch&&) noexcept;

  static absl::StatusOr<Switch> Create(const TargetConfig& config);
  static absl::StatusOr<Switch> FromConfigBytes(absl::string_view bytes);

  absl::StatusOr<int64_t> InsertRule(const Rule& rule);
  absl::Status RemoveRule(int64_t id);
  absl::Status SetDefault(absl::string_view table, absl::string_view action,
                          const std::vector<uint64_t>& params);

  absl::StatusOr<size_t> RuleCount(absl::string_view table) const;
  const TargetConfig* config() const;

  absl::StatusOr<Verdict> ProcessPacket(int ingress_port,
                                        std::span<const uint8_t> bytes) const;
  absl::StatusOr<Verdict> ProcessPacketStaged(
      int ingress_port, std::span<const uint8_t> bytes) const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace p4mc

#endif  // P4MC_ENGINE_H_
