// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

#include "p4mc/rules_io.h"

#include <cctype>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"
#include "hex.h"
#include "json.hpp"
#include "p4mc/status.h"

namespace p4mc {

namespace {

using Json = nlohmann::json;

struct RulesError {
  std::string message;
};

[[noreturn]] void Fail(std::string message) { throw RulesError{std::move(message)}; }

uint64_t Value(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<uint64_t>();
  if (j.is_number_integer()) {
    if (j.get<int64_t>() < 0) Fail(path + ": negative value");
    return j.get<uint64_t>();
  }
  if (j.is_string()) {
    std::optional<uint64_t> v = ParseUint(j.get<std::string>());
    if (!v.has_value()) {
      Fail(absl::StrCat(path, ": bad value '", j.get<std::string>(), "'"));
    }
    return *v;
  }
  Fail(path + ": expected a hex string or integer");
}

KeyElement Key(const Json& j, const std::string& path) {
  if (j.is_boolean()) return ValidKey{j.get<bool>()};
  if (j.is_object()) {
    if (!j.contains("value")) Fail(path + ": missing 'value'");
    uint64_t value = Value(j["value"], path + ".value");
    if (j.contains("mask")) return TernaryKey{value, Value(j["mask"], path + ".mask")};
    if (j.contains("prefix_len")) {
      uint64_t len = Value(j["prefix_len"], path + ".prefix_len");
      if (len > 64) Fail(path + ".prefix_len: out of range");
      return LpmKey{value, static_cast<uint32_t>(len)};
    }
    Fail(path + ": expected 'mask' or 'prefix_len'");
  }
  return ExactKey{Value(j, path)};
}

RuleEntry Entry(const Json& j, const std::string& path) {
  if (!j.is_object()) Fail(path + ": expected an object");
  RuleEntry e;
  auto string = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_string()) {
      Fail(absl::StrCat(path, ": '", key, "' must be a string"));
    }
    return j[key].get<std::string>();
  };
  e.rule.table = string("table");
  e.rule.action = string("action");
  if (j.contains("default")) {
    if (!j["default"].is_boolean()) Fail(path + ": 'default' must be a boolean");
    e.is_default = j["default"].get<bool>();
  }
  if (j.contains("priority")) {
    if (!j["priority"].is_number_integer()) {
      Fail(path + ": 'priority' must be an integer");
    }
    e.rule.priority = j["priority"].get<int64_t>();
  }
  if (j.contains("key")) {
    if (!j["key"].is_array()) Fail(path + ": 'key' must be an array");
    for (size_t i = 0; i < j["key"].size(); ++i) {
      e.rule.key.push_back(Key(j["key"][i], absl::StrCat(path, ".key[", i, "]")));
    }
  } else if (!e.is_default) {
    Fail(path + ": missing 'key'");
  }
  if (j.contains("params")) {
    if (!j["params"].is_array()) Fail(path + ": 'params' must be an array");
    for (size_t i = 0; i < j["params"].size(); ++i) {
      e.rule.params.push_back(
          Value(j["params"][i], absl::StrCat(path, ".params[", i, "]")));
    }
  }
  return e;
}

}  // namespace

absl::StatusOr<std::vector<RuleEntry>> ParseRules(absl::string_view json) {
  try {
    Json root = Json::parse(json.begin(), json.end());
    if (!root.is_array()) Fail("rules file must hold a JSON array");
    std::vector<RuleEntry> out;
    for (size_t i = 0; i < root.size(); ++i) {
      out.push_back(Entry(root[i], absl::StrCat("rule ", i)));
    }
    return out;
  } catch (const RulesError& e) {
    return MakeError(absl::StatusCode::kInvalidArgument, "MalformedRules",
                     e.message);
  } catch (const nlohmann::json::exception& e) {
    return MakeError(absl::StatusCode::kInvalidArgument, "MalformedRules",
                     e.what());
  }
}

std::vector<std::string> InstallRules(Switch* sw,
                                      const std::vector<RuleEntry>& entries) {
  std::vector<std::string> errors;
  for (size_t i = 0; i < entries.size(); ++i) {
    const RuleEntry& e = entries[i];
    absl::Status status =
        e.is_default ? sw->SetDefault(e.rule.table, e.rule.action, e.rule.params)
                     : sw->InsertRule(e.rule).status();
    if (!status.ok()) {
      errors.push_back(absl::StrCat("rule ", i, ": ", status.message()));
    }
  }
  return errors;
}

absl::StatusOr<std::vector<uint8_t>> ParseHexBytes(absl::string_view text) {
  std::string digits;
  for (char c : text) {
    if (absl::ascii_isspace(static_cast<unsigned char>(c)) || c == ':') continue;
    if (!absl::ascii_isxdigit(static_cast<unsigned char>(c))) {
      return MakeError(absl::StatusCode::kInvalidArgument, "MalformedPackets",
                       absl::StrCat("unexpected character '", std::string(1, c),
                                    "' in hex data"));
    }
    digits.push_back(c);
  }
  if (digits.size() % 2 != 0) {
    return MakeError(absl::StatusCode::kInvalidArgument, "MalformedPackets",
                     "odd number of hex digits");
  }
  std::vector<uint8_t> out;
  for (size_t i = 0; i < digits.size(); i += 2) {
    out.push_back(static_cast<uint8_t>(std::stoi(digits.substr(i, 2), nullptr, 16)));
  }
  return out;
}

absl::StatusOr<std::vector<PacketInput>> ParsePackets(absl::string_view text) {
  std::vector<PacketInput> out;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    line = line.substr(0, line.find('#'));
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    PacketInput p;
    p.line = line_no;
    if (absl::StartsWith(line, "port=")) {
      size_t end = line.find_first_of(" \t");
      absl::string_view number = line.substr(5, end == absl::string_view::npos
                                                   ? absl::string_view::npos
                                                   : end - 5);
      int port = 0;
      if (!absl::SimpleAtoi(number, &port) || port < 0) {
        return MakeError(absl::StatusCode::kInvalidArgument, "MalformedPackets",
                         absl::StrCat("line ", line_no, ": bad port"));
      }
      p.port = port;
      line = end == absl::string_view::npos ? "" : line.substr(end);
    }
    absl::StatusOr<std::vector<uint8_t>> bytes = ParseHexBytes(line);
    if (!bytes.ok()) {
      return MakeError(absl::StatusCode::kInvalidArgument, "MalformedPackets",
                       absl::StrCat("line ", line_no, ": ",
                                    absl::StripPrefix(bytes.status().message(),
                                                      "MalformedPackets: ")));
    }
    p.bytes = *std::move(bytes);
    out.push_back(std::move(p));
  }
  return out;
}

std::string HexBytes(std::span<const uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 15]);
  }
  return out;
}

std::string FormatVerdict(const Verdict& verdict) {
  std::string head;
  switch (verdict.kind) {
    case Verdict::Kind::kForward:
      head = absl::StrCat("egress=", verdict.egress_port);
      break;
    case Verdict::Kind::kDrop: head = "DROP"; break;
    case Verdict::Kind::kToCpu: head = "TO_CPU"; break;
  }
  return absl::StrCat("verdict ", head, " bytes=", HexBytes(verdict.bytes));
}

}  // namespace p4mc
