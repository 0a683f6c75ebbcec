// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef P4MC_SRC_HEX_H_
#define P4MC_SRC_HEX_H_

#include <cstdint>
#include <optional>
#include <string>

#include "absl/strings/str_format.h"
#include "absl/strings/string_view.h"

namespace p4mc {

inline std::string HexString(uint64_t v) { return absl::StrFormat("0x%x", v); }

// Accepts "0x..." (any case) or plain decimal.
inline std::optional<uint64_t> ParseUint(absl::string_view text) {
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    base = 16;
    text.remove_prefix(2);
  }
  if (text.empty()) return std::nullopt;
  uint64_t value = 0;
  for (char c : text) {
    int digit;
    if (c >= '0' && c <= '9') {
      digit = c - '0';
    } else if (base == 16 && c >= 'a' && c <= 'f') {
      digit = c - 'a' + 10;
    } else if (base == 16 && c >= 'A' && c <= 'F') {
      digit = c - 'A' + 10;
    } else {
      return std::nullopt;
    }
    if (value > (UINT64_MAX - digit) / base) return std::nullopt;
    value = value * base + digit;
  }
  return value;
}

}  // namespace p4mc

#endif  // P4MC_SRC_HEX_H_
