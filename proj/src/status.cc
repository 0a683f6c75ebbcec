// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

#include "p4mc/status.h"

#include <optional>

#include "absl/strings/cord.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "json.hpp"

namespace p4mc {

namespace {

constexpr char kClassUrl[] = "p4mc/error-class";
constexpr char kDiagnosticsUrl[] = "p4mc/diagnostics";

}  // namespace

std::string Diagnostic::Format(absl::string_view origin) const {
  const char* level = severity == Severity::kError ? "error" : "warning";
  if (span.line == 0) return absl::StrCat(origin, ": ", level, ": ", message);
  return absl::StrCat(origin, ":", span.line, ":", span.column, ": ", level,
                      ": ", message);
}

absl::Status MakeError(absl::StatusCode code, absl::string_view error_class,
                       absl::string_view message) {
  absl::Status status(code, absl::StrCat(error_class, ": ", message));
  status.SetPayload(kClassUrl, absl::Cord(error_class));
  return status;
}

std::string ErrorClass(const absl::Status& status) {
  absl::optional<absl::Cord> payload = status.GetPayload(kClassUrl);
  if (!payload.has_value()) return "";
  return std::string(*payload);
}

absl::Status DiagnosticsError(absl::string_view error_class,
                              const std::vector<Diagnostic>& diagnostics) {
  std::vector<std::string> lines;
  nlohmann::json encoded = nlohmann::json::array();
  for (const Diagnostic& d : diagnostics) {
    lines.push_back(absl::StrCat(d.span.line, ":", d.span.column, ": ",
                                 d.message));
    encoded.push_back({d.span.line, d.span.column,
                       d.severity == Severity::kError ? 0 : 1, d.message});
  }
  absl::Status status(absl::StatusCode::kInvalidArgument,
                      absl::StrJoin(lines, "\n"));
  status.SetPayload(kClassUrl, absl::Cord(error_class));
  status.SetPayload(kDiagnosticsUrl, absl::Cord(encoded.dump()));
  return status;
}

std::vector<Diagnostic> GetDiagnostics(const absl::Status& status) {
  std::vector<Diagnostic> out;
  absl::optional<absl::Cord> payload = status.GetPayload(kDiagnosticsUrl);
  if (!payload.has_value()) {
    if (!status.ok()) out.push_back({Span{}, Severity::kError,
                                     std::string(status.message())});
    return out;
  }
  for (const auto& item : nlohmann::json::parse(std::string(*payload))) {
    Diagnostic d;
    d.span = Span{item[0].get<int>(), item[1].get<int>()};
    d.severity = item[2].get<int>() == 0 ? Severity::kError : Severity::kWarning;
    d.message = item[3].get<std::string>();
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace p4mc
