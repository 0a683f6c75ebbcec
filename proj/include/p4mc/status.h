// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef P4MC_STATUS_H_
#define P4MC_STATUS_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/string_view.h"

namespace p4mc {

// A position in program source; 1-based. Line 0 means "no location".
struct Span {
  int line = 0;
  int column = 0;
};

// Spans never participate in structural equality of syntax trees: two trees
// that differ only in where they were parsed from compare equal.
inline bool operator==(const Span&, const Span&) { return true; }

enum class Severity { kError, kWarning };

struct Diagnostic {
  Span span;
  Severity severity = Severity::kError;
  std::string message;

  // `origin:line:col: error: message`
  std::string Format(absl::string_view origin) const;
};

// Every error produced by this library carries a short class name (e.g.
// "TableFull", "ParseError") so callers can branch without parsing messages.
absl::Status MakeError(absl::StatusCode code, absl::string_view error_class,
                       absl::string_view message);
std::string ErrorClass(const absl::Status& status);

// Attaches a list of located diagnostics to an error status. The status
// message becomes the diagnostics joined by newlines.
absl::Status DiagnosticsError(absl::string_view error_class,
                              const std::vector<Diagnostic>& diagnostics);
std::vector<Diagnostic> GetDiagnostics(const absl::Status& status);

}  // namespace p4mc

#endif  // P4MC_STATUS_H_
