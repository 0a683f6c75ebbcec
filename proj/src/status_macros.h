// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef P4MC_SRC_STATUS_MACROS_H_
#define P4MC_SRC_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define P4MC_CONCAT_INNER(a, b) a##b
#define P4MC_CONCAT(a, b) P4MC_CONCAT_INNER(a, b)

#define RETURN_IF_ERROR(expr)                      \
  do {                                             \
    ::absl::Status p4mc_status_ = (expr);          \
    if (!p4mc_status_.ok()) return p4mc_status_;   \
  } while (0)

#define ASSIGN_OR_RETURN_IMPL(tmp, lhs, expr) \
  auto tmp = (expr);                          \
  if (!tmp.ok()) return tmp.status();         \
  lhs = std::move(*tmp)

#define ASSIGN_OR_RETURN(lhs, expr) \
  ASSIGN_OR_RETURN_IMPL(P4MC_CONCAT(p4mc_statusor_, __LINE__), lhs, expr)

#endif  // P4MC_SRC_STATUS_MACROS_H_
