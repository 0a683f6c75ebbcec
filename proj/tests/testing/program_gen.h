// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

// Random generators for property tests: well-formed programs, well-typed
// rules for a compiled program, and packets biased toward its parser.

#ifndef P4MC_TESTS_TESTING_PROGRAM_GEN_H_
#define P4MC_TESTS_TESTING_PROGRAM_GEN_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "p4mc/rules_io.h"
#include "p4mc/target_config.h"

namespace p4mc::testing {

using Rng = std::mt19937_64;

struct GenLimits {
  int max_headers = 5;
  int max_tables = 6;
  int max_depth = 4;  // if-statement nesting
  int max_actions = 6;
};

// Source text of a program that passes semantic checks.
std::string RandomProgram(Rng& rng, const GenLimits& limits = {});

// Rules and default entries; each is well-typed, though exact-table
// duplicates may still be rejected on insertion.
std::vector<RuleEntry> RandomRules(Rng& rng, const TargetConfig& config);

// Usually a header stack following a random parse path plus payload,
// sometimes truncated, sometimes uniform random bytes.
std::vector<uint8_t> RandomPacket(Rng& rng, const TargetConfig& config,
                                  size_t max_bytes = 256);

std::vector<uint8_t> RandomBytes(Rng& rng, size_t max_bytes);

}  // namespace p4mc::testing

#endif  // P4MC_TESTS_TESTING_PROGRAM_GEN_H_
