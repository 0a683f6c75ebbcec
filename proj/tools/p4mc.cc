// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

// p4mc: compile, analyze and run packet-processing programs.
//
//   p4mc compile prog.p4 -o prog.json
//   p4mc check prog.p4
//   p4mc tdg prog.p4 [--dot prog.dot]
//   p4mc run prog.json --rules rules.json --packets packets.txt [--staged]
//
// Exit status: 0 on success, 1 on program/rule/config errors, 2 on I/O errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "p4mc/engine.h"
#include "p4mc/frontend.h"
#include "p4mc/parser_compiler.h"
#include "p4mc/rules_io.h"
#include "p4mc/semantics.h"
#include "p4mc/status.h"
#include "p4mc/target_config.h"
#include "p4mc/tdg.h"

namespace p4mc {
namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kIoError = 2;

bool ReadFile(const std::string& path, std::string* out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << path << ": error: cannot read file\n";
    return false;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  *out = buf.str();
  return true;
}

bool WriteFile(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (out) out << data;
  if (!out) {
    std::cerr << path << ": error: cannot write file\n";
    return false;
  }
  return true;
}

void Report(const std::string& origin, const absl::Status& status) {
  std::vector<Diagnostic> diags = GetDiagnostics(status);
  if (diags.empty()) {
    std::cerr << origin << ": error: " << status.message() << "\n";
    return;
  }
  for (const Diagnostic& d : diags) std::cerr << d.Format(origin) << "\n";
}

struct Compiled {
  ast::Ast ast;
  CheckedProgram program;
  ParserProgram parser;
  Tdg tdg;
  StageAssignment stages;
};

// Runs the front half of the compiler; prints diagnostics on failure.
std::optional<Compiled> CompileFile(const std::string& path, int* exit_code) {
  std::string text;
  if (!ReadFile(path, &text)) {
    *exit_code = kIoError;
    return std::nullopt;
  }
  *exit_code = kFailed;
  Compiled c;
  absl::StatusOr<ast::Ast> ast = ParseProgram(SourceProgram{text, path});
  if (!ast.ok()) {
    Report(path, ast.status());
    return std::nullopt;
  }
  c.ast = *std::move(ast);
  absl::StatusOr<CheckedProgram> program = Check(c.ast);
  if (!program.ok()) {
    Report(path, program.status());
    return std::nullopt;
  }
  c.program = *std::move(program);
  for (const ActionHazard& h : ValidateActionParallelism(c.program)) {
    Diagnostic d;
    d.severity = Severity::kWarning;
    d.message = h.ToString();
    for (const ast::ActionDecl& a : c.ast.actions) {
      if (a.name == h.action && h.second < static_cast<int>(a.body.size())) {
        d.span = a.body[h.second].span;
      }
    }
    std::cerr << d.Format(path) << "\n";
  }
  absl::StatusOr<ParserProgram> parser = CompileParser(c.program);
  if (!parser.ok()) {
    Report(path, parser.status());
    return std::nullopt;
  }
  c.parser = *std::move(parser);
  c.tdg = BuildTdg(c.program);
  absl::StatusOr<StageAssignment> stages = AssignStages(c.tdg);
  if (!stages.ok()) {
    Report(path, stages.status());
    return std::nullopt;
  }
  c.stages = *std::move(stages);
  *exit_code = kOk;
  return c;
}

int Compile(const std::string& source, const std::string& output) {
  int code = kOk;
  std::optional<Compiled> c = CompileFile(source, &code);
  if (!c.has_value()) return code;
  absl::StatusOr<TargetConfig> config =
      Emit(c->program, c->parser, c->tdg, c->stages);
  if (!config.ok()) {
    Report(source, config.status());
    return kFailed;
  }
  if (!WriteFile(output, Serialize(*config))) return kIoError;
  return kOk;
}

int CheckOnly(const std::string& source) {
  int code = kOk;
  std::optional<Compiled> c = CompileFile(source, &code);
  if (!c.has_value()) return code;
  absl::StatusOr<TargetConfig> config =
      Emit(c->program, c->parser, c->tdg, c->stages);
  if (!config.ok()) {
    Report(source, config.status());
    return kFailed;
  }
  return kOk;
}

int ShowTdg(const std::string& source, const std::string& dot) {
  int code = kOk;
  std::optional<Compiled> c = CompileFile(source, &code);
  if (!c.has_value()) return code;
  const Tdg& tdg = c->tdg;
  size_t width = 4;
  for (const TdgNode& n : tdg.nodes) width = std::max(width, n.name.size());
  std::printf("%-*s  stage  incoming\n", static_cast<int>(width), "node");
  for (size_t i = 0; i < tdg.nodes.size(); ++i) {
    std::vector<std::string> incoming;
    for (const TdgEdge& e : tdg.edges) {
      if (e.to == static_cast<int>(i)) {
        incoming.push_back(absl::StrCat(DependencyKindName(e.kind), "(",
                                        tdg.nodes[e.from].name, ")"));
      }
    }
    std::printf("%-*s  %-5d  %s\n", static_cast<int>(width),
                tdg.nodes[i].name.c_str(), c->stages.stage[i],
                incoming.empty() ? "-" : absl::StrJoin(incoming, " ").c_str());
  }
  std::printf("depth %d\n", c->stages.depth);
  if (!dot.empty() && !WriteFile(dot, ExportDot(tdg, c->stages))) return kIoError;
  return kOk;
}

struct RunOptions {
  std::string config;
  std::string rules;
  std::string packets;
  std::string trace;
  int port = 0;
  bool staged = false;
};

int Run(const RunOptions& opt) {
  std::string config_text, rules_text, packets_text;
  if (!ReadFile(opt.config, &config_text)) return kIoError;
  if (!opt.rules.empty() && !ReadFile(opt.rules, &rules_text)) return kIoError;
  if (!ReadFile(opt.packets, &packets_text)) return kIoError;

  absl::StatusOr<Switch> sw = Switch::FromConfigBytes(config_text);
  if (!sw.ok()) {
    Report(opt.config, sw.status());
    return kFailed;
  }
  if (!opt.rules.empty()) {
    absl::StatusOr<std::vector<RuleEntry>> rules = ParseRules(rules_text);
    if (!rules.ok()) {
      Report(opt.rules, rules.status());
      return kFailed;
    }
    std::vector<std::string> errors = InstallRules(&*sw, *rules);
    if (!errors.empty()) {
      for (const std::string& e : errors) {
        std::cerr << opt.rules << ": error: " << e << "\n";
      }
      return kFailed;
    }
  }
  absl::StatusOr<std::vector<PacketInput>> packets = ParsePackets(packets_text);
  if (!packets.ok()) {
    Report(opt.packets, packets.status());
    return kFailed;
  }

  std::ofstream trace;
  if (!opt.trace.empty()) {
    trace.open(opt.trace, std::ios::binary | std::ios::trunc);
    if (!trace) {
      std::cerr << opt.trace << ": error: cannot write file\n";
      return kIoError;
    }
  }
  for (size_t i = 0; i < packets->size(); ++i) {
    const PacketInput& p = (*packets)[i];
    int port = p.port.value_or(opt.port);
    absl::StatusOr<Verdict> v = opt.staged ? sw->ProcessPacketStaged(port, p.bytes)
                                           : sw->ProcessPacket(port, p.bytes);
    if (!v.ok()) {
      Report(opt.config, v.status());
      return kFailed;
    }
    std::cout << FormatVerdict(*v) << "\n";
    if (trace.is_open()) {
      for (const TraceEvent& ev : v->trace) {
        std::string json = ev.ToJson();
        trace << "{\"packet\":" << i + 1 << "," << json.substr(1) << "\n";
      }
    }
  }
  std::cout.flush();
  if (trace.is_open()) {
    trace.flush();
    if (!trace) {
      std::cerr << opt.trace << ": error: cannot write file\n";
      return kIoError;
    }
  }
  return kOk;
}

}  // namespace
}  // namespace p4mc

int main(int argc, char** argv) {
  CLI::App app{"p4mc: compiler and software switch for P4 programs"};
  app.require_subcommand(1);

  std::string source, output, dot;
  CLI::App* compile = app.add_subcommand("compile", "compile a program to a target configuration");
  compile->add_option("source", source, "program source")->required();
  compile->add_option("-o,--output", output, "configuration output path")->required();

  CLI::App* check = app.add_subcommand("check", "check a program without writing output");
  check->add_option("source", source, "program source")->required();

  CLI::App* tdg = app.add_subcommand("tdg", "print the table dependency graph and stages");
  tdg->add_option("source", source, "program source")->required();
  tdg->add_option("--dot", dot, "write the graph in DOT format");

  p4mc::RunOptions run_opt;
  CLI::App* run = app.add_subcommand("run", "process packets with a compiled configuration");
  run->add_option("config", run_opt.config, "target configuration")->required();
  run->add_option("--rules", run_opt.rules, "rules file (JSON)");
  run->add_option("--packets", run_opt.packets, "packets file (hex per line)")->required();
  run->add_option("--port", run_opt.port, "default ingress port");
  run->add_option("--trace", run_opt.trace, "write JSON-lines trace");
  run->add_flag("--staged", run_opt.staged, "use the staged pipeline executor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : p4mc::kIoError;
  }
  if (*compile) return p4mc::Compile(source, output);
  if (*check) return p4mc::CheckOnly(source);
  if (*tdg) return p4mc::ShowTdg(source, dot);
  return p4mc::Run(run_opt);
}
