// Copyright 2026 The jmut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//
// jmut operators | mutate | run | report <path>
//
// Exit codes: 0 ok, 2 configuration error, 3 baseline failed, 4 I/O failure.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "jmut/catalog.h"
#include "jmut/classfile.h"
#include "jmut/config.h"
#include "jmut/errors.h"
#include "jmut/harness.h"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kBaselineFailed = 3;
constexpr int kIoError = 4;

struct Overrides {
  std::string config;
  std::string classes;
  std::string test_command;
  std::string result_file;
  std::optional<int> workers;
  std::optional<double> timeout_factor;
  std::optional<int64_t> timeout_floor_ms;
  std::vector<std::string> operators;
  std::string class_glob, method_glob;
  std::vector<std::string> params;
  std::vector<std::string> rules;
  std::string output;
  bool keep_workspaces = false;
};

void AddConfigFlags(CLI::App* cmd, Overrides& o, bool full) {
  cmd->add_option("-c,--config", o.config, "Config file (JSON)");
  cmd->add_option("--rules", o.rules, "Directory of user rule documents");
  if (!full) return;
  cmd->add_option("--classes", o.classes, "Classes directory");
  cmd->add_option("--test-command", o.test_command,
                  "Test command, split on whitespace");
  cmd->add_option("--result-file", o.result_file,
                  "Result file, relative to the workspace");
  cmd->add_option("-j,--workers", o.workers, "Parallel workers");
  cmd->add_option("--timeout-factor", o.timeout_factor,
                  "Multiple of the baseline time");
  cmd->add_option("--timeout-floor-ms", o.timeout_floor_ms, "Minimum timeout");
  cmd->add_option("-o,--operators", o.operators,
                  "Operator ids (comma separated)")
      ->delimiter(',');
  cmd->add_option("--class-glob", o.class_glob,
                  "Only classes matching this glob");
  cmd->add_option("--method-glob", o.method_glob,
                  "Only members matching this glob");
  cmd->add_option("--param", o.params, "Parameters as op:key=value,key=value");
  cmd->add_option("--output", o.output, "Output directory");
  cmd->add_flag("--keep-workspaces", o.keep_workspaces,
                "Keep mutant workspaces");
}

jmut::RunConfig BuildConfig(const Overrides& o) {
  jmut::RunConfig c = o.config.empty()
                          ? jmut::ParseConfig("{}", fs::current_path())
                          : jmut::LoadConfig(o.config);
  auto here = [](const std::string& p) {
    return fs::absolute(p).lexically_normal();
  };
  if (!o.classes.empty()) c.classes_dir = here(o.classes);
  if (!o.test_command.empty()) {
    std::istringstream in(o.test_command);
    c.test_command.clear();
    for (std::string w; in >> w;) c.test_command.push_back(w);
  }
  if (!o.result_file.empty()) c.result_file = o.result_file;
  if (o.workers) c.workers = *o.workers;
  if (o.timeout_factor) c.timeout_factor = *o.timeout_factor;
  if (o.timeout_floor_ms) c.timeout_floor = jmut::Millis(*o.timeout_floor_ms);
  if (!o.operators.empty()) c.selection.operators = o.operators;
  if (!o.class_glob.empty()) c.selection.class_glob = o.class_glob;
  if (!o.method_glob.empty()) c.selection.method_glob = o.method_glob;
  for (const auto& p : o.params) {
    auto colon = p.find(':');
    if (colon == std::string::npos) {
      throw jmut::ConfigError("--param '" + p + "' is not op:key=value,...");
    }
    c.selection.parameters[p.substr(0, colon)].push_back(
        jmut::ParseParameterList(p.substr(colon + 1)));
  }
  for (const auto& r : o.rules) c.user_rule_dirs.push_back(here(r));
  if (!o.output.empty()) c.output_dir = here(o.output);
  if (o.keep_workspaces) c.keep_workspaces = true;
  return c;
}

jmut::Registry LoadRegistry(const jmut::RunConfig& c) {
  jmut::Registry r = jmut::Registry::Builtin();
  jmut::LoadUserRules(r, c.user_rule_dirs);
  return r;
}

int Operators(const Overrides& o) {
  jmut::RunConfig c = BuildConfig(o);
  jmut::Registry registry = LoadRegistry(c);
  auto list = registry.List();
  std::size_t width = 0;
  for (const auto* d : list) width = std::max(width, d->id.size());
  for (int k = 0; k < jmut::kCategoryCount; ++k) {
    auto cat = static_cast<jmut::Category>(k);
    std::cout << jmut::CategoryName(cat) << "\n";
    for (const auto* d : list) {
      if (d->category != cat) continue;
      std::string line = "  " + d->id +
                         std::string(width - d->id.size() + 2, ' ') +
                         d->description;
      if (!d->builtin) line += " [user]";
      auto params = d->required_parameters();
      if (!params.empty()) {
        line += " (parameters:";
        for (const auto& p : params) line += " " + p.name;
        line += ")";
      }
      std::cout << line << "\n";
    }
  }
  return kOk;
}

int Mutate(const Overrides& o) {
  jmut::RunConfig c = BuildConfig(o);
  c.Validate(false);
  jmut::Registry registry = LoadRegistry(c);
  jmut::Project project = jmut::ParseProjectDir(c.classes_dir);
  std::vector<std::string> warnings;
  auto mutants =
      jmut::GenerateMutants(project, registry, c.selection, &warnings);
  jmut::WriteMutants(mutants, c.output_dir);
  int invalid = 0;
  for (const auto& m : mutants) invalid += m.validity.valid() ? 0 : 1;
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  std::cout << mutants.size() << " mutants, " << mutants.size() - invalid
            << " valid, " << invalid << " invalid\n"
            << "index: " << (c.output_dir / "mutants" / "index.json").string()
            << "\n";
  return kOk;
}

int Run(const Overrides& o) {
  jmut::RunConfig c = BuildConfig(o);
  c.Validate(true);
  jmut::Registry registry = LoadRegistry(c);
  c.selection.Validate(registry);
  jmut::Harness harness(c);
  jmut::MutationReport report = harness.Run(registry);
  jmut::WriteMutants(report.mutants, c.output_dir);
  jmut::WriteReport(report, c.output_dir);
  std::cout << jmut::ReportText(report);
  std::cout << "\nreport: " << (c.output_dir / "report.json").string() << "\n";
  return kOk;
}

int Report(const std::string& path) {
  fs::path p = path;
  if (fs::is_directory(p)) p /= "report.json";
  std::ifstream in(p, std::ios::binary);
  if (!in) throw jmut::IoError("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  std::cout << jmut::ReportText(jmut::ParseReport(s.str()));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "jmut: mutation testing of JVM bytecode with graph rewriting rules"};
  app.require_subcommand(1);
  Overrides ops_flags, mutate_flags, run_flags;
  std::string report_path;
  auto* ops =
      app.add_subcommand("operators", "List the available mutation operators");
  AddConfigFlags(ops, ops_flags, false);
  auto* mutate =
      app.add_subcommand("mutate", "Generate mutants without running tests");
  AddConfigFlags(mutate, mutate_flags, true);
  auto* run =
      app.add_subcommand("run", "Run the test suite against every mutant");
  AddConfigFlags(run, run_flags, true);
  auto* report = app.add_subcommand("report", "Print a saved report");
  report->add_option("path", report_path, "report.json or its directory")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }
  try {
    if (*ops) return Operators(ops_flags);
    if (*mutate) return Mutate(mutate_flags);
    if (*run) return Run(run_flags);
    if (*report) return Report(report_path);
  } catch (const jmut::BaselineFailed& e) {
    std::cerr << "jmut: baseline failed: " << e.what() << "\n";
    if (!e.output().empty()) std::cerr << e.output() << "\n";
    return kBaselineFailed;
  } catch (const jmut::ConfigError& e) {
    std::cerr << "jmut: " << e.what() << "\n";
    return kConfigError;
  } catch (const jmut::RuleSyntaxError& e) {
    std::cerr << "jmut: rule syntax error " << e.what() << "\n";
    return kConfigError;
  } catch (const jmut::IllFormedRule& e) {
    std::cerr << "jmut: ill-formed rule: " << e.what() << "\n";
    return kConfigError;
  } catch (const jmut::UnknownOperator& e) {
    std::cerr << "jmut: " << e.what() << "\n";
    return kConfigError;
  } catch (const jmut::DuplicateOperatorId& e) {
    std::cerr << "jmut: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "jmut: " << e.what() << "\n";
    return kIoError;
  }
  return kConfigError;
}
