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

#ifndef JMUT_HARNESS_H_
#define JMUT_HARNESS_H_

#include <chrono>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jmut/catalog.h"
#include "jmut/model.h"
#include "jmut/validity.h"

namespace jmut {

using Millis = std::chrono::milliseconds;

struct RunConfig {
  std::filesystem::path classes_dir;
  // {classes}, {workspace} and {configDir} are substituted in each element.
  std::vector<std::string> test_command;
  std::string result_file = "jmut-results.txt";  // relative to the workspace
  int workers = 1;
  double timeout_factor = 10.0;
  Millis timeout_floor{2000};
  Millis baseline_timeout{300000};
  OperatorSelection selection;
  std::vector<std::filesystem::path> user_rule_dirs;
  std::filesystem::path output_dir = "jmut-out";
  bool keep_workspaces = false;
  std::filesystem::path config_dir;  // for {configDir}

  // Throws ConfigError. `run` also needs a test command.
  void Validate(bool run) const;
};

struct MatchDescriptor {
  std::string class_name;
  std::string member;  // name + descriptor, empty for class-level matches
  std::optional<std::pair<std::size_t, std::size_t>> insn_range;  // inclusive
  std::string ToString() const;  // "pkg.Cls.member[3..5]"
};

struct Mutant {
  int id = 0;
  std::string operator_id;
  ParamValues parameters;  // the instantiation the mutant came from
  MatchDescriptor match;
  std::optional<int> source_line;
  std::map<std::string, std::vector<uint8_t>> class_bytes;  // changed classes
  std::vector<std::string> deleted_classes;
  ValidityReport validity;
};

enum class Status : uint8_t { kKilled, kLive, kTimeout, kInvalid };
const char* StatusName(Status s);
std::optional<Status> StatusFromName(std::string_view name);

struct Outcome {
  int mutant_id = 0;
  Status status = Status::kInvalid;
  std::string reason;  // "test-failure", "abnormal", "timeout", ""
  std::vector<std::string> killing_tests;
  std::string stdout_tail;
  std::string stderr_tail;
  Millis wall_time{0};
};

struct BaselineResult {
  bool passed = false;
  int test_count = 0;
  std::vector<std::string> tests;
  Millis wall_time{0};
};

// Exact (killed + timeout) / (killed + timeout + live), unreduced.
struct Score {
  int64_t numerator = 0;
  int64_t denominator = 1;
  double value() const {
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }
  std::string ToString() const;  // "5/7"
  bool operator==(const Score& o) const {
    return numerator * o.denominator == o.numerator * denominator;
  }
  std::strong_ordering operator<=>(const Score& o) const {
    return numerator * o.denominator <=> o.numerator * denominator;
  }
};

// nullopt when no mutant was scored ("no mutants generated").
std::optional<Score> ComputeScore(const std::vector<Outcome>& outcomes);

struct Counts {
  int generated = 0, killed = 0, live = 0, timed_out = 0, invalid = 0;
};

struct MutationReport {
  std::string started_at, finished_at;  // ISO-8601 UTC
  BaselineResult baseline;
  std::vector<Mutant> mutants;
  std::vector<Outcome> outcomes;  // parallel to mutants
  std::vector<std::string> warnings;

  Counts counts() const;
  std::optional<Score> score() const { return ComputeScore(outcomes); }
};

// Deterministic enumeration: operators in selection order, then parameter
// sets, then matches. Ids start at 1.
std::vector<Mutant> GenerateMutants(
    const Project& project, const Registry& registry,
    const OperatorSelection& selection,
    std::vector<std::string>* warnings = nullptr);

// Loads the operators in `dirs` (every *.json, sorted) into `registry`.
void LoadUserRules(Registry& registry,
                   const std::vector<std::filesystem::path>& dirs);

struct CommandResult {
  int exit_code = -1;  // -1 when killed by a signal or timed out
  bool timed_out = false;
  std::string stdout_text, stderr_text;
  std::optional<std::string> result_file;  // absent when not written
  Millis wall_time{0};
};

struct TestResults {
  std::vector<std::pair<std::string, bool>> tests;  // id, passed
};
// nullopt when a line is not "<id> PASS|FAIL".
std::optional<TestResults> ParseResultFile(const std::string& text);

class Harness {
 public:
  explicit Harness(RunConfig config);

  // Runs the suite on the unmutated classes. Throws BaselineFailed.
  BaselineResult RunBaseline();
  Millis MutantTimeout(const BaselineResult& baseline) const;
  // Mutants with an invalid verdict are not executed.
  Outcome Execute(const Mutant& mutant, const BaselineResult& baseline,
                  Millis timeout);
  std::vector<Outcome> ExecuteAll(const std::vector<Mutant>& mutants,
                                  const BaselineResult& baseline);

  // Baseline, generation, execution; writes nothing.
  MutationReport Run(const Registry& registry);

 private:
  std::filesystem::path MakeWorkspace(const std::string& name,
                                      const Mutant* mutant);
  CommandResult RunCommand(const std::filesystem::path& workspace,
                           Millis timeout);

  RunConfig config_;
};

// Writes <dir>/mutants/<id>/<class>.class for valid mutants and
// <dir>/mutants/index.json.
void WriteMutants(const std::vector<Mutant>& mutants,
                  const std::filesystem::path& dir);

std::string ReportJson(const MutationReport& report);
std::string ReportText(const MutationReport& report);
// Parses ReportJson output; class bytes are not stored in it.
MutationReport ParseReport(const std::string& json);
// Writes <dir>/report.json and <dir>/report.txt.
void WriteReport(const MutationReport& report,
                 const std::filesystem::path& dir);

std::string Utf8Tail(const std::string& text, std::size_t limit);

}  // namespace jmut

#endif  // JMUT_HARNESS_H_
