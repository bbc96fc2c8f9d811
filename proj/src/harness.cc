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

#include "jmut/harness.h"

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <ctime>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "jmut/classfile.h"
#include "jmut/errors.h"

extern char** environ;

namespace jmut {

namespace fs = std::filesystem;

namespace {

std::string Dotted(std::string s) {
  std::replace(s.begin(), s.end(), '/', '.');
  return s;
}

std::string ReadText(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string Substitute(
    std::string arg,
    const std::vector<std::pair<std::string, std::string>>& vars) {
  for (const auto& [key, value] : vars) {
    for (std::size_t at = arg.find(key); at != std::string::npos;
         at = arg.find(key, at + value.size())) {
      arg.replace(at, key.size(), value);
    }
  }
  return arg;
}

bool IsDeepType(ElementType t) { return t == ElementType::kInstruction; }
bool IsMemberType(ElementType t) {
  return t == ElementType::kMethod || t == ElementType::kField;
}

// Picks the element the rule changes: nodes it deletes, then nodes it
// rewrites, then nodes touching edges it deletes or creates, then any.
MatchDescriptor Describe(const Rule& rule, const Match& match) {
  std::vector<std::vector<const ElementKey*>> tiers(4);
  std::set<std::string> edge_nodes;
  for (const auto& e : rule.edges) {
    if (e.role != Role::kPreserve) {
      edge_nodes.insert(e.from);
      edge_nodes.insert(e.to);
    }
  }
  for (const auto& [node, key] : match.binding) {
    const PatternNode* n = rule.FindNode(node);
    if (!n || key.class_name.empty()) continue;
    int tier = 3;
    if (n->role == Role::kDelete) {
      tier = 0;
    } else if (!n->sets.empty()) {
      tier = 1;
    } else if (edge_nodes.count(node)) {
      tier = 2;
    }
    tiers[tier].push_back(&key);
  }
  MatchDescriptor d;
  for (const auto& tier : tiers) {
    if (tier.empty()) continue;
    const ElementKey* best = nullptr;
    for (const ElementKey* k : tier) {
      auto depth = [](const ElementKey* x) {
        return IsDeepType(x->type) ? 2 : IsMemberType(x->type) ? 1 : 0;
      };
      if (!best || depth(k) > depth(best)) best = k;
    }
    d.class_name = best->class_name;
    if (!best->member_name.empty()) {
      d.member = best->member_name + best->member_descriptor;
    }
    if (IsDeepType(best->type)) {
      std::size_t lo = best->insn_index, hi = best->insn_index;
      for (const ElementKey* k : tier) {
        if (IsDeepType(k->type) && k->class_name == best->class_name &&
            k->member_name == best->member_name &&
            k->member_descriptor == best->member_descriptor) {
          lo = std::min(lo, k->insn_index);
          hi = std::max(hi, k->insn_index);
        }
      }
      d.insn_range = std::make_pair(lo, hi);
    }
    break;
  }
  return d;
}

std::optional<int> SourceLine(const Project& project,
                              const MatchDescriptor& d) {
  const Clazz* c = project.FindClass(d.class_name);
  if (!c || d.member.empty()) return std::nullopt;
  for (const auto& m : c->methods) {
    if (m.name + m.descriptor != d.member || m.instructions.empty()) continue;
    std::size_t at = d.insn_range ? d.insn_range->first : 0;
    if (at >= m.instructions.size()) return std::nullopt;
    if (auto line = LineOf(m, m.instructions[at].id)) return *line;
    // Before the first line entry: use the method's first line.
    if (auto line = LineOf(m, m.instructions.back().id)) return *line;
  }
  return std::nullopt;
}

std::string MemberName(const std::string& member) {
  return member.substr(0, member.find('('));
}

void Emit(const Project& original, const Project& mutated, Mutant& mutant) {
  for (const auto& c : mutated.classes) {
    const Clazz* before = original.FindClass(c.name);
    if (before && *before == c) continue;
    try {
      mutant.class_bytes[c.name] = EmitClass(mutated, c);
    } catch (const Error& e) {
      Violation v;
      v.constraint = "C5";
      v.location.class_name = c.name;
      v.message = std::string("class cannot be emitted: ") + e.what();
      mutant.validity.violations.push_back(std::move(v));
    }
  }
  for (const auto& c : original.classes) {
    if (!mutated.FindClass(c.name)) mutant.deleted_classes.push_back(c.name);
  }
  if (!mutant.validity.valid()) mutant.class_bytes.clear();
}

}  // namespace

void RunConfig::Validate(bool run) const {
  std::error_code ec;
  if (classes_dir.empty()) throw ConfigError("classesDir is not set");
  if (!fs::is_directory(classes_dir, ec)) {
    throw ConfigError("classesDir " + classes_dir.string() +
                      " is not a directory");
  }
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (!(timeout_factor > 0))
    throw ConfigError("timeoutFactor must be positive");
  if (timeout_floor.count() < 0)
    throw ConfigError("timeoutFloorMs must not be negative");
  if (run && test_command.empty()) throw ConfigError("testCommand is empty");
  if (fs::path(result_file).is_absolute() || result_file.empty()) {
    throw ConfigError("resultFile must be a relative path");
  }
  if (output_dir.empty()) throw ConfigError("outputDir is not set");
}

std::string MatchDescriptor::ToString() const {
  std::string s = Dotted(class_name);
  if (!member.empty()) s += "." + member;
  if (insn_range) {
    s += "[" + std::to_string(insn_range->first) + ".." +
         std::to_string(insn_range->second) + "]";
  }
  return s;
}

const char* StatusName(Status s) {
  switch (s) {
    case Status::kKilled:
      return "killed";
    case Status::kLive:
      return "live";
    case Status::kTimeout:
      return "timeout";
    case Status::kInvalid:
      return "invalid";
  }
  return "?";
}

std::optional<Status> StatusFromName(std::string_view name) {
  for (Status s :
       {Status::kKilled, Status::kLive, Status::kTimeout, Status::kInvalid}) {
    if (name == StatusName(s)) return s;
  }
  return std::nullopt;
}

std::string Score::ToString() const {
  return std::to_string(numerator) + "/" + std::to_string(denominator);
}

std::optional<Score> ComputeScore(const std::vector<Outcome>& outcomes) {
  Score s{0, 0};
  for (const auto& o : outcomes) {
    if (o.status == Status::kInvalid) continue;
    if (o.status != Status::kLive) ++s.numerator;
    ++s.denominator;
  }
  if (s.denominator == 0) return std::nullopt;
  return s;
}

Counts MutationReport::counts() const {
  Counts c;
  c.generated = static_cast<int>(mutants.size());
  for (const auto& o : outcomes) {
    switch (o.status) {
      case Status::kKilled:
        ++c.killed;
        break;
      case Status::kLive:
        ++c.live;
        break;
      case Status::kTimeout:
        ++c.timed_out;
        break;
      case Status::kInvalid:
        ++c.invalid;
        break;
    }
  }
  return c;
}

void LoadUserRules(Registry& registry, const std::vector<fs::path>& dirs) {
  for (const auto& dir : dirs) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
      throw ConfigError("user rule directory " + dir.string() +
                        " does not exist");
    }
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.is_regular_file() && e.path().extension() == ".json") {
        files.push_back(e.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      try {
        registry.RegisterUserOperatorFile(f);
      } catch (const RuleSyntaxError& e) {
        throw RuleSyntaxError(e.position(),
                              f.string() + ": " +
                                  std::string(e.what()).substr(
                                      std::string(e.what()).find(": ") + 2));
      } catch (const IllFormedRule& e) {
        throw IllFormedRule(f.string() + ": " + e.what());
      }
    }
  }
}

std::vector<Mutant> GenerateMutants(const Project& project,
                                    const Registry& registry,
                                    const OperatorSelection& selection,
                                    std::vector<std::string>* warnings) {
  selection.Validate(registry);
  std::vector<Mutant> out;
  std::set<std::string> seen;
  for (const auto& id : selection.operators) {
    if (!seen.insert(id).second) continue;
    const OperatorDescriptor& d = registry.Get(id);
    std::vector<ParamValues> sets{ParamValues{}};
    if (auto it = selection.parameters.find(id);
        it != selection.parameters.end()) {
      sets = it->second;
    } else if (!d.required_parameters().empty()) {
      if (warnings) {
        warnings->push_back(
            id + ": skipped, it needs parameters and none were given");
      }
      continue;
    }
    const Rule& entry = d.entry_rule();
    for (const auto& params : sets) {
      for (const auto& m : FindMatches(entry, project, params)) {
        MatchDescriptor where = Describe(entry, m);
        if (!selection.ClassInScope(where.class_name)) continue;
        if (!where.member.empty() &&
            !selection.MethodInScope(MemberName(where.member))) {
          continue;
        }
        Project mutated;
        try {
          mutated = d.is_unit() ? ApplyUnitFrom(*d.document.unit,
                                                d.document.rules, project, m)
                                : ApplyMatch(entry, m, project);
        } catch (const UnitStepFailed&) {
          continue;  // the unit cannot complete here: no mutation
        }
        Mutant mutant;
        mutant.id = static_cast<int>(out.size()) + 1;
        mutant.operator_id = id;
        mutant.parameters = params;
        mutant.match = where;
        mutant.source_line = SourceLine(project, where);
        mutant.validity = CheckMutant(project, mutated);
        Emit(project, mutated, mutant);
        out.push_back(std::move(mutant));
      }
    }
  }
  return out;
}

std::optional<TestResults> ParseResultFile(const std::string& text) {
  TestResults r;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream fields(line);
    std::string id, verdict, extra;
    if (!(fields >> id >> verdict) || (fields >> extra)) return std::nullopt;
    if (verdict != "PASS" && verdict != "FAIL") return std::nullopt;
    r.tests.emplace_back(id, verdict == "PASS");
  }
  return r;
}

std::string Utf8Tail(const std::string& text, std::size_t limit) {
  if (text.size() <= limit) return text;
  std::size_t at = text.size() - limit;
  while (at < text.size() &&
         (static_cast<unsigned char>(text[at]) & 0xC0) == 0x80) {
    ++at;
  }
  return text.substr(at);
}

Harness::Harness(RunConfig config) : config_(std::move(config)) {}

fs::path Harness::MakeWorkspace(const std::string& name, const Mutant* mutant) {
  fs::path ws = config_.output_dir / "workspaces" / name;
  try {
    fs::remove_all(ws);
    fs::create_directories(ws / ".jmut");
    fs::copy(config_.classes_dir, ws / "classes", fs::copy_options::recursive);
    if (mutant) {
      for (const auto& [cls, bytes] : mutant->class_bytes) {
        WriteFileBytes(ws / "classes" / (cls + ".class"), bytes);
      }
      for (const auto& cls : mutant->deleted_classes) {
        fs::remove(ws / "classes" / (cls + ".class"));
      }
    }
  } catch (const fs::filesystem_error& e) {
    throw WorkspaceError(std::string("workspace ") + ws.string() + ": " +
                         e.what());
  } catch (const IoError& e) {
    throw WorkspaceError(std::string("workspace ") + ws.string() + ": " +
                         e.what());
  }
  return ws;
}

CommandResult Harness::RunCommand(const fs::path& workspace, Millis timeout) {
  const std::vector<std::pair<std::string, std::string>> vars = {
      {"{classes}", (workspace / "classes").string()},
      {"{workspace}", workspace.string()},
      {"{configDir}", config_.config_dir.string()},
  };
  std::vector<std::string> argv_s;
  for (const auto& a : config_.test_command)
    argv_s.push_back(Substitute(a, vars));
  std::vector<char*> argv;
  for (auto& a : argv_s) argv.push_back(a.data());
  argv.push_back(nullptr);

  std::vector<std::string> env_s;
  for (char** e = environ; *e; ++e) {
    std::string_view kv(*e);
    if (kv.starts_with("JMUT_CLASSES_DIR=") ||
        kv.starts_with("JMUT_WORKSPACE="))
      continue;
    env_s.emplace_back(kv);
  }
  env_s.push_back("JMUT_CLASSES_DIR=" + (workspace / "classes").string());
  env_s.push_back("JMUT_WORKSPACE=" + workspace.string());
  std::vector<char*> envp;
  for (auto& e : env_s) envp.push_back(e.data());
  envp.push_back(nullptr);

  const fs::path out_path = workspace / ".jmut" / "stdout";
  const fs::path err_path = workspace / ".jmut" / "stderr";
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, 0, "/dev/null", O_RDONLY, 0);
  posix_spawn_file_actions_addopen(&actions, 1, out_path.c_str(),
                                   O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_addopen(&actions, 2, err_path.c_str(),
                                   O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_addchdir_np(&actions, workspace.c_str());
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);

  CommandResult r;
  auto start = std::chrono::steady_clock::now();
  pid_t pid = 0;
  int rc =
      posix_spawnp(&pid, argv[0], &actions, &attr, argv.data(), envp.data());
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  if (rc != 0) {
    r.stderr_text = "cannot start " + argv_s[0] + ": " + std::strerror(rc);
    r.exit_code = 127;
    return r;
  }
  int status = 0;
  auto deadline = start + timeout;
  while (true) {
    pid_t w = waitpid(pid, &status, WNOHANG);
    if (w == pid) break;
    if (w < 0 && errno != EINTR) break;
    if (std::chrono::steady_clock::now() >= deadline) {
      kill(-pid, SIGKILL);
      waitpid(pid, &status, 0);
      r.timed_out = true;
      break;
    }
    std::this_thread::sleep_for(Millis(5));
  }
  kill(-pid, SIGKILL);  // stragglers in the group
  r.wall_time = std::chrono::duration_cast<Millis>(
      std::chrono::steady_clock::now() - start);
  if (!r.timed_out && WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  r.stdout_text = ReadText(out_path);
  r.stderr_text += ReadText(err_path);
  const fs::path result = workspace / config_.result_file;
  std::error_code ec;
  if (fs::is_regular_file(result, ec)) r.result_file = ReadText(result);
  return r;
}

BaselineResult Harness::RunBaseline() {
  fs::path ws = MakeWorkspace("baseline", nullptr);
  CommandResult r = RunCommand(ws, config_.baseline_timeout);
  if (!config_.keep_workspaces) fs::remove_all(ws);
  std::string output =
      Utf8Tail(r.stdout_text, 4096) + Utf8Tail(r.stderr_text, 4096);
  if (r.timed_out) {
    throw BaselineFailed("baseline timed out after " +
                             std::to_string(config_.baseline_timeout.count()) +
                             " ms",
                         output);
  }
  if (!r.result_file) {
    throw BaselineFailed("test command exited with " +
                             std::to_string(r.exit_code) + " without writing " +
                             config_.result_file,
                         output);
  }
  auto parsed = ParseResultFile(*r.result_file);
  if (!parsed)
    throw BaselineFailed("malformed result file " + config_.result_file,
                         output);
  BaselineResult b;
  std::vector<std::string> failing;
  for (const auto& [id, pass] : parsed->tests) {
    b.tests.push_back(id);
    if (!pass) failing.push_back(id);
  }
  if (!failing.empty()) {
    std::string list;
    for (const auto& f : failing) list += (list.empty() ? "" : ", ") + f;
    throw BaselineFailed("failing tests on the unmutated classes: " + list,
                         output);
  }
  if (r.exit_code != 0) {
    throw BaselineFailed(
        "test command exited with " + std::to_string(r.exit_code), output);
  }
  b.passed = true;
  b.test_count = static_cast<int>(b.tests.size());
  b.wall_time = r.wall_time;
  return b;
}

Millis Harness::MutantTimeout(const BaselineResult& baseline) const {
  auto scaled = Millis(static_cast<int64_t>(
      std::ceil(config_.timeout_factor *
                static_cast<double>(baseline.wall_time.count()))));
  return std::max(config_.timeout_floor, scaled);
}

Outcome Harness::Execute(const Mutant& mutant, const BaselineResult& baseline,
                         Millis timeout) {
  Outcome o;
  o.mutant_id = mutant.id;
  if (!mutant.validity.valid()) {
    o.status = Status::kInvalid;
    o.reason = "invalid";
    return o;
  }
  fs::path ws = MakeWorkspace("mutant-" + std::to_string(mutant.id), &mutant);
  CommandResult r = RunCommand(ws, timeout);
  if (!config_.keep_workspaces) {
    std::error_code ec;
    fs::remove_all(ws, ec);
  }
  o.stdout_tail = Utf8Tail(r.stdout_text, 2048);
  o.stderr_tail = Utf8Tail(r.stderr_text, 2048);
  o.wall_time = r.wall_time;
  if (r.timed_out) {
    o.status = Status::kTimeout;
    o.reason = "timeout";
    return o;
  }
  o.status = Status::kKilled;
  std::optional<TestResults> parsed;
  if (r.result_file) parsed = ParseResultFile(*r.result_file);
  if (!parsed) {
    o.reason = "abnormal";
    return o;
  }
  std::set<std::string> passed;
  for (const auto& [id, pass] : parsed->tests) {
    if (pass) {
      passed.insert(id);
    } else {
      o.killing_tests.push_back(id);
    }
  }
  if (!o.killing_tests.empty()) {
    o.reason = "test-failure";
    return o;
  }
  for (const auto& t : baseline.tests) {
    if (!passed.count(t)) o.killing_tests.push_back(t);
  }
  if (!o.killing_tests.empty() || r.exit_code != 0) {
    o.reason = "abnormal";
    return o;
  }
  o.status = Status::kLive;
  return o;
}

std::vector<Outcome> Harness::ExecuteAll(const std::vector<Mutant>& mutants,
                                         const BaselineResult& baseline) {
  std::vector<Outcome> out(mutants.size());
  const Millis timeout = MutantTimeout(baseline);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= mutants.size()) return;
      try {
        out[i] = Execute(mutants[i], baseline, timeout);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = mutants.size();
      }
    }
  };
  std::size_t n =
      std::min<std::size_t>(static_cast<std::size_t>(config_.workers),
                            std::max<std::size_t>(mutants.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < n; ++k) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace {
std::string Now() {
  auto t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}
}  // namespace

MutationReport Harness::Run(const Registry& registry) {
  MutationReport report;
  report.started_at = Now();
  Project project = ParseProjectDir(config_.classes_dir);
  report.baseline = RunBaseline();
  report.mutants =
      GenerateMutants(project, registry, config_.selection, &report.warnings);
  report.outcomes = ExecuteAll(report.mutants, report.baseline);
  report.finished_at = Now();
  if (!config_.keep_workspaces) {
    std::error_code ec;
    fs::remove_all(config_.output_dir / "workspaces", ec);
  }
  return report;
}

}  // namespace jmut
