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

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "jmut/classfile.h"
#include "jmut/errors.h"
#include "jmut/harness.h"
#include "json.hpp"

namespace jmut {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kReportSchema = "jmut-report/1";
constexpr const char* kIndexSchema = "jmut-mutants/1";

std::string Dotted(std::string s) {
  std::replace(s.begin(), s.end(), '/', '.');
  return s;
}

std::string Fnv1a(const std::vector<uint8_t>& bytes) {
  uint64_t h = 14695981039346656037ULL;
  for (uint8_t b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json ValueJson(const Value& v) {
  if (const auto* i = std::get_if<int64_t>(&v)) return *i;
  return std::get<std::string>(v);
}

Json ParamsJson(const ParamValues& p) {
  Json j = Json::object();
  for (const auto& [k, v] : p) j[k] = ValueJson(v);
  return j;
}

std::string ClassPath(int id, const std::string& cls) {
  return "mutants/" + std::to_string(id) + "/" + cls + ".class";
}

Json LocationJson(const Mutant& m) {
  Json j;
  j["class"] = m.match.class_name;
  j["member"] = m.match.member.empty() ? Json(nullptr) : Json(m.match.member);
  if (m.match.insn_range) {
    j["instructions"] = {m.match.insn_range->first, m.match.insn_range->second};
  } else {
    j["instructions"] = nullptr;
  }
  j["sourceLine"] = m.source_line ? Json(*m.source_line) : Json(nullptr);
  return j;
}

Json ViolationsJson(const ValidityReport& v) {
  Json list = Json::array();
  for (const auto& x : v.violations) {
    list.push_back({{"constraint", x.constraint},
                    {"title", ConstraintTitle(x.constraint)},
                    {"location", x.location.ToString()},
                    {"message", x.message}});
  }
  return list;
}

Json MutantJson(const Mutant& m, const Outcome& o) {
  Json j;
  j["id"] = m.id;
  j["operator"] = m.operator_id;
  j["parameters"] = ParamsJson(m.parameters);
  j.update(LocationJson(m));
  Json changed = Json::array();
  for (const auto& [cls, bytes] : m.class_bytes) {
    changed.push_back({{"name", cls},
                       {"size", bytes.size()},
                       {"fnv1a64", Fnv1a(bytes)},
                       {"path", ClassPath(m.id, cls)}});
  }
  j["changedClasses"] = changed;
  j["deletedClasses"] = m.deleted_classes;
  j["validity"] = {{"verdict", m.validity.verdict()},
                   {"violations", ViolationsJson(m.validity)}};
  j["outcome"] = {
      {"status", StatusName(o.status)},  {"reason", o.reason},
      {"killingTests", o.killing_tests}, {"stdoutTail", o.stdout_tail},
      {"stderrTail", o.stderr_tail},     {"wallTimeMs", o.wall_time.count()}};
  return j;
}

std::string Dump(const Json& j) {
  return j.dump(2, ' ', false, Json::error_handler_t::replace) + "\n";
}

void WriteText(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw IoError("cannot write " + p.string());
}

std::string Pad(const std::string& s, std::size_t width, bool right = false) {
  if (s.size() >= width) return s;
  std::string fill(width - s.size(), ' ');
  return right ? fill + s : s + fill;
}

}  // namespace

std::string ReportJson(const MutationReport& report) {
  Json j;
  j["schema"] = kReportSchema;
  j["startedAt"] = report.started_at;
  j["finishedAt"] = report.finished_at;
  j["baseline"] = {{"passed", report.baseline.passed},
                   {"testCount", report.baseline.test_count},
                   {"tests", report.baseline.tests},
                   {"wallTimeMs", report.baseline.wall_time.count()}};
  Counts c = report.counts();
  j["counts"] = {{"generated", c.generated},
                 {"killed", c.killed},
                 {"live", c.live},
                 {"timedOut", c.timed_out},
                 {"invalid", c.invalid}};
  if (auto s = report.score()) {
    j["score"] = {{"numerator", s->numerator},
                  {"denominator", s->denominator},
                  {"value", s->value()}};
  } else {
    j["score"] = nullptr;
  }
  j["warnings"] = report.warnings;
  Json mutants = Json::array();
  for (std::size_t i = 0; i < report.mutants.size(); ++i) {
    mutants.push_back(MutantJson(report.mutants[i], report.outcomes.at(i)));
  }
  j["mutants"] = mutants;
  return Dump(j);
}

MutationReport ParseReport(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw IoError(std::string("report is not JSON: ") + e.what());
  }
  try {
    if (j.value("schema", "") != kReportSchema) {
      throw IoError("not a " + std::string(kReportSchema) + " document");
    }
    MutationReport r;
    r.started_at = j.at("startedAt").get<std::string>();
    r.finished_at = j.at("finishedAt").get<std::string>();
    const Json& b = j.at("baseline");
    r.baseline.passed = b.at("passed").get<bool>();
    r.baseline.test_count = b.at("testCount").get<int>();
    r.baseline.tests = b.at("tests").get<std::vector<std::string>>();
    r.baseline.wall_time = Millis(b.at("wallTimeMs").get<int64_t>());
    r.warnings = j.value("warnings", std::vector<std::string>{});
    for (const Json& m : j.at("mutants")) {
      Mutant mu;
      mu.id = m.at("id").get<int>();
      mu.operator_id = m.at("operator").get<std::string>();
      for (const auto& [k, v] : m.at("parameters").items()) {
        if (v.is_number_integer()) {
          mu.parameters[k] = v.get<int64_t>();
        } else {
          mu.parameters[k] = v.get<std::string>();
        }
      }
      mu.match.class_name = m.at("class").get<std::string>();
      if (!m.at("member").is_null())
        mu.match.member = m.at("member").get<std::string>();
      if (!m.at("instructions").is_null()) {
        mu.match.insn_range =
            std::make_pair(m.at("instructions")[0].get<std::size_t>(),
                           m.at("instructions")[1].get<std::size_t>());
      }
      if (!m.at("sourceLine").is_null())
        mu.source_line = m.at("sourceLine").get<int>();
      for (const Json& c : m.at("changedClasses")) {
        mu.class_bytes[c.at("name").get<std::string>()] = {};
      }
      mu.deleted_classes =
          m.at("deletedClasses").get<std::vector<std::string>>();
      for (const Json& v : m.at("validity").at("violations")) {
        Violation x;
        x.constraint = v.at("constraint").get<std::string>();
        x.location.class_name = v.at("location").get<std::string>();
        x.message = v.at("message").get<std::string>();
        mu.validity.violations.push_back(std::move(x));
      }
      const Json& o = m.at("outcome");
      Outcome out;
      out.mutant_id = mu.id;
      auto status = StatusFromName(o.at("status").get<std::string>());
      if (!status) throw IoError("unknown status in report");
      out.status = *status;
      out.reason = o.at("reason").get<std::string>();
      out.killing_tests = o.at("killingTests").get<std::vector<std::string>>();
      out.stdout_tail = o.at("stdoutTail").get<std::string>();
      out.stderr_tail = o.at("stderrTail").get<std::string>();
      out.wall_time = Millis(o.at("wallTimeMs").get<int64_t>());
      r.mutants.push_back(std::move(mu));
      r.outcomes.push_back(std::move(out));
    }
    return r;
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed report: ") + e.what());
  }
}

std::string ReportText(const MutationReport& report) {
  std::ostringstream s;
  Counts c = report.counts();
  s << "jmut mutation report\n";
  s << "started    " << report.started_at << "\n";
  s << "baseline   " << (report.baseline.passed ? "passed" : "failed") << ", "
    << report.baseline.test_count << " tests\n";
  s << "mutants    generated " << c.generated << ", killed " << c.killed
    << ", live " << c.live << ", timed out " << c.timed_out << ", invalid "
    << c.invalid << "\n";
  if (auto score = report.score()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", score->value());
    s << "score      " << score->ToString() << " = " << buf << "\n";
  } else {
    s << "score      no mutants generated\n";
  }
  for (const auto& w : report.warnings) s << "warning    " << w << "\n";
  if (report.mutants.empty()) return s.str();

  std::vector<std::vector<std::string>> rows;
  rows.push_back(
      {"id", "operator", "location", "line", "status", "killing test"});
  for (std::size_t i = 0; i < report.mutants.size(); ++i) {
    const Mutant& m = report.mutants[i];
    const Outcome& o = report.outcomes.at(i);
    std::string where = Dotted(m.match.class_name);
    if (!m.match.member.empty()) {
      where += "." + m.match.member.substr(0, m.match.member.find('('));
    }
    std::string status = StatusName(o.status);
    if (o.reason == "abnormal") status += " (abnormal)";
    std::string killer =
        o.killing_tests.empty() ? "-" : o.killing_tests.front();
    if (o.killing_tests.size() > 1) {
      killer += " (+" + std::to_string(o.killing_tests.size() - 1) + ")";
    }
    rows.push_back({std::to_string(m.id), m.operator_id, where,
                    m.source_line ? std::to_string(*m.source_line) : "-",
                    status, killer});
  }
  std::vector<std::size_t> width(rows[0].size(), 0);
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < r.size(); ++k)
      width[k] = std::max(width[k], r[k].size());
  }
  s << "\n";
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t k = 0; k < r.size(); ++k) {
      bool numeric = k == 0 || k == 3;
      std::string cell =
          k + 1 == r.size() ? r[k] : Pad(r[k], width[k], numeric);
      line += (k ? "  " : "") + cell;
    }
    s << line << "\n";
  }
  return s.str();
}

void WriteReport(const MutationReport& report, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  WriteText(dir / "report.json", ReportJson(report));
  WriteText(dir / "report.txt", ReportText(report));
}

void WriteMutants(const std::vector<Mutant>& mutants, const fs::path& dir) {
  const fs::path root = dir / "mutants";
  std::error_code ec;
  fs::remove_all(root, ec);
  fs::create_directories(root, ec);
  if (ec) throw IoError("cannot create " + root.string() + ": " + ec.message());
  Json valid = Json::array(), invalid = Json::array();
  for (const auto& m : mutants) {
    Json entry;
    entry["id"] = m.id;
    entry["operator"] = m.operator_id;
    entry["parameters"] = ParamsJson(m.parameters);
    entry.update(LocationJson(m));
    if (!m.validity.valid()) {
      entry["constraints"] = m.validity.Constraints();
      entry["violations"] = ViolationsJson(m.validity);
      invalid.push_back(entry);
      continue;
    }
    Json files = Json::array();
    for (const auto& [cls, bytes] : m.class_bytes) {
      WriteFileBytes(dir / ClassPath(m.id, cls), bytes);
      files.push_back(ClassPath(m.id, cls));
    }
    entry["files"] = files;
    entry["deletedClasses"] = m.deleted_classes;
    valid.push_back(entry);
  }
  Json index;
  index["schema"] = kIndexSchema;
  index["valid"] = valid;
  index["invalid"] = invalid;
  WriteText(root / "index.json", Dump(index));
}

}  // namespace jmut
