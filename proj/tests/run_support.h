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

#ifndef JMUT_TESTS_RUN_SUPPORT_H_
#define JMUT_TESTS_RUN_SUPPORT_H_

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "jmut/harness.h"
#include "json.hpp"
#include "test_support.h"

namespace jmut::testing {

// A fresh directory under the build tree, removed first.
inline std::filesystem::path ScratchDir(const std::string& name) {
  auto dir = std::filesystem::path(JMUT_SCRATCH_DIR) /
             (name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// The fixture project run by minijvm: classes/ under mutation, the test
// classes of `test_areas` (tests/ by default) and testlib on the classpath.
inline RunConfig FixtureConfig(const std::string& project,
                               const std::vector<std::string>& operators,
                               const std::filesystem::path& out,
                               std::vector<std::string> test_areas = {"tests"},
                               const std::string& filter = "") {
  RunConfig c;
  c.classes_dir = Fixture(project) / "classes";
  c.test_command = {MINIJVM_BIN, "--cp", "{classes}", "--cp",
                    (Fixture("testlib") / "classes").string()};
  for (const auto& area : test_areas) {
    c.test_command.push_back("--tests");
    c.test_command.push_back((Fixture(project) / area).string());
  }
  if (!filter.empty()) {
    c.test_command.push_back("--filter");
    c.test_command.push_back(filter);
  }
  c.test_command.push_back("--out");
  c.test_command.push_back("jmut-results.txt");
  c.selection.operators = operators;
  c.output_dir = out;
  c.workers = 2;
  return c;
}

// Report JSON with every timestamp and duration field blanked.
inline std::string StripTimes(const std::string& report_json) {
  auto j = nlohmann::ordered_json::parse(report_json);
  std::function<void(nlohmann::ordered_json&)> walk =
      [&](nlohmann::ordered_json& v) {
        if (v.is_object()) {
          for (auto it = v.begin(); it != v.end(); ++it) {
            const std::string& k = it.key();
            if (k.ends_with("At") || k.ends_with("Ms")) {
              it.value() = nullptr;
            } else {
              walk(it.value());
            }
          }
        } else if (v.is_array()) {
          for (auto& x : v) walk(x);
        }
      };
  walk(j);
  return j.dump(2);
}

inline std::string ReadAll(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Path -> content of every regular file below `dir`.
inline std::map<std::string, std::string> Snapshot(
    const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) {
      out[std::filesystem::relative(e.path(), dir).string()] =
          ReadAll(e.path());
    }
  }
  return out;
}

}  // namespace jmut::testing

#endif  // JMUT_TESTS_RUN_SUPPORT_H_
