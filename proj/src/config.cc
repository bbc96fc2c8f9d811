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

#include "jmut/config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "jmut/errors.h"
#include "json.hpp"

namespace jmut {

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

const std::set<std::string>& Keys() {
  static const std::set<std::string> keys = {
      "classesDir",    "testCommand",    "resultFile",        "workers",
      "timeoutFactor", "timeoutFloorMs", "baselineTimeoutMs", "operators",
      "classGlob",     "methodGlob",     "parameters",        "userRuleDirs",
      "outputDir",     "keepWorkspaces",
  };
  return keys;
}

fs::path Resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

Value ParamValue(const std::string& key, const Json& v) {
  if (v.is_number_integer()) return v.get<int64_t>();
  if (v.is_string()) return v.get<std::string>();
  throw ConfigError("parameter '" + key + "' must be a string or an integer");
}

}  // namespace

RunConfig ParseConfig(const std::string& text, const fs::path& base_dir) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config at byte " + std::to_string(e.byte) + ": " +
                      e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (!Keys().count(k)) throw ConfigError("unknown config key '" + k + "'");
  }
  RunConfig c;
  c.config_dir = base_dir;
  try {
    if (j.contains("classesDir")) {
      c.classes_dir = Resolve(base_dir, j["classesDir"].get<std::string>());
    }
    if (j.contains("testCommand")) {
      c.test_command = j["testCommand"].get<std::vector<std::string>>();
    }
    c.result_file = j.value("resultFile", c.result_file);
    c.workers = j.value("workers", c.workers);
    c.timeout_factor = j.value("timeoutFactor", c.timeout_factor);
    c.timeout_floor =
        Millis(j.value("timeoutFloorMs", c.timeout_floor.count()));
    c.baseline_timeout =
        Millis(j.value("baselineTimeoutMs", c.baseline_timeout.count()));
    if (j.contains("operators")) {
      c.selection.operators = j["operators"].get<std::vector<std::string>>();
    }
    c.selection.class_glob = j.value("classGlob", "");
    c.selection.method_glob = j.value("methodGlob", "");
    if (j.contains("parameters")) {
      for (const auto& [id, sets] : j["parameters"].items()) {
        if (!sets.is_array())
          throw ConfigError("parameters." + id + " must be a list");
        auto& out = c.selection.parameters[id];
        for (const auto& set : sets) {
          ParamValues pv;
          for (const auto& [k, v] : set.items()) pv[k] = ParamValue(k, v);
          out.push_back(std::move(pv));
        }
      }
    }
    if (j.contains("userRuleDirs")) {
      for (const auto& d : j["userRuleDirs"].get<std::vector<std::string>>()) {
        c.user_rule_dirs.push_back(Resolve(base_dir, d));
      }
    }
    if (j.contains("outputDir")) {
      c.output_dir = Resolve(base_dir, j["outputDir"].get<std::string>());
    } else {
      c.output_dir = Resolve(base_dir, c.output_dir.string());
    }
    c.keep_workspaces = j.value("keepWorkspaces", false);
  } catch (const Json::type_error& e) {
    throw ConfigError(std::string("config has a value of the wrong type: ") +
                      e.what());
  }
  return c;
}

RunConfig LoadConfig(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  fs::path base = fs::absolute(path).parent_path();
  try {
    return ParseConfig(s.str(), base);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

ParamValues ParseParameterList(const std::string& text) {
  ParamValues out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("parameter '" + item + "' is not key=value");
    }
    std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    bool digits =
        !value.empty() &&
        value.find_first_not_of("0123456789", value[0] == '-' ? 1 : 0) ==
            std::string::npos &&
        value != "-";
    if (digits) {
      out[key] = static_cast<int64_t>(std::stoll(value));
    } else {
      out[key] = value;
    }
  }
  return out;
}

}  // namespace jmut
