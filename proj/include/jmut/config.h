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

#ifndef JMUT_CONFIG_H_
#define JMUT_CONFIG_H_

#include <filesystem>
#include <string>

#include "jmut/harness.h"

namespace jmut {

// Relative paths are resolved against `base_dir`. Throws ConfigError.
RunConfig ParseConfig(const std::string& text,
                      const std::filesystem::path& base_dir);
RunConfig LoadConfig(const std::filesystem::path& path);

// Parses "k=v,k=v" into parameter values; digits become integers.
ParamValues ParseParameterList(const std::string& text);

}  // namespace jmut

#endif  // JMUT_CONFIG_H_
