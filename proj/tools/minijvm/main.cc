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
// minijvm: runs every test*()V method of the test classes and writes one
// "<class>.<method> PASS|FAIL" line per test to the result file.
//
//   minijvm --cp classes --cp testlib --tests tests --out results.txt

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "jmut/classfile.h"
#include "jmut/errors.h"
#include "vm.h"

int main(int argc, char** argv) {
  CLI::App app{"Runs fixture tests on a small bytecode interpreter"};
  std::vector<std::string> classpath, test_dirs;
  std::string out_path = "jmut-results.txt";
  std::string filter;
  app.add_option("--cp", classpath, "Directory of classes under test")
      ->required();
  app.add_option("--tests", test_dirs, "Directory of test classes")->required();
  app.add_option("--out", out_path, "Result file");
  app.add_option("--filter", filter, "Run only tests whose id contains this");
  CLI11_PARSE(app, argc, argv);

  std::vector<std::filesystem::path> files;
  std::vector<std::string> test_classes;
  try {
    for (const auto& d : classpath) {
      for (auto& f : jmut::ListClassFiles(d)) files.push_back(f);
    }
    for (const auto& d : test_dirs) {
      for (auto& f : jmut::ListClassFiles(d)) {
        files.push_back(f);
        test_classes.push_back(jmut::ParseClass(jmut::ReadFileBytes(f)).name);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "minijvm: " << e.what() << "\n";
    return 2;
  }
  jmut::Project program;
  try {
    program = jmut::ParseProject(files);
  } catch (const std::exception& e) {
    std::cerr << "minijvm: " << e.what() << "\n";
    return 2;
  }
  std::sort(test_classes.begin(), test_classes.end());

  std::ofstream results(out_path);
  if (!results) {
    std::cerr << "minijvm: cannot write " << out_path << "\n";
    return 2;
  }
  minijvm::Vm vm(program, std::cout);
  bool all_pass = true;
  for (const auto& name : test_classes) {
    const jmut::Clazz* c = program.FindClass(name);
    for (const auto& m : c->methods) {
      if (!m.name.starts_with("test") || m.descriptor != "()V" ||
          m.is_static()) {
        continue;
      }
      std::string id = name + "." + m.name;
      std::replace(id.begin(), id.end(), '/', '.');
      if (!filter.empty() && id.find(filter) == std::string::npos) continue;
      bool pass = false;
      try {
        vm.RunTest(name, m.name);
        pass = true;
      } catch (const minijvm::Thrown& t) {
        std::cerr << id << ": " << vm.Describe(t.exception) << "\n";
      } catch (const std::exception& e) {
        std::cerr << id << ": internal error: " << e.what() << "\n";
      }
      results << id << (pass ? " PASS" : " FAIL") << "\n";
      results.flush();
      all_pass = all_pass && pass;
    }
  }
  return all_pass ? 0 : 1;
}
