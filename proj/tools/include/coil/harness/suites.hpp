// Copyright 2026 The COIL Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COIL_HARNESS_SUITES_HPP_
#define COIL_HARNESS_SUITES_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace coil::harness {

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::size_t trials = 0;
  std::size_t failures = 0;
  // Largest observed error or statistic, for the report.
  double worst = 0.0;
  std::string detail;
};

struct SuiteOptions {
  std::uint64_t seed = 0;
  // Overrides the suite's default trial count.
  std::optional<std::size_t> trials;
};

// Names accepted by run_suite, plus "all".
std::vector<std::string> suite_names();
bool suite_exists(const std::string& name);

// Runs one named suite; "all" is handled by the caller.
SuiteResult run_suite(const std::string& name, const SuiteOptions& options);

// Report as a JSON document.
std::string suites_to_json(const std::vector<SuiteResult>& results);

}  // namespace coil::harness

#endif  // COIL_HARNESS_SUITES_HPP_
