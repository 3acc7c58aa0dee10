// Copyright 2026 The latcf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <string>
#include <vector>

#include "latcf/experiment.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  latcf::cli::ParseResult parsed = latcf::cli::parse_args(args);
  if (parsed.show_help) {
    std::cout << parsed.help_text;
    return 0;
  }
  if (!parsed.errors.empty()) {
    for (const auto& e : parsed.errors) std::cerr << "error: " << e << '\n';
    return 2;
  }
  // With CSV on stdout, keep the summary out of the data stream.
  std::ostream& summary = parsed.cfg.out.empty() ? std::cerr : std::cout;
  return latcf::cli::run_experiment(parsed.cfg, summary, std::cerr);
}
