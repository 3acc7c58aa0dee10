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

#ifndef LATCF_EXPERIMENT_HPP
#define LATCF_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace latcf::cli {

// Experiment front end shared by the CLI binary and the test suites.
// Subcommands: rates, rd-curve, wz-sim, cf-sim. Values come from, in rising
// precedence: built-in defaults, a flat key=value config file, the
// LATCF_SEED environment variable (seed only), command-line flags.

enum class Command { none, rates, rd_curve, wz_sim, cf_sim };

const char* command_name(Command c);

struct SweepSpec {
  bool active = false;
  std::string param;
  double start = 0.0;
  double stop = 0.0;
  int steps = 1;
};

struct ExperimentConfig {
  Command cmd = Command::none;

  // Shared parameter record. The Wyner-Ziv family reads P, N1, N2, D; the
  // relay family reads P1, P2, N2, N3, D. N2 is shared deliberately.
  double P = 1.0;
  double N1 = 1.0;
  double N2 = 1.0;
  double D = 0.5;
  double P1 = 1.0;
  double P2 = 1.0;
  double N3 = 1.0;

  int n = 8;
  double gamma = 1.0;
  int k1 = 2;
  int k2 = 2;
  int kq = 2;
  int B = 50;
  std::string mode = "chained";

  std::int64_t trials = 10000;  // wz-sim trials / cf-sim runs
  std::uint64_t seed = 42;
  std::string out;  // empty: CSV to stdout
  int workers = 1;
  SweepSpec sweep;

  // rd-curve distortion range
  double d_min = 0.1;
  double d_max = 1.0;
  int steps = 10;
};

struct ParseResult {
  ExperimentConfig cfg;
  std::vector<std::string> errors;  // every violation, not just the first
  bool show_help = false;
  std::string help_text;
};

// Parses argv-style arguments (without the program name), merging config
// file and environment as described above.
ParseResult parse_args(const std::vector<std::string>& args);

// Reads a flat key = value file into the config; unknown keys and type
// mismatches are reported per key. Returns collected errors.
std::vector<std::string> apply_config_file(const std::string& path,
                                           ExperimentConfig& cfg);

// Runs the experiment, writing the CSV to cfg.out (or stdout when empty) and
// a one-line summary to `summary`. Returns a process exit status: 0 on
// success, 2 on configuration errors, 1 on I/O failure. Identical config and
// seed produce byte-identical CSV for any worker count.
int run_experiment(const ExperimentConfig& cfg, std::ostream& summary,
                   std::ostream& errors);

// The CSV text an experiment produces (used by run_experiment and tests).
std::string render_csv(const ExperimentConfig& cfg);

}  // namespace latcf::cli

#endif  // LATCF_EXPERIMENT_HPP
