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

#ifndef LATCF_ERRORS_HPP
#define LATCF_ERRORS_HPP

#include <stdexcept>

namespace latcf {

// Inconsistent or out-of-range problem configuration (mis-scaled codebooks,
// infeasible rates, bad parameter combinations).
class config_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The exact closest-point search ran past its node budget. Never downgraded
// to an approximate answer.
class budget_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace latcf

#endif  // LATCF_ERRORS_HPP
