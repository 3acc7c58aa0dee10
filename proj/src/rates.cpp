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

#include "latcf/rates.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace latcf::rates {

namespace {

void require_nonneg(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << name << " must be finite and >= 0 (got " << v << ")";
    throw std::domain_error(os.str());
  }
}

void require_pos(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << name << " must be finite and > 0 (got " << v << ")";
    throw std::domain_error(os.str());
  }
}

// P*N2/(P+N2) with the 0-limit handled.
double gauss_parallel(double a, double b) {
  if (a <= 0.0 || b <= 0.0) return 0.0;
  return a * b / (a + b);
}

}  // namespace

double residual_variance(double P, double N1, double N2) {
  require_nonneg(P, "P");
  require_nonneg(N1, "N1");
  require_nonneg(N2, "N2");
  return N1 + gauss_parallel(P, N2);
}

double wz_rd(double P, double N1, double N2, double D) {
  require_pos(D, "D");
  const double resid = residual_variance(P, N1, N2);
  if (D >= resid) return 0.0;
  return 0.5 * std::log2(resid / D);
}

double wz_rd_alpha1_fixed(double P, double N1, double N2, double D) {
  require_pos(D, "D");
  return 0.5 * std::log2(1.0 + residual_variance(P, N1, N2) / D);
}

double wz_rd_alpha2_fixed(double N1, double N2, double D) {
  require_pos(D, "D");
  require_nonneg(N1, "N1");
  require_nonneg(N2, "N2");
  if (D >= N1 + N2) return 0.0;
  return 0.5 * std::log2((N1 + N2) / D);
}

double cf_rate(double P1, double P2, double N2, double N3) {
  require_nonneg(P1, "P1");
  require_nonneg(P2, "P2");
  require_nonneg(N2, "N2");
  require_pos(N3, "N3");
  const double denom = P1 * N2 + P1 * N3 + P2 * N2 + N2 * N3;
  const double relay_term = (P2 > 0.0 && denom > 0.0) ? P1 * P2 / denom : 0.0;
  return 0.5 * std::log2(1.0 + P1 / N3 + relay_term);
}

double relay_rate_bound(double P1, double P2, double N3) {
  require_nonneg(P1, "P1");
  require_nonneg(P2, "P2");
  require_pos(N3, "N3");
  return 0.5 * std::log2(1.0 + P2 / (P1 + N3));
}

double compression_d_star(double P1, double P2, double N2, double N3) {
  require_nonneg(P1, "P1");
  require_pos(P2, "P2");
  require_nonneg(N2, "N2");
  require_pos(N3, "N3");
  return (N2 + gauss_parallel(P1, N3)) * (P1 + N3) / P2;
}

}  // namespace latcf::rates
