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

#ifndef LATCF_WYNER_ZIV_HPP
#define LATCF_WYNER_ZIV_HPP

#include <cstdint>
#include <span>
#include <utility>

#include "latcf/nested.hpp"
#include "latcf/random.hpp"

namespace latcf::wz {

// Dithered nested-lattice codec for lossy compression of y = x + z1 with
// side information s = x + z2 at the decoder (x, z1, z2 independent
// Gaussians of variance P, N1, N2). The encoder quantizes alpha1*y + u to
// the fine lattice and transmits the coset of the quantized point modulo the
// coarse lattice; the decoder shifts by its best linear estimate from s,
// reduces modulo the coarse lattice, and rescales.

// MMSE scale pair (alpha1, alpha2): alpha1 = sqrt(1 - D/resid),
// alpha2 = P/(P+N2). Throws config_error when D is outside (0, resid].
std::pair<double, double> mmse_coefficients(double P, double N1, double N2,
                                            double D);

struct Config {
  double P = 1.0;
  double N1 = 1.0;
  double N2 = 1.0;
  double D = 0.5;
  int n = 8;
  // Coarse-cell amplitude margin, >= 1. The quantization pair uses a fine
  // lattice with second moment exactly D; the coarse lattice would ideally
  // carry the residual variance, which an integer nesting factor cannot hit
  // exactly. gamma = 1 takes the nearest integer; gamma > 1 inflates the
  // coarse cell linearly by gamma and rounds up, trading rate for wrap
  // probability.
  double gamma = 1.0;

  double sigma2_resid() const;
  double alpha1() const;
  double alpha2() const;
  int nesting_factor() const;
  double realized_coarse_sigma2() const;  // k^2 * D
  NestedPair make_pair() const;
  void validate() const;  // throws config_error
};

// Coset point I transmitted for source vector y under dither u.
Vec encode(const Config& cfg, const NestedPair& pair, std::span<const double> y,
           std::span<const double> u);

// Reconstruction from the coset point, the shared dither and the side
// information s.
Vec decode(const Config& cfg, const NestedPair& pair, std::span<const double> I,
           std::span<const double> u, std::span<const double> side_info);

// Ground-truth wrap test (simulation only): true iff the modulo reduction in
// the decoder chain moved its argument.
bool detect_wrap(const Config& cfg, const NestedPair& pair,
                 std::span<const double> x, std::span<const double> z1,
                 std::span<const double> z2, std::span<const double> u);

// Everything one trial produces, for inspection in tests.
struct Trace {
  Vec source;          // y = x + z1
  Vec side_info;       // s = x + z2
  Vec dither;          // u
  Vec quant_error;     // e_q = (alpha1 y + u) mod fine
  Vec coset_point;     // I
  Vec reconstruction;  // yhat
  bool wrapped = false;
};

Trace run_trial(const Config& cfg, const NestedPair& pair,
                std::span<const double> x, std::span<const double> z1,
                std::span<const double> z2, std::span<const double> u);

struct SimReport {
  std::int64_t trials = 0;
  int k = 0;
  double rate_bits = 0.0;
  double gamma = 1.0;
  double coarse_sigma2 = 0.0;        // realized k^2 D
  double ideal_coarse_sigma2 = 0.0;  // residual variance
  double wrap_rate = 0.0;
  double distortion = 0.0;          // all trials
  double distortion_no_wrap = 0.0;  // conditioned on no wrap
  double distortion_no_wrap_se = 0.0;
  // Measured moments over the non-wrapped trials, for the bookkeeping
  // identity (1-a1^2)^2 * resid + a1^2 * eq.
  double resid_moment = 0.0;
  double eq_moment = 0.0;
  double identity_pass_rate = 0.0;       // residual identity, non-wrapped
  double decomposition_pass_rate = 0.0;  // x = Q(x) + x mod fine, all trials
  std::uint64_t seed = 0;

  std::uint64_t digest() const;  // deterministic content hash
};

// Monte Carlo run over i.i.d. Gaussian trials. Identical (cfg, trials, seed)
// gives identical reports for any worker count.
SimReport simulate(const Config& cfg, std::int64_t trials, std::uint64_t seed,
                   int workers = 1);

}  // namespace latcf::wz

#endif  // LATCF_WYNER_ZIV_HPP
