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

#ifndef LATCF_RATES_HPP
#define LATCF_RATES_HPP

namespace latcf::rates {

// Closed-form rate and distortion expressions; all logs base 2, all rates in
// bits per dimension. These are the analytic oracles the simulators are
// checked against. Parameters are variances/powers; zero values are accepted
// wherever the limit is finite, otherwise std::domain_error.

// Conditional variance of X+Z1 given X+Z2 for independent Gaussians of
// variance P, N1, N2: N1 + P*N2/(P+N2).
double residual_variance(double P, double N1, double N2);

// Rate-distortion function for source X+Z1 with side information X+Z2,
// clipped at zero for D past the residual variance.
double wz_rd(double P, double N1, double N2, double D);

// Suboptimal variant with the source-side scale fixed to 1.
double wz_rd_alpha1_fixed(double P, double N1, double N2, double D);

// Suboptimal variant with the estimation weight fixed to 1 (ignores the
// correlation structure): (1/2) log2((N1+N2)/D), clipped at zero.
double wz_rd_alpha2_fixed(double N1, double N2, double D);

// Compress-and-forward rate for the three-node Gaussian relay channel.
double cf_rate(double P1, double P2, double N2, double N3);

// Relay-to-destination codebook rate bound: (1/2) log2(1 + P2/(P1+N3)).
double relay_rate_bound(double P1, double P2, double N3);

// Smallest compression distortion whose source-coding rate fits the relay
// link, i.e. the equality point of the rate-matching constraint.
double compression_d_star(double P1, double P2, double N2, double N3);

}  // namespace latcf::rates

#endif  // LATCF_RATES_HPP
