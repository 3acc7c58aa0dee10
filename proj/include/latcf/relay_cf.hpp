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

#ifndef LATCF_RELAY_CF_HPP
#define LATCF_RELAY_CF_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "latcf/nested.hpp"
#include "latcf/random.hpp"

namespace latcf::cf {

// Block-Markov compress-and-forward simulator for the three-node Gaussian
// relay channel Y2 = X1 + Z2 (relay), Y3 = X1 + X2 + Z3 (destination).
// Three nested codebooks: C1 carries the message, C2 carries the relay's
// compression index, Cq quantizes the relay observation. The relay does not
// decode; it quantizes the previous block's Y2 (no source-side scaling) and
// forwards the coset index. The destination decodes the relay codeword,
// strips it from Y3, reconstructs the relay observation Wyner-Ziv style
// against its own direct-link view of the previous block, and coherently
// combines the two views to decode the message.

enum class Mode { chained, genie };

const char* mode_name(Mode m);

struct Config {
  double P1 = 1.0;  // transmitter power
  double P2 = 1.0;  // relay power
  double N2 = 1.0;  // relay noise
  double N3 = 1.0;  // destination noise
  double D = 0.5;   // relay compression distortion
  int n = 8;        // lattice dimension
  int B = 50;       // message blocks (B+1 channel blocks)
  int k1 = 2;       // nesting of C1, message rate log2 k1
  int k2 = 2;       // nesting of C2, relay rate log2 k2
  int kq = 2;       // nesting of Cq, compression rate log2 kq
  std::uint64_t seed = 42;
  Mode mode = Mode::chained;

  double rate_bits() const;         // R = log2 k1
  double relay_rate_bits() const;   // R' = log2 k2
  double quant_rate_bits() const;   // Rhat = log2 kq
  double effective_rate() const;    // R * B / (B+1)
  double alpha2() const;            // P1 / (P1 + N3)
  double sigma2_wz() const;         // N2 + P1 N3 / (P1 + N3)
  double ideal_coarse_sigma2() const;  // sigma2_wz + D
  double beta_relay() const;        // MMSE scale for decoding t2 from Y3
  double n_eff() const;             // harmonic combination of N3 and N2+D
  double alpha_combine() const;     // P1 / (P1 + n_eff)
  // False when even the ideal compression rate exceeds the relay link rate
  // (the rate-matching constraint has no margin at these parameters).
  bool ideal_rate_feasible() const;

  // All constraint violations, empty when the config is usable.
  std::vector<std::string> validate() const;
  void validate_or_throw() const;  // config_error listing every violation

  NestedPair make_tx_codebook() const;     // C1: coarse sigma^2 = P1
  NestedPair make_relay_codebook() const;  // C2: coarse sigma^2 = P2
  NestedPair make_quant_codebook() const;  // Cq: fine sigma^2 = D
};

// X1 = (t1(w) + u1) mod Lambda1.
Vec tx_encode(const NestedPair& c1, std::uint64_t w, std::span<const double> u1);

// Relay compression of y2 (source-side scale fixed to 1): coset point and
// its integer index.
std::pair<Vec, std::uint64_t> relay_compress(const NestedPair& cq,
                                             std::span<const double> y2,
                                             std::span<const double> uq);

// Digit-wise embedding of a base-kq index into the base-k2 codebook; the
// inverse reduces digits mod kq (corrupted digits from a wrong relay-codeword
// decode wrap deterministically).
std::uint64_t embed_index(std::uint64_t i, int kq, int k2, int n);
std::uint64_t unembed_index(std::uint64_t idx, int kq, int k2, int n);

// X2 = (t2(embed(i)) + u2) mod Lambda2.
Vec relay_encode(const NestedPair& c2, const NestedPair& cq, std::uint64_t i,
                 std::span<const double> u2);

// MMSE lattice decode of the relay codeword from y3 (message signal plus
// destination noise treated as noise): mod_L2(Q_c2(beta y3 - u2)).
Vec dest_decode_relay(const NestedPair& c2, std::span<const double> y3,
                      std::span<const double> u2, double beta);

// Wyner-Ziv reconstruction of the relay observation from the coset point,
// with the cleaned previous-block direct observation as side information.
Vec dest_reconstruct(const NestedPair& cq, std::span<const double> I,
                     std::span<const double> uq,
                     std::span<const double> y3_clean, double alpha2);

// Unit-gain coherent combination of the direct and reconstructed views,
// weights w3 and w2 (inverse effective noise powers).
Vec combine_views(std::span<const double> y3_clean,
                  std::span<const double> y2_hat, double w3, double w2);

// Message decode from the combined observation.
std::uint64_t dest_combine_decode(const NestedPair& c1,
                                  std::span<const double> y3_clean,
                                  std::span<const double> y2_hat,
                                  std::span<const double> u1, double alpha_c,
                                  double w3, double w2);

// Everything one channel block produces, for inspection in tests. Block j
// carries message w(j) and the relay's description of block j-1; the decode
// flags refer to that previous block and are meaningful from block 2 on.
struct BlockTrace {
  int block = 0;
  std::uint64_t message = 0;      // dummy 0 in block B+1
  std::uint64_t relay_index = 0;  // i(j-1) carried by this block
  Vec x1, x2, y2, y3;
  bool t2_error = false;
  bool wrap_error = false;
  bool msg_error = false;
};

// Single run of B+1 blocks with full per-block state; same pipeline the
// Monte Carlo aggregation uses.
std::vector<BlockTrace> trace_run(const Config& cfg, std::int64_t run_index);

struct SimReport {
  std::int64_t runs = 0;
  int B = 0;
  Mode mode = Mode::chained;
  double effective_rate = 0.0;  // R * B / (B+1)
  double t2_error_rate = 0.0;   // relay-codeword decode errors
  double wrap_rate = 0.0;       // ground-truth reconstruction wraps
  double msg_error_rate = 0.0;  // end-to-end message errors
  double power1 = 0.0;          // empirical per-dimension power of X1
  double power2 = 0.0;
  // Empirical variance of the combined-view residual on clean non-wrapped
  // blocks, to compare with n_eff.
  double comb_resid_var = 0.0;
  double comb_resid_var_se = 0.0;
  std::int64_t comb_resid_blocks = 0;
  std::uint64_t seed = 0;

  std::uint64_t digest() const;
};

// Monte Carlo over independent runs of B+1 blocks each. Identical config
// gives identical reports for any worker count.
SimReport simulate(const Config& cfg, std::int64_t runs, int workers = 1);

}  // namespace latcf::cf

#endif  // LATCF_RELAY_CF_HPP
