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

#ifndef LATCF_RANDOM_HPP
#define LATCF_RANDOM_HPP

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>

#include "latcf/lattice.hpp"

namespace latcf {

// All randomness flows from one master seed through named, counter-addressed
// streams: the variates produced by (seed, stream id, counter) are a pure
// function of that triple, independent of execution order or worker count.
// Distributions are generated from raw mt19937_64 words by hand so streams
// are reproducible across standard libraries.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::string_view stream_id,
               std::uint64_t counter);

  std::uint64_t next_u64() { return engine_(); }
  double uniform01();        // [0, 1), 53-bit resolution
  double uniform_centered();  // [-1/2, 1/2)
  double gaussian();         // standard normal, Box-Muller
  void fill_gaussian(std::span<double> out, double sigma);
  void fill_uniform_centered(std::span<double> out);
  // Uniform integer in [0, bound), bound >= 1.
  std::uint64_t below(std::uint64_t bound);

  // Derives an independent sub-seed; used to split per-run/per-trial streams.
  static std::uint64_t derive(std::uint64_t seed, std::string_view label,
                              std::uint64_t index);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Dither generator for a target lattice: draws are uniform over the Voronoi
// cell (uniform over the centered fundamental parallelepiped, folded by
// mod-Lambda). Identical (seed, stream id, counter) gives identical vectors.
class DitherSource {
 public:
  DitherSource(std::uint64_t seed, std::string stream_id,
               std::uint64_t counter = 0);

  Vec next(const Lattice& lat);                       // draws, advances
  Vec at(const Lattice& lat, std::uint64_t counter) const;  // pure

  std::uint64_t seed() const { return seed_; }
  const std::string& stream_id() const { return stream_id_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::string stream_id_;
  std::uint64_t counter_;
};

struct MomentEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Monte Carlo estimate of the per-dimension second moment of lat's Voronoi
// cell, with its standard error.
MomentEstimate estimate_second_moment(const Lattice& lat, std::int64_t trials,
                                      std::uint64_t seed = 0x5eC0D2u);

}  // namespace latcf

#endif  // LATCF_RANDOM_HPP
