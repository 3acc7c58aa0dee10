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

#ifndef LATCF_NESTED_HPP
#define LATCF_NESTED_HPP

#include <cstdint>
#include <span>

#include "latcf/lattice.hpp"

namespace latcf {

/// Self-similar nested lattice pair: coarse = k * fine, k >= 2. The fine
/// points inside the coarse Voronoi cell form the codebook (k^n codewords,
/// log2 k bits per dimension), indexed by a mixed-radix map on the fine
/// coordinates reduced mod k.
class NestedPair {
 public:
  NestedPair(Lattice fine, int k);
  static NestedPair from_fine_sigma2(int dim, int k, double sigma2_fine);
  static NestedPair from_coarse_sigma2(int dim, int k, double sigma2_coarse);

  const Lattice& fine() const { return fine_; }
  const Lattice& coarse() const { return coarse_; }
  int nesting() const { return k_; }
  int dim() const { return fine_.dim(); }
  double rate_bits() const;      // log2 k
  double codebook_size() const;  // k^n (double; may be astronomically large)
  // True when k^n fits in 63 bits, i.e. integer coset indices are usable.
  bool index_fits_u64() const { return index_fits_; }

  // Mixed-radix index of a codeword (a fine point inside the coarse cell).
  // Throws std::invalid_argument if the point is not in the codebook.
  std::uint64_t coset_index(std::span<const double> point) const;
  // Unique codebook representative of an index in [0, k^n).
  Vec codeword_of_index(std::uint64_t index) const;

 private:
  Lattice fine_;
  Lattice coarse_;
  int k_;
  bool index_fits_;
};

}  // namespace latcf

#endif  // LATCF_NESTED_HPP
