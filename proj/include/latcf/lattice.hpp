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

#ifndef LATCF_LATTICE_HPP
#define LATCF_LATTICE_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "latcf/errors.hpp"

namespace latcf {

using Vec = std::vector<double>;

/// An n-dimensional lattice with an exact nearest-point quantizer.
///
/// Two flavours:
///  * scaled integer, s * Z^n: quantization is coordinatewise rounding,
///    second moment is s^2/12 exactly;
///  * generator matrix: the lattice { sum_i z_i b_i, z integer }, quantized
///    by an exact Schnorr-Euchner enumeration over the basis. The per-call
///    node budget is configurable; exceeding it raises budget_error rather
///    than returning an approximation.
///
/// Quantizer ties are broken deterministically: round-half-to-even per
/// coordinate for scaled-integer lattices, lexicographically smallest
/// integer coordinate vector for generator-matrix lattices.
///
/// Instances are immutable values and safe to share across threads.
class Lattice {
 public:
  static constexpr std::uint64_t kDefaultNodeBudget = 1u << 22;

  static Lattice scaled_integer(int dim, double scale);
  // basis_rows is row-major, one basis vector per row.
  static Lattice from_generator(int dim, const std::vector<double>& basis_rows,
                                std::uint64_t node_budget = kDefaultNodeBudget);
  // Plain-text matrix file: whitespace-separated entries, one basis vector
  // per row, square.
  static Lattice from_file(const std::string& path,
                           std::uint64_t node_budget = kDefaultNodeBudget);

  int dim() const;
  double volume() const;
  // Per-dimension second moment of a uniform draw over the Voronoi cell.
  // Exact s^2/12 for scaled-integer lattices; a cached fixed-seed Monte
  // Carlo estimate for generator-matrix lattices.
  double second_moment() const;
  bool is_scaled_integer() const;
  double scale() const;  // scaled-integer only
  std::uint64_t node_budget() const;

  // Nearest lattice point to x (exact).
  Vec quantize(std::span<const double> x) const;
  // x - quantize(x); lands in the Voronoi cell.
  Vec mod(std::span<const double> x) const;

  // Point with the given integer coordinates in the basis.
  Vec point_from_coords(std::span<const long long> z) const;
  // Integer coordinates of a lattice point; throws std::invalid_argument if
  // the point is farther than tol (in coordinate units) from the lattice.
  std::vector<long long> coords_of(std::span<const double> point,
                                   double tol = 1e-6) const;
  // Maps fractional coordinates t in [-1/2, 1/2)^n onto the fundamental
  // parallelepiped of the basis.
  Vec point_from_fractional(std::span<const double> t) const;

  Lattice scaled_by(double factor) const;
  Lattice with_second_moment(double target) const;
  Lattice with_node_budget(std::uint64_t budget) const;

  struct Impl;

 private:
  explicit Lattice(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

namespace lattices {
// Checkerboard lattice D4 (integer vectors with even coordinate sum).
Lattice d4(std::uint64_t node_budget = Lattice::kDefaultNodeBudget);
// Gosset lattice E8, unit covolume.
Lattice e8(std::uint64_t node_budget = Lattice::kDefaultNodeBudget);
}  // namespace lattices

}  // namespace latcf

#endif  // LATCF_LATTICE_HPP
