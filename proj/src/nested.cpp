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

#include "latcf/nested.hpp"

#include <cmath>
#include <sstream>

namespace latcf {

namespace {

// k^n fits the 63-bit index space?
bool pow_fits_u63(int k, int n) {
  unsigned __int128 acc = 1;
  for (int i = 0; i < n; ++i) {
    acc *= static_cast<unsigned>(k);
    if (acc > (static_cast<unsigned __int128>(1) << 63)) return false;
  }
  return true;
}

Lattice make_coarse(const Lattice& fine, int k) {
  if (k < 2) throw std::invalid_argument("nesting factor must be >= 2");
  return fine.scaled_by(static_cast<double>(k));
}

}  // namespace

NestedPair::NestedPair(Lattice fine, int k)
    : fine_(std::move(fine)), coarse_(make_coarse(fine_, k)), k_(k) {
  index_fits_ = pow_fits_u63(k_, fine_.dim());
  // Self-similar nesting guarantees inclusion; verify on the basis anyway.
  const int n = fine_.dim();
  std::vector<long long> unit(n, 0);
  for (int j = 0; j < n; ++j) {
    unit[j] = k_;
    const Vec p = fine_.point_from_coords(unit);
    fine_.coords_of(p, 1e-9);  // throws if not a fine point
    unit[j] = 0;
  }
}

NestedPair NestedPair::from_fine_sigma2(int dim, int k, double sigma2_fine) {
  if (!(sigma2_fine > 0.0)) {
    throw std::invalid_argument("fine second moment must be positive");
  }
  return NestedPair(
      Lattice::scaled_integer(dim, 1.0).with_second_moment(sigma2_fine), k);
}

NestedPair NestedPair::from_coarse_sigma2(int dim, int k, double sigma2_coarse) {
  if (!(sigma2_coarse > 0.0)) {
    throw std::invalid_argument("coarse second moment must be positive");
  }
  if (k < 2) throw std::invalid_argument("nesting factor must be >= 2");
  return from_fine_sigma2(dim, k,
                          sigma2_coarse / (static_cast<double>(k) * k));
}

double NestedPair::rate_bits() const { return std::log2(double(k_)); }

double NestedPair::codebook_size() const {
  return std::pow(static_cast<double>(k_), fine_.dim());
}

std::uint64_t NestedPair::coset_index(std::span<const double> point) const {
  if (!index_fits_) {
    throw std::invalid_argument("codebook too large for 64-bit coset indices");
  }
  std::vector<long long> z;
  try {
    z = fine_.coords_of(point);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("point is not in the codebook: not a fine lattice point");
  }
  // Membership in the coarse Voronoi cell: no coarse point is closer than the
  // origin. Compared by distance with an ulp-scale slack so that decoded
  // points sitting on a cell boundary are accepted (the coset, and hence the
  // index, is the same for either representative).
  {
    const Vec q = coarse_.quantize(point);
    double d_origin = 0.0, d_nearest = 0.0;
    for (std::size_t i = 0; i < point.size(); ++i) {
      d_origin += point[i] * point[i];
      const double e = point[i] - q[i];
      d_nearest += e * e;
    }
    if (d_origin > d_nearest + 1e-9 * (1.0 + d_origin)) {
      throw std::invalid_argument(
          "point is not in the codebook: outside the coarse Voronoi cell");
    }
  }
  const int n = fine_.dim();
  std::uint64_t index = 0;
  std::uint64_t weight = 1;
  for (int i = 0; i < n; ++i) {
    const long long digit = ((z[i] % k_) + k_) % k_;
    index += static_cast<std::uint64_t>(digit) * weight;
    weight *= static_cast<std::uint64_t>(k_);
  }
  return index;
}

Vec NestedPair::codeword_of_index(std::uint64_t index) const {
  if (!index_fits_) {
    throw std::invalid_argument("codebook too large for 64-bit coset indices");
  }
  const int n = fine_.dim();
  unsigned __int128 size = 1;
  for (int i = 0; i < n; ++i) size *= static_cast<unsigned>(k_);
  if (index >= size) {
    std::ostringstream os;
    os << "coset index " << index << " out of range [0, " << k_ << "^" << n
       << ")";
    throw std::invalid_argument(os.str());
  }
  std::vector<long long> z(n);
  std::uint64_t rest = index;
  for (int i = 0; i < n; ++i) {
    z[i] = static_cast<long long>(rest % static_cast<std::uint64_t>(k_));
    rest /= static_cast<std::uint64_t>(k_);
  }
  // Reduce the digit representative into the coarse cell; mod shifts by
  // multiples of k in coordinates, so digits (and the index) are preserved.
  return coarse_.mod(fine_.point_from_coords(z));
}

}  // namespace latcf
