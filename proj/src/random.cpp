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

#include "latcf/random.hpp"

#include <cmath>

namespace latcf {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t splitmix_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t stream_key(std::uint64_t seed, std::string_view id,
                         std::uint64_t counter) {
  std::uint64_t s = seed ^ (fnv1a64(id) | 1ull);
  const std::uint64_t a = splitmix_next(s);
  s ^= counter * 0xd1b54a32d192ed03ull;
  const std::uint64_t b = splitmix_next(s);
  return a ^ (b + 0x165667b19e3779f9ull);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::string_view stream_id,
                           std::uint64_t counter)
    : engine_(stream_key(seed, stream_id, counter)) {}

double RandomStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_centered() { return uniform01() - 0.5; }

double RandomStream::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // (0,1] keeps the log finite.
  const double u1 =
      (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = kTwoPi * u2;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

void RandomStream::fill_gaussian(std::span<double> out, double sigma) {
  for (double& v : out) v = sigma * gaussian();
}

void RandomStream::fill_uniform_centered(std::span<double> out) {
  for (double& v : out) v = uniform_centered();
}

std::uint64_t RandomStream::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("below(): bound must be >= 1");
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
}

std::uint64_t RandomStream::derive(std::uint64_t seed, std::string_view label,
                                   std::uint64_t index) {
  return stream_key(seed, label, index);
}

DitherSource::DitherSource(std::uint64_t seed, std::string stream_id,
                           std::uint64_t counter)
    : seed_(seed), stream_id_(std::move(stream_id)), counter_(counter) {}

Vec DitherSource::next(const Lattice& lat) { return at(lat, counter_++); }

Vec DitherSource::at(const Lattice& lat, std::uint64_t counter) const {
  RandomStream rs(seed_, stream_id_, counter);
  Vec t(lat.dim());
  rs.fill_uniform_centered(t);
  // Uniform over the centered fundamental parallelepiped; folding with
  // mod-Lambda makes it uniform over the Voronoi cell.
  const Vec u = lat.point_from_fractional(t);
  return lat.mod(u);
}

MomentEstimate estimate_second_moment(const Lattice& lat, std::int64_t trials,
                                      std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  DitherSource src(seed, "sigma2-mc");
  const double n = static_cast<double>(lat.dim());
  double sum = 0.0, sum_sq = 0.0;
  for (std::int64_t t = 0; t < trials; ++t) {
    const Vec u = src.at(lat, static_cast<std::uint64_t>(t));
    double e = 0.0;
    for (double v : u) e += v * v;
    e /= n;
    sum += e;
    sum_sq += e * e;
  }
  const double tn = static_cast<double>(trials);
  const double mean = sum / tn;
  const double var = std::max(0.0, sum_sq / tn - mean * mean);
  return {mean, std::sqrt(var / tn)};
}

}  // namespace latcf
