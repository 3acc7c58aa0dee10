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

#include "latcf/wyner_ziv.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "latcf/parallel.hpp"
#include "latcf/rates.hpp"

namespace latcf::wz {

namespace {

void check_dim(int expected, std::size_t got, const char* what) {
  if (static_cast<std::size_t>(expected) != got) {
    std::ostringstream os;
    os << what << ": expected dimension " << expected << ", got " << got;
    throw std::invalid_argument(os.str());
  }
}

void check_pair(const Config& cfg, const NestedPair& pair) {
  if (pair.dim() != cfg.n) {
    throw config_error("quantization pair dimension does not match the config");
  }
  const double sf = pair.fine().second_moment();
  if (std::abs(sf - cfg.D) > 1e-9 * cfg.D) {
    std::ostringstream os;
    os << "mis-scaled quantization pair: fine second moment " << sf
       << " but the target distortion is " << cfg.D;
    throw config_error(os.str());
  }
}

std::uint64_t fnv1a64_bytes(const void* data, std::size_t len,
                            std::uint64_t h = 0xcbf29ce484222325ull) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t hash_doubles(std::initializer_list<double> vals,
                           std::uint64_t h) {
  for (double v : vals) {
    char buf[32];
    const int len = std::snprintf(buf, sizeof buf, "%.17g|", v);
    h = fnv1a64_bytes(buf, static_cast<std::size_t>(len), h);
  }
  return h;
}

}  // namespace

std::pair<double, double> mmse_coefficients(double P, double N1, double N2,
                                            double D) {
  const double resid = rates::residual_variance(P, N1, N2);
  if (!(D > 0.0) || D > resid * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "distortion D=" << D << " outside (0, " << resid
       << "] (the conditional variance N1 + P*N2/(P+N2))";
    throw config_error(os.str());
  }
  const double a1 = std::sqrt(std::max(0.0, 1.0 - D / resid));
  const double a2 = (P <= 0.0) ? 0.0 : P / (P + N2);
  return {a1, a2};
}

double Config::sigma2_resid() const {
  return rates::residual_variance(P, N1, N2);
}

double Config::alpha1() const {
  return mmse_coefficients(P, N1, N2, D).first;
}

double Config::alpha2() const {
  return mmse_coefficients(P, N1, N2, D).second;
}

int Config::nesting_factor() const {
  // Fine lattice carries sigma^2 = D exactly; the ideal coarse second moment
  // is the residual variance, reachable only up to an integer nesting
  // factor. gamma = 1 rounds to the nearest integer; a margin gamma > 1
  // inflates the coarse cell linearly and rounds up so the margin is a
  // guarantee.
  const double base = std::sqrt(sigma2_resid() / D);
  const double target = gamma * base;
  const long long k = (gamma == 1.0)
                          ? std::llround(target)
                          : static_cast<long long>(std::ceil(target - 1e-9));
  return static_cast<int>(std::max(2ll, k));
}

double Config::realized_coarse_sigma2() const {
  const double k = static_cast<double>(nesting_factor());
  return k * k * D;
}

NestedPair Config::make_pair() const {
  validate();
  return NestedPair::from_fine_sigma2(n, nesting_factor(), D);
}

void Config::validate() const {
  if (!(P > 0.0) || !(N1 > 0.0) || !(N2 > 0.0)) {
    throw config_error("P, N1, N2 must be positive");
  }
  if (n < 1) throw config_error("dimension n must be >= 1");
  if (!(gamma >= 1.0)) throw config_error("coarse margin gamma must be >= 1");
  mmse_coefficients(P, N1, N2, D);  // validates D against the bound
}

Vec encode(const Config& cfg, const NestedPair& pair, std::span<const double> y,
           std::span<const double> u) {
  check_pair(cfg, pair);
  check_dim(cfg.n, y.size(), "encode: source");
  check_dim(cfg.n, u.size(), "encode: dither");
  const double a1 = cfg.alpha1();
  Vec v(cfg.n);
  for (int i = 0; i < cfg.n; ++i) v[i] = a1 * y[i] + u[i];
  return pair.coarse().mod(pair.fine().quantize(v));
}

Vec decode(const Config& cfg, const NestedPair& pair, std::span<const double> I,
           std::span<const double> u, std::span<const double> side_info) {
  check_pair(cfg, pair);
  check_dim(cfg.n, I.size(), "decode: coset point");
  check_dim(cfg.n, u.size(), "decode: dither");
  check_dim(cfg.n, side_info.size(), "decode: side info");
  const auto [a1, a2] = mmse_coefficients(cfg.P, cfg.N1, cfg.N2, cfg.D);
  Vec w(cfg.n);
  for (int i = 0; i < cfg.n; ++i) w[i] = I[i] - u[i] - a1 * a2 * side_info[i];
  Vec folded = pair.coarse().mod(w);
  for (int i = 0; i < cfg.n; ++i) folded[i] = a1 * folded[i] + a2 * side_info[i];
  return folded;
}

bool detect_wrap(const Config& cfg, const NestedPair& pair,
                 std::span<const double> x, std::span<const double> z1,
                 std::span<const double> z2, std::span<const double> u) {
  check_pair(cfg, pair);
  check_dim(cfg.n, x.size(), "detect_wrap: x");
  check_dim(cfg.n, z1.size(), "detect_wrap: z1");
  check_dim(cfg.n, z2.size(), "detect_wrap: z2");
  check_dim(cfg.n, u.size(), "detect_wrap: dither");
  const auto [a1, a2] = mmse_coefficients(cfg.P, cfg.N1, cfg.N2, cfg.D);
  Vec v(cfg.n);
  for (int i = 0; i < cfg.n; ++i) v[i] = a1 * (x[i] + z1[i]) + u[i];
  const Vec eq = pair.fine().mod(v);
  Vec w(cfg.n);
  for (int i = 0; i < cfg.n; ++i) {
    w[i] = a1 * ((1.0 - a2) * x[i] - a2 * z2[i] + z1[i]) - eq[i];
  }
  const Vec q = pair.coarse().quantize(w);
  for (double c : q) {
    if (c != 0.0) return true;
  }
  return false;
}

Trace run_trial(const Config& cfg, const NestedPair& pair,
                std::span<const double> x, std::span<const double> z1,
                std::span<const double> z2, std::span<const double> u) {
  check_pair(cfg, pair);
  const int n = cfg.n;
  check_dim(n, x.size(), "run_trial: x");
  check_dim(n, z1.size(), "run_trial: z1");
  check_dim(n, z2.size(), "run_trial: z2");
  check_dim(n, u.size(), "run_trial: dither");
  const auto [a1, a2] = mmse_coefficients(cfg.P, cfg.N1, cfg.N2, cfg.D);

  Trace tr;
  tr.source.resize(n);
  tr.side_info.resize(n);
  tr.dither.assign(u.begin(), u.end());
  for (int i = 0; i < n; ++i) {
    tr.source[i] = x[i] + z1[i];
    tr.side_info[i] = x[i] + z2[i];
  }

  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = a1 * tr.source[i] + u[i];
  tr.quant_error = pair.fine().mod(v);
  Vec qv(n);
  for (int i = 0; i < n; ++i) qv[i] = v[i] - tr.quant_error[i];
  tr.coset_point = pair.coarse().mod(qv);
  tr.reconstruction = decode(cfg, pair, tr.coset_point, u, tr.side_info);

  Vec w(n);
  for (int i = 0; i < n; ++i) {
    w[i] = a1 * ((1.0 - a2) * x[i] - a2 * z2[i] + z1[i]) - tr.quant_error[i];
  }
  const Vec q = pair.coarse().quantize(w);
  tr.wrapped = false;
  for (double c : q) {
    if (c != 0.0) {
      tr.wrapped = true;
      break;
    }
  }
  return tr;
}

std::uint64_t SimReport::digest() const {
  std::uint64_t h = fnv1a64_bytes(&trials, sizeof trials);
  h = fnv1a64_bytes(&k, sizeof k, h);
  h = fnv1a64_bytes(&seed, sizeof seed, h);
  h = hash_doubles({rate_bits, gamma, coarse_sigma2, ideal_coarse_sigma2,
                    wrap_rate, distortion, distortion_no_wrap,
                    distortion_no_wrap_se, resid_moment, eq_moment,
                    identity_pass_rate, decomposition_pass_rate},
                   h);
  return h;
}

SimReport simulate(const Config& cfg, std::int64_t trials, std::uint64_t seed,
                   int workers) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  cfg.validate();
  const NestedPair pair = cfg.make_pair();
  const auto [a1, a2] = mmse_coefficients(cfg.P, cfg.N1, cfg.N2, cfg.D);
  const int n = cfg.n;
  const double s_p = std::sqrt(cfg.P);
  const double s_n1 = std::sqrt(cfg.N1);
  const double s_n2 = std::sqrt(cfg.N2);

  struct Partial {
    detail::KahanSum dist_all, dist_nw, dist_nw_sq, resid_nw, eq_nw;
    std::int64_t wraps = 0;
    std::int64_t no_wrap = 0;
    std::int64_t identity_pass = 0;
    std::int64_t decomp_pass = 0;
  };

  constexpr std::int64_t kChunk = 4096;
  const std::int64_t nchunks = (trials + kChunk - 1) / kChunk;
  std::vector<Partial> parts(static_cast<std::size_t>(nchunks));

  detail::parallel_chunks(nchunks, workers, [&](std::int64_t c) {
    Partial& p = parts[static_cast<std::size_t>(c)];
    const std::int64_t begin = c * kChunk;
    const std::int64_t end = std::min(trials, begin + kChunk);
    Vec x(n), z1(n), z2(n), v(n), w(n), rhs(n);
    DitherSource dither(seed, "Uq");
    for (std::int64_t t = begin; t < end; ++t) {
      const auto ct = static_cast<std::uint64_t>(t);
      RandomStream sx(seed, "X", ct), s1(seed, "Z1", ct), s2(seed, "Z2", ct);
      sx.fill_gaussian(x, s_p);
      s1.fill_gaussian(z1, s_n1);
      s2.fill_gaussian(z2, s_n2);
      const Vec u = dither.at(pair.fine(), ct);

      const Trace tr = run_trial(cfg, pair, x, z1, z2, u);

      // x = Q(x) + x mod L on the encoder input, relative 1e-12.
      for (int i = 0; i < n; ++i) v[i] = a1 * tr.source[i] + u[i];
      const Vec qv = pair.fine().quantize(v);
      bool decomp_ok = true;
      double norm_v = 0.0, norm_err = 0.0;
      for (int i = 0; i < n; ++i) {
        const double err = v[i] - (qv[i] + tr.quant_error[i]);
        norm_err += err * err;
        norm_v += v[i] * v[i];
      }
      decomp_ok = norm_err <= 1e-24 * (1.0 + norm_v);
      if (decomp_ok) ++p.decomp_pass;

      double d = 0.0;
      for (int i = 0; i < n; ++i) {
        const double e = tr.reconstruction[i] - tr.source[i];
        d += e * e;
      }
      d /= n;
      p.dist_all.add(d);

      if (tr.wrapped) {
        ++p.wraps;
        continue;
      }
      ++p.no_wrap;
      p.dist_nw.add(d);
      p.dist_nw_sq.add(d * d);

      double resid_sq = 0.0, eq_sq = 0.0;
      bool identity_ok = true;
      for (int i = 0; i < n; ++i) {
        const double resid = (1.0 - a2) * x[i] - a2 * z2[i] + z1[i];
        resid_sq += resid * resid;
        eq_sq += tr.quant_error[i] * tr.quant_error[i];
        const double expect = -(1.0 - a1 * a1) * resid - a1 * tr.quant_error[i];
        const double got = tr.reconstruction[i] - tr.source[i];
        if (std::abs(got - expect) > 1e-9 * (1.0 + std::abs(expect))) {
          identity_ok = false;
        }
      }
      p.resid_nw.add(resid_sq / n);
      p.eq_nw.add(eq_sq / n);
      if (identity_ok) ++p.identity_pass;
    }
  });

  // Merge in chunk order so the result is worker-count independent.
  detail::KahanSum dist_all, dist_nw, dist_nw_sq, resid_nw, eq_nw;
  std::int64_t wraps = 0, no_wrap = 0, identity_pass = 0, decomp_pass = 0;
  for (const Partial& p : parts) {
    dist_all.add(p.dist_all.sum);
    dist_nw.add(p.dist_nw.sum);
    dist_nw_sq.add(p.dist_nw_sq.sum);
    resid_nw.add(p.resid_nw.sum);
    eq_nw.add(p.eq_nw.sum);
    wraps += p.wraps;
    no_wrap += p.no_wrap;
    identity_pass += p.identity_pass;
    decomp_pass += p.decomp_pass;
  }

  SimReport rep;
  rep.trials = trials;
  rep.k = pair.nesting();
  rep.rate_bits = pair.rate_bits();
  rep.gamma = cfg.gamma;
  rep.coarse_sigma2 = pair.coarse().second_moment();
  rep.ideal_coarse_sigma2 = cfg.sigma2_resid();
  rep.seed = seed;
  rep.wrap_rate = static_cast<double>(wraps) / static_cast<double>(trials);
  rep.distortion = dist_all.sum / static_cast<double>(trials);
  rep.decomposition_pass_rate =
      static_cast<double>(decomp_pass) / static_cast<double>(trials);
  if (no_wrap > 0) {
    const double c = static_cast<double>(no_wrap);
    rep.distortion_no_wrap = dist_nw.sum / c;
    const double var =
        std::max(0.0, dist_nw_sq.sum / c -
                          rep.distortion_no_wrap * rep.distortion_no_wrap);
    rep.distortion_no_wrap_se = std::sqrt(var / c);
    rep.resid_moment = resid_nw.sum / c;
    rep.eq_moment = eq_nw.sum / c;
    rep.identity_pass_rate = static_cast<double>(identity_pass) / c;
  } else {
    rep.identity_pass_rate = 1.0;  // vacuous
  }
  return rep;
}

}  // namespace latcf::wz
