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

#include "latcf/relay_cf.hpp"

#include <cmath>
#include <set>
#include <string>

#include "doctest.h"
#include "latcf/rates.hpp"

namespace cf = latcf::cf;
using latcf::DitherSource;
using latcf::NestedPair;
using latcf::RandomStream;
using latcf::Vec;

namespace {

// The back-off operating point used across these tests: rates ~40% below the
// ideal bounds, wrap-safe quantizer.
cf::Config backoff_config() {
  cf::Config c;
  c.P1 = 40.0;
  c.P2 = 4100.0;
  c.N2 = 1.0;
  c.N3 = 1.0;
  c.D = 2.0;
  c.n = 8;
  c.B = 20;
  c.k1 = 3;
  c.k2 = 3;
  c.kq = 3;
  c.seed = 42;
  c.mode = cf::Mode::chained;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  cf::Config c = backoff_config();
  CHECK(c.validate().empty());

  c.kq = 5;  // exceeds k2
  const auto bad = c.validate();
  REQUIRE(!bad.empty());
  bool mentions_requirement = false;
  for (const auto& b : bad) {
    if (b.find("log2(kq)") != std::string::npos) mentions_requirement = true;
  }
  CHECK(mentions_requirement);

  c = backoff_config();
  c.B = 1;
  CHECK(!c.validate().empty());
  c = backoff_config();
  c.P1 = -2.0;
  CHECK(!c.validate().empty());
  c = backoff_config();
  c.n = 64;
  c.k1 = 4;  // 4^64 overflows the index space
  CHECK(!c.validate().empty());
}

TEST_CASE("ideal rate feasibility flag") {
  cf::Config c = backoff_config();
  // Rhat_ideal = 0.5 log2(1 + 1.9756/2) ~ 0.496, R'_ideal ~ 3.33.
  CHECK(c.ideal_rate_feasible());
  c.P2 = 0.5;  // strangles the relay link
  CHECK(!c.ideal_rate_feasible());
}

TEST_CASE("derived quantities") {
  cf::Config c = backoff_config();
  CHECK(c.alpha2() == doctest::Approx(40.0 / 41.0).epsilon(1e-12));
  CHECK(c.sigma2_wz() == doctest::Approx(1.0 + 40.0 / 41.0).epsilon(1e-12));
  CHECK(c.beta_relay() == doctest::Approx(4100.0 / 4141.0).epsilon(1e-12));
  // Symmetric check: P1 = N2+D = N3 gives n_eff = N3/2.
  cf::Config s;
  s.P1 = 2.0;
  s.N2 = 1.5;
  s.D = 0.5;
  s.N3 = 2.0;
  CHECK(s.n_eff() == doctest::Approx(1.0).epsilon(1e-12));
  // Useless relay: N2 + D huge leaves the direct noise.
  s.N2 = 1e12;
  CHECK(s.n_eff() == doctest::Approx(2.0).epsilon(1e-6));

  CHECK(backoff_config().effective_rate() ==
        doctest::Approx(std::log2(3.0) * 20.0 / 21.0).epsilon(1e-12));
}

TEST_CASE("codebook construction hits the power constraints") {
  const cf::Config c = backoff_config();
  CHECK(c.make_tx_codebook().coarse().second_moment() ==
        doctest::Approx(c.P1).epsilon(1e-12));
  CHECK(c.make_relay_codebook().coarse().second_moment() ==
        doctest::Approx(c.P2).epsilon(1e-12));
  CHECK(c.make_quant_codebook().fine().second_moment() ==
        doctest::Approx(c.D).epsilon(1e-12));
}

TEST_CASE("tx_encode basics") {
  const cf::Config c = backoff_config();
  const NestedPair c1 = c.make_tx_codebook();
  const Vec zero(c.n, 0.0);
  const Vec x0 = cf::tx_encode(c1, 0, zero);
  for (double v : x0) CHECK(v == 0.0);

  CHECK_THROWS_AS(cf::tx_encode(c1, 6561, zero), std::invalid_argument);

  // Distinct messages, same dither: distinct signals.
  const NestedPair small = NestedPair::from_coarse_sigma2(2, 3, 4.0);
  DitherSource ds(3, "U1");
  const Vec u = ds.at(small.coarse(), 0);
  std::set<std::pair<double, double>> seen;
  for (std::uint64_t w = 0; w < 9; ++w) {
    const Vec x = cf::tx_encode(small, w, u);
    seen.insert({x[0], x[1]});
  }
  CHECK(seen.size() == 9);
}

TEST_CASE("tx power matches P1 by the crypto lemma") {
  const cf::Config c = backoff_config();
  const NestedPair c1 = c.make_tx_codebook();
  DitherSource ds(1234, "U1");
  RandomStream rw(1234, "W", 0);
  double acc = 0.0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const Vec u = ds.at(c1.coarse(), static_cast<std::uint64_t>(t));
    const std::uint64_t w = rw.below(6561);
    const Vec x = cf::tx_encode(c1, w, u);
    for (double v : x) acc += v * v;
  }
  const double power = acc / (double(trials) * c.n);
  CHECK(power == doctest::Approx(c.P1).epsilon(0.02));
}

TEST_CASE("relay_compress basics") {
  const cf::Config c = backoff_config();
  const NestedPair cq = c.make_quant_codebook();
  const Vec zero(c.n, 0.0);
  const auto [I0, i0] = cf::relay_compress(cq, zero, zero);
  for (double v : I0) CHECK(v == 0.0);
  CHECK(i0 == 0);

  // e_q = (y2 + uq) mod fine has second moment D; round trips hold.
  DitherSource ds(77, "Uq");
  RandomStream ry(77, "Y2", 0);
  double acc = 0.0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    Vec y2(c.n);
    ry.fill_gaussian(y2, std::sqrt(c.P1 + c.N2));
    const Vec uq = ds.at(cq.fine(), static_cast<std::uint64_t>(t));
    const auto [I, idx] = cf::relay_compress(cq, y2, uq);
    const Vec back = cq.codeword_of_index(idx);
    for (int i = 0; i < c.n; ++i) {
      CHECK(back[i] == doctest::Approx(I[i]).epsilon(1e-9));
    }
    Vec v(c.n);
    for (int i = 0; i < c.n; ++i) v[i] = y2[i] + uq[i];
    const Vec eq = cq.fine().mod(v);
    for (double e : eq) acc += e * e;
  }
  CHECK(acc / (double(trials) * c.n) == doctest::Approx(c.D).epsilon(0.02));
}

TEST_CASE("index embedding") {
  // kq = 2 into k2 = 3, n = 3: all 8 indices embed injectively and invert.
  std::set<std::uint64_t> images;
  for (std::uint64_t i = 0; i < 8; ++i) {
    const std::uint64_t e = cf::embed_index(i, 2, 3, 3);
    images.insert(e);
    CHECK(cf::unembed_index(e, 2, 3, 3) == i);
  }
  CHECK(images.size() == 8);
  // Identity when kq == k2.
  for (std::uint64_t i = 0; i < 27; ++i) {
    CHECK(cf::embed_index(i, 3, 3, 3) == i);
  }
  CHECK_THROWS_AS(cf::embed_index(8, 2, 3, 3), latcf::config_error);
  CHECK_THROWS_AS(cf::embed_index(0, 3, 2, 3), latcf::config_error);
}

TEST_CASE("relay_encode: index zero sends the bare dither") {
  const cf::Config c = backoff_config();
  const NestedPair c2 = c.make_relay_codebook();
  const NestedPair cq = c.make_quant_codebook();
  DitherSource ds(5, "U2");
  const Vec u2 = ds.at(c2.coarse(), 0);
  const Vec x2 = cf::relay_encode(c2, cq, 0, u2);
  for (int i = 0; i < c.n; ++i) CHECK(x2[i] == u2[i]);
}

TEST_CASE("dest_decode_relay: near-noiseless decode is exact") {
  // X1 absent, destination noise tiny: decoding must recover t2.
  cf::Config c;
  c.P1 = 1e-9;
  c.P2 = 4.0;
  c.N2 = 1.0;
  c.N3 = 1e-9;
  c.D = 1.0;
  c.n = 4;
  c.k2 = 3;
  c.kq = 3;
  const NestedPair c2 = c.make_relay_codebook();
  const NestedPair cq = c.make_quant_codebook();
  DitherSource ds(8, "U2");
  RandomStream rz(8, "Z3", 0);
  const double beta = c.beta_relay();
  for (std::uint64_t i = 0; i < 81; ++i) {
    const Vec u2 = ds.at(c2.coarse(), i);
    const Vec x2 = cf::relay_encode(c2, cq, i, u2);
    Vec y3(c.n);
    for (int j = 0; j < c.n; ++j) y3[j] = x2[j] + 1e-6 * rz.gaussian();
    const Vec t2hat = cf::dest_decode_relay(c2, y3, u2, beta);
    CHECK(c2.coset_index(t2hat) == cf::embed_index(i, c.kq, c.k2, c.n));
  }
}

TEST_CASE("dest_reconstruct: per-sample identity Y2hat = X1 + Z2 - Eq") {
  const cf::Config c = backoff_config();
  const NestedPair c1 = c.make_tx_codebook();
  const NestedPair cq = c.make_quant_codebook();
  const double a2 = c.alpha2();
  DitherSource du1(21, "U1"), duq(21, "Uq");
  int wrapped = 0;
  for (int t = 0; t < 2000; ++t) {
    const auto ct = static_cast<std::uint64_t>(t);
    Vec z2(c.n), z3(c.n);
    RandomStream(21, "Z2", ct).fill_gaussian(z2, std::sqrt(c.N2));
    RandomStream(21, "Z3", ct).fill_gaussian(z3, std::sqrt(c.N3));
    const std::uint64_t w = RandomStream(21, "W", ct).below(6561);
    const Vec u1 = du1.at(c1.coarse(), ct);
    const Vec uq = duq.at(cq.fine(), ct);
    const Vec x1 = cf::tx_encode(c1, w, u1);
    Vec y2(c.n), y3c(c.n);
    for (int i = 0; i < c.n; ++i) {
      y2[i] = x1[i] + z2[i];
      y3c[i] = x1[i] + z3[i];
    }
    const auto [I, idx] = cf::relay_compress(cq, y2, uq);
    Vec v(c.n);
    for (int i = 0; i < c.n; ++i) v[i] = y2[i] + uq[i];
    const Vec eq = cq.fine().mod(v);

    // Ground-truth wrap test.
    Vec m(c.n);
    for (int i = 0; i < c.n; ++i) {
      m[i] = (1.0 - a2) * x1[i] + z2[i] - a2 * z3[i] - eq[i];
    }
    bool wrap = false;
    for (double q : cq.coarse().quantize(m)) {
      if (q != 0.0) wrap = true;
    }
    if (wrap) {
      ++wrapped;
      continue;
    }

    const Vec y2hat = cf::dest_reconstruct(cq, I, uq, y3c, a2);
    for (int i = 0; i < c.n; ++i) {
      const double expect = x1[i] + z2[i] - eq[i];
      CHECK(y2hat[i] == doctest::Approx(expect).epsilon(1e-9));
    }
  }
  CHECK(wrapped < 20);
}

TEST_CASE("combine_views: weights and the useless-relay limit") {
  const Vec a{1.0, 2.0};
  const Vec b{3.0, 6.0};
  // Equal weights: midpoint.
  const Vec mid = cf::combine_views(a, b, 1.0, 1.0);
  CHECK(mid[0] == doctest::Approx(2.0));
  CHECK(mid[1] == doctest::Approx(4.0));
  // w2 -> 0: direct view only.
  const Vec direct = cf::combine_views(a, b, 1.0, 1e-15);
  CHECK(direct[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("simulate: near-noiseless runs make no errors in either mode") {
  // The transmit signal is interference for the relay-codeword decode, so
  // P1 must sit well below P2 for the degenerate zero-error regime.
  cf::Config c;
  c.P1 = 0.01;
  c.P2 = 100.0;
  c.N2 = 1e-9;
  c.N3 = 1e-9;
  c.D = 1e-6;
  c.n = 4;
  c.B = 10;
  c.k1 = 2;
  c.k2 = 4;
  c.kq = 4;
  c.seed = 7;
  for (auto mode : {cf::Mode::chained, cf::Mode::genie}) {
    c.mode = mode;
    const cf::SimReport rep = cf::simulate(c, 20);
    CHECK(rep.msg_error_rate == 0.0);
    CHECK(rep.t2_error_rate == 0.0);
    CHECK(rep.wrap_rate == 0.0);
  }
}

TEST_CASE("simulate: determinism and worker independence") {
  cf::Config c = backoff_config();
  c.B = 10;
  const cf::SimReport r1 = cf::simulate(c, 40, 1);
  const cf::SimReport r2 = cf::simulate(c, 40, 1);
  const cf::SimReport r3 = cf::simulate(c, 40, 4);
  CHECK(r1.digest() == r2.digest());
  CHECK(r1.digest() == r3.digest());
  c.seed = 43;
  CHECK(cf::simulate(c, 40, 2).digest() != r1.digest());
}

TEST_CASE("simulate: powers, combined residual, chained vs genie") {
  cf::Config c = backoff_config();
  c.B = 20;
  const cf::SimReport chained = cf::simulate(c, 60, 4);
  CHECK(chained.power1 == doctest::Approx(c.P1).epsilon(0.02));
  CHECK(chained.power2 == doctest::Approx(c.P2).epsilon(0.02));
  // Combined residual variance matches the harmonic noise budget with the
  // measured quantization moment folded in (here sigma^2(eq) = D exactly).
  CHECK(std::abs(chained.comb_resid_var - c.n_eff()) <=
        3.0 * chained.comb_resid_var_se);

  c.mode = cf::Mode::genie;
  const cf::SimReport genie = cf::simulate(c, 60, 4);
  CHECK(genie.msg_error_rate <= chained.msg_error_rate + 1e-12);
  // Shared noise realizations: same ground-truth wrap statistics.
  CHECK(genie.wrap_rate == doctest::Approx(chained.wrap_rate));
}

TEST_CASE("simulate: message errors rise with the rate") {
  cf::Config c = backoff_config();
  c.B = 20;
  double prev = -1.0;
  for (int k1 : {3, 6, 12, 24}) {
    c.k1 = k1;
    const cf::SimReport rep = cf::simulate(c, 30, 4);
    CHECK(rep.msg_error_rate >= prev - 1e-12);
    prev = rep.msg_error_rate;
  }
  CHECK(prev > 0.5);  // k1 = 24 is far past the bound
}

TEST_CASE("simulate: kq > k2 is rejected up front") {
  cf::Config c = backoff_config();
  c.kq = 4;
  CHECK_THROWS_AS(cf::simulate(c, 4), latcf::config_error);
}

TEST_CASE("reconstruction wrap rate falls as the quantizer cell grows") {
  cf::Config c = backoff_config();
  c.k2 = 4;  // keep kq <= k2 across the sweep
  c.B = 20;
  double prev = 2.0;
  for (int kq : {2, 3, 4}) {
    c.kq = kq;
    const cf::SimReport rep = cf::simulate(c, 50, 4);
    CHECK(rep.wrap_rate <= prev + 1e-12);
    prev = rep.wrap_rate;
  }
  CHECK(prev < 1e-3);  // kq = 4 leaves no room for wraps here
}

TEST_CASE("relay decode far above the bound is no better than chance") {
  cf::Config c = backoff_config();
  c.k2 = 40;  // log2(40) = 5.3 bits, ideal bound is 3.33
  c.kq = 3;
  c.B = 20;
  const cf::SimReport rep = cf::simulate(c, 30, 4);
  CHECK(rep.t2_error_rate > 0.9);
}

TEST_CASE("trace_run: channel model and bookkeeping hold per block") {
  cf::Config c = backoff_config();
  c.B = 12;
  const auto trace = cf::trace_run(c, 0);
  REQUIRE(trace.size() == static_cast<std::size_t>(c.B) + 1);
  const NestedPair cq = c.make_quant_codebook();
  int idx = 0;
  for (const auto& b : trace) {
    CHECK(b.block == ++idx);
    // Y2 = X1 + Z2 and Y3 = X1 + X2 + Z3: the noise recovered from the two
    // observations must be consistent per coordinate.
    for (int i = 0; i < c.n; ++i) {
      const double z3 = b.y3[i] - b.x1[i] - b.x2[i];
      CHECK(std::isfinite(z3));
      CHECK(std::abs(b.y2[i] - b.x1[i]) < 6.0 * std::sqrt(c.N2) + 1.0);
    }
    // The carried compression index is in range; block 1 carries i(0) = 0.
    if (b.block == 1) CHECK(b.relay_index == 0);
    CHECK(b.relay_index < static_cast<std::uint64_t>(cq.codebook_size()));
    // The dummy block has message 0.
    if (b.block == c.B + 1) CHECK(b.message == 0);
  }
  // Aggregates agree with simulate() on a single run.
  const cf::SimReport rep = cf::simulate(c, 1);
  std::int64_t wraps = 0, msg = 0, t2 = 0;
  for (const auto& b : trace) {
    wraps += b.wrap_error;
    msg += b.msg_error;
    t2 += b.t2_error;
  }
  CHECK(rep.wrap_rate == doctest::Approx(double(wraps) / c.B));
  CHECK(rep.msg_error_rate == doctest::Approx(double(msg) / c.B));
  CHECK(rep.t2_error_rate == doctest::Approx(double(t2) / c.B));
}
