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
#include <cstdio>
#include <numeric>
#include <sstream>

#include "latcf/parallel.hpp"
#include "latcf/rates.hpp"

namespace latcf::cf {

namespace {

void check_dim(int expected, std::size_t got, const char* what) {
  if (static_cast<std::size_t>(expected) != got) {
    std::ostringstream os;
    os << what << ": expected dimension " << expected << ", got " << got;
    throw std::invalid_argument(os.str());
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

bool pow_fits_u63(int k, int n) {
  unsigned __int128 acc = 1;
  for (int i = 0; i < n; ++i) {
    acc *= static_cast<unsigned>(k);
    if (acc > (static_cast<unsigned __int128>(1) << 63)) return false;
  }
  return true;
}

std::uint64_t ipow_u64(int k, int n) {
  std::uint64_t acc = 1;
  for (int i = 0; i < n; ++i) acc *= static_cast<std::uint64_t>(k);
  return acc;
}

}  // namespace

const char* mode_name(Mode m) {
  return m == Mode::chained ? "chained" : "genie";
}

double Config::rate_bits() const { return std::log2(double(k1)); }
double Config::relay_rate_bits() const { return std::log2(double(k2)); }
double Config::quant_rate_bits() const { return std::log2(double(kq)); }

double Config::effective_rate() const {
  return rate_bits() * static_cast<double>(B) / static_cast<double>(B + 1);
}

double Config::alpha2() const { return P1 / (P1 + N3); }

double Config::sigma2_wz() const { return N2 + P1 * N3 / (P1 + N3); }

double Config::ideal_coarse_sigma2() const { return sigma2_wz() + D; }

double Config::beta_relay() const { return P2 / (P2 + P1 + N3); }

double Config::n_eff() const { return 1.0 / (1.0 / N3 + 1.0 / (N2 + D)); }

double Config::alpha_combine() const { return P1 / (P1 + n_eff()); }

bool Config::ideal_rate_feasible() const {
  // Ideal source-coding rate of the compression index vs the relay-link
  // channel rate; equality is the D* point.
  const double rhat = 0.5 * std::log2(1.0 + sigma2_wz() / D);
  const double rprime = rates::relay_rate_bound(P1, P2, N3);
  return rhat <= rprime + 1e-12;
}

std::vector<std::string> Config::validate() const {
  std::vector<std::string> bad;
  auto pos = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream os;
      os << name << " must be finite and > 0 (got " << v << ")";
      bad.push_back(os.str());
    }
  };
  pos(P1, "P1");
  pos(P2, "P2");
  pos(N2, "N2");
  pos(N3, "N3");
  pos(D, "D");
  if (n < 1) bad.push_back("dimension n must be >= 1");
  if (B < 2) bad.push_back("block count B must be >= 2");
  if (k1 < 2) bad.push_back("k1 must be >= 2");
  if (k2 < 2) bad.push_back("k2 must be >= 2");
  if (kq < 2) bad.push_back("kq must be >= 2");
  if (kq > k2) {
    std::ostringstream os;
    os << "kq=" << kq << " exceeds k2=" << k2
       << ": the compression rate log2(kq) must not exceed the relay "
          "codebook rate log2(k2) (every compression index needs a distinct "
          "relay codeword)";
    bad.push_back(os.str());
  }
  if (n >= 1) {
    if (k1 >= 2 && !pow_fits_u63(k1, n)) {
      bad.push_back("k1^n exceeds the 63-bit index space");
    }
    if (k2 >= 2 && !pow_fits_u63(k2, n)) {
      bad.push_back("k2^n exceeds the 63-bit index space");
    }
  }
  return bad;
}

void Config::validate_or_throw() const {
  const auto bad = validate();
  if (bad.empty()) return;
  std::ostringstream os;
  os << "invalid relay configuration:";
  for (const auto& b : bad) os << "\n  - " << b;
  throw config_error(os.str());
}

NestedPair Config::make_tx_codebook() const {
  return NestedPair::from_coarse_sigma2(n, k1, P1);
}

NestedPair Config::make_relay_codebook() const {
  return NestedPair::from_coarse_sigma2(n, k2, P2);
}

NestedPair Config::make_quant_codebook() const {
  return NestedPair::from_fine_sigma2(n, kq, D);
}

Vec tx_encode(const NestedPair& c1, std::uint64_t w,
              std::span<const double> u1) {
  check_dim(c1.dim(), u1.size(), "tx_encode: dither");
  Vec t1 = c1.codeword_of_index(w);  // range-checks w
  for (int i = 0; i < c1.dim(); ++i) t1[i] += u1[i];
  return c1.coarse().mod(t1);
}

std::pair<Vec, std::uint64_t> relay_compress(const NestedPair& cq,
                                             std::span<const double> y2,
                                             std::span<const double> uq) {
  const int n = cq.dim();
  check_dim(n, y2.size(), "relay_compress: observation");
  check_dim(n, uq.size(), "relay_compress: dither");
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = y2[i] + uq[i];  // alpha1 = 1
  Vec I = cq.coarse().mod(cq.fine().quantize(v));
  const std::uint64_t idx = cq.coset_index(I);
  return {std::move(I), idx};
}

std::uint64_t embed_index(std::uint64_t i, int kq, int k2, int n) {
  if (kq > k2) {
    throw config_error("index embedding requires kq <= k2 (compression rate "
                       "must not exceed the relay codebook rate)");
  }
  if (i >= ipow_u64(kq, n)) {
    throw config_error("compression index out of range for the quantization codebook");
  }
  std::uint64_t out = 0, weight = 1;
  for (int d = 0; d < n; ++d) {
    out += (i % static_cast<std::uint64_t>(kq)) * weight;
    i /= static_cast<std::uint64_t>(kq);
    weight *= static_cast<std::uint64_t>(k2);
  }
  return out;
}

std::uint64_t unembed_index(std::uint64_t idx, int kq, int k2, int n) {
  std::uint64_t out = 0, weight = 1;
  for (int d = 0; d < n; ++d) {
    // Digits of a correct decode are < kq; corrupted digits wrap mod kq.
    out += ((idx % static_cast<std::uint64_t>(k2)) %
            static_cast<std::uint64_t>(kq)) *
           weight;
    idx /= static_cast<std::uint64_t>(k2);
    weight *= static_cast<std::uint64_t>(kq);
  }
  return out;
}

Vec relay_encode(const NestedPair& c2, const NestedPair& cq, std::uint64_t i,
                 std::span<const double> u2) {
  check_dim(c2.dim(), u2.size(), "relay_encode: dither");
  Vec t2 = c2.codeword_of_index(embed_index(i, cq.nesting(), c2.nesting(),
                                            c2.dim()));
  for (int j = 0; j < c2.dim(); ++j) t2[j] += u2[j];
  return c2.coarse().mod(t2);
}

Vec dest_decode_relay(const NestedPair& c2, std::span<const double> y3,
                      std::span<const double> u2, double beta) {
  const int n = c2.dim();
  check_dim(n, y3.size(), "dest_decode_relay: observation");
  check_dim(n, u2.size(), "dest_decode_relay: dither");
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = beta * y3[i] - u2[i];
  return c2.coarse().mod(c2.fine().quantize(v));
}

Vec dest_reconstruct(const NestedPair& cq, std::span<const double> I,
                     std::span<const double> uq,
                     std::span<const double> y3_clean, double alpha2) {
  const int n = cq.dim();
  check_dim(n, I.size(), "dest_reconstruct: coset point");
  check_dim(n, uq.size(), "dest_reconstruct: dither");
  check_dim(n, y3_clean.size(), "dest_reconstruct: side info");
  Vec w(n);
  for (int i = 0; i < n; ++i) w[i] = I[i] - uq[i] - alpha2 * y3_clean[i];
  Vec folded = cq.coarse().mod(w);
  for (int i = 0; i < n; ++i) folded[i] += alpha2 * y3_clean[i];
  return folded;
}

Vec combine_views(std::span<const double> y3_clean,
                  std::span<const double> y2_hat, double w3, double w2) {
  if (y3_clean.size() != y2_hat.size()) {
    throw std::invalid_argument("combine_views: dimension mismatch");
  }
  const double norm = w3 + w2;
  Vec y(y3_clean.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = (w3 * y3_clean[i] + w2 * y2_hat[i]) / norm;
  }
  return y;
}

std::uint64_t dest_combine_decode(const NestedPair& c1,
                                  std::span<const double> y3_clean,
                                  std::span<const double> y2_hat,
                                  std::span<const double> u1, double alpha_c,
                                  double w3, double w2) {
  const int n = c1.dim();
  check_dim(n, y3_clean.size(), "dest_combine_decode: direct view");
  check_dim(n, y2_hat.size(), "dest_combine_decode: relay view");
  check_dim(n, u1.size(), "dest_combine_decode: dither");
  const Vec y = combine_views(y3_clean, y2_hat, w3, w2);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = alpha_c * y[i] - u1[i];
  const Vec t1 = c1.coarse().mod(c1.fine().quantize(v));
  return c1.coset_index(t1);
}

std::uint64_t SimReport::digest() const {
  std::uint64_t h = fnv1a64_bytes(&runs, sizeof runs);
  h = fnv1a64_bytes(&B, sizeof B, h);
  h = fnv1a64_bytes(&seed, sizeof seed, h);
  const int m = (mode == Mode::chained) ? 0 : 1;
  h = fnv1a64_bytes(&m, sizeof m, h);
  const double vals[] = {effective_rate, t2_error_rate,    wrap_rate,
                         msg_error_rate, power1,           power2,
                         comb_resid_var, comb_resid_var_se};
  for (double v : vals) {
    char buf[32];
    const int len = std::snprintf(buf, sizeof buf, "%.17g|", v);
    h = fnv1a64_bytes(buf, static_cast<std::size_t>(len), h);
  }
  return h;
}

namespace {

struct Partial {
  std::int64_t t2_errors = 0;
  std::int64_t wraps = 0;
  std::int64_t msg_errors = 0;
  detail::KahanSum pow1, pow2, comb_var, comb_var_sq;
  std::int64_t blocks = 0;       // channel blocks (power accounting)
  std::int64_t comb_blocks = 0;  // clean non-wrapped decode slots
};

struct Codebooks {
  NestedPair c1, c2, cq;
};

// One block-Markov run of B+1 channel blocks. The aggregate path and the
// trace path share this pipeline; `trace` may be null.
void run_blocks(const Config& cfg, const Codebooks& books, std::int64_t run,
                Partial& p, std::vector<BlockTrace>* trace) {
  const NestedPair& c1 = books.c1;
  const NestedPair& c2 = books.c2;
  const NestedPair& cq = books.cq;
  const int n = cfg.n;
  const int B = cfg.B;
  const bool genie = cfg.mode == Mode::genie;
  const double a2 = cfg.alpha2();
  const double beta = cfg.beta_relay();
  const double ac = cfg.alpha_combine();
  const double w3 = 1.0 / cfg.N3;
  const double w2 = 1.0 / (cfg.N2 + cfg.D);
  const double s_n2 = std::sqrt(cfg.N2);
  const double s_n3 = std::sqrt(cfg.N3);
  const std::uint64_t msg_space = ipow_u64(cfg.k1, n);

  const std::uint64_t rs =
      RandomStream::derive(cfg.seed, "run", static_cast<std::uint64_t>(run));
  DitherSource du1(rs, "U1"), du2(rs, "U2"), duq(rs, "Uq");

  // Per-block state carried from block j-1.
  struct Prev {
    std::uint64_t w = 0;
    Vec x1, z2, z3, y2, u1;
    Vec y3c_state;  // decoder side-info state (mode-dependent)
    Vec y3c_true;   // ground-truth X1 + Z3
  } prev;

  std::uint64_t i_prev_true = 0;  // compression index carried in block j
  Vec eq_prev;                    // quantization error of Y2(j-1)
  Vec i_point_true;               // coset point I(j-1)

  for (int j = 1; j <= B + 1; ++j) {
    const auto bj = static_cast<std::uint64_t>(j);
    const Vec u1 = du1.at(c1.coarse(), bj);
    const Vec u2 = du2.at(c2.coarse(), bj);
    Vec z2(n), z3(n);
    RandomStream(rs, "Z2", bj).fill_gaussian(z2, s_n2);
    RandomStream(rs, "Z3", bj).fill_gaussian(z3, s_n3);
    const std::uint64_t w =
        (j <= B) ? RandomStream(rs, "W", bj).below(msg_space) : 0;

    const Vec x1 = tx_encode(c1, w, u1);

    // Relay: compress the previous block's observation; i(0) = 0.
    if (j >= 2) {
      const Vec uq_prev = duq.at(cq.fine(), bj - 1);
      auto [ipt, idx] = relay_compress(cq, prev.y2, uq_prev);
      i_point_true = std::move(ipt);
      i_prev_true = idx;
      // e_q = (y2 + uq) mod fine.
      Vec v(n);
      for (int i = 0; i < n; ++i) v[i] = prev.y2[i] + uq_prev[i];
      eq_prev = cq.fine().mod(v);
    } else {
      i_prev_true = 0;
    }
    const Vec x2 = relay_encode(c2, cq, i_prev_true, u2);

    Vec y2(n), y3(n);
    for (int i = 0; i < n; ++i) {
      y2[i] = x1[i] + z2[i];
      y3[i] = x1[i] + x2[i] + z3[i];
    }

    p.pow1.add(std::inner_product(x1.begin(), x1.end(), x1.begin(), 0.0) / n);
    p.pow2.add(std::inner_product(x2.begin(), x2.end(), x2.begin(), 0.0) / n);
    ++p.blocks;

    BlockTrace tr;
    if (trace) {
      tr.block = j;
      tr.message = w;
      tr.relay_index = i_prev_true;
      tr.x1 = x1;
      tr.x2 = x2;
      tr.y2 = y2;
      tr.y3 = y3;
    }

    // Destination.
    const std::uint64_t t2_true_idx =
        embed_index(i_prev_true, cfg.kq, cfg.k2, n);
    std::uint64_t t2hat_idx = t2_true_idx;  // block 1: i(0) known
    if (j >= 2) {
      const Vec t2hat = dest_decode_relay(c2, y3, u2, beta);
      t2hat_idx = c2.coset_index(t2hat);
      if (t2hat_idx != t2_true_idx) {
        ++p.t2_errors;
        tr.t2_error = true;
      }
      if (genie) t2hat_idx = t2_true_idx;
    }
    Vec x2hat = c2.codeword_of_index(t2hat_idx);
    for (int i = 0; i < n; ++i) x2hat[i] += u2[i];
    x2hat = c2.coarse().mod(x2hat);
    Vec y3c(n);
    for (int i = 0; i < n; ++i) y3c[i] = y3[i] - x2hat[i];

    if (j >= 2) {
      const Vec uq_prev = duq.at(cq.fine(), bj - 1);

      // Ground-truth wrap of the reconstruction step for block j-1.
      bool wrapped = false;
      {
        Vec m(n);
        for (int i = 0; i < n; ++i) {
          m[i] = (1.0 - a2) * prev.x1[i] + prev.z2[i] - a2 * prev.z3[i] -
                 eq_prev[i];
        }
        const Vec q = cq.coarse().quantize(m);
        for (double c : q) {
          if (c != 0.0) {
            wrapped = true;
            break;
          }
        }
      }
      if (wrapped) {
        ++p.wraps;
        tr.wrap_error = true;
      }

      // Decode the previous block's message from the decoder's state.
      const std::uint64_t i_hat = unembed_index(t2hat_idx, cfg.kq, cfg.k2, n);
      const Vec i_point = cq.codeword_of_index(i_hat);
      const Vec& side = genie ? prev.y3c_true : prev.y3c_state;
      const Vec y2hat = dest_reconstruct(cq, i_point, uq_prev, side, a2);
      const std::uint64_t w_hat =
          dest_combine_decode(c1, side, y2hat, prev.u1, ac, w3, w2);
      if (w_hat != prev.w) {
        ++p.msg_errors;
        tr.msg_error = true;
      }

      // Combined-view residual on the ground-truth pipeline (correct
      // codeword, true side info), non-wrapped blocks only.
      if (!wrapped) {
        const Vec y2hat_true =
            dest_reconstruct(cq, i_point_true, uq_prev, prev.y3c_true, a2);
        const Vec yc = combine_views(prev.y3c_true, y2hat_true, w3, w2);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
          const double r = yc[i] - prev.x1[i];
          acc += r * r;
        }
        acc /= n;
        p.comb_var.add(acc);
        p.comb_var_sq.add(acc * acc);
        ++p.comb_blocks;
      }
    }

    if (trace) trace->push_back(std::move(tr));

    prev.w = w;
    prev.x1 = x1;
    prev.z2 = z2;
    prev.z3 = z3;
    prev.y2 = y2;
    prev.u1 = u1;
    Vec y3c_true(n);
    for (int i = 0; i < n; ++i) y3c_true[i] = x1[i] + z3[i];
    prev.y3c_state = genie ? y3c_true : y3c;
    prev.y3c_true = std::move(y3c_true);
  }
}

}  // namespace

std::vector<BlockTrace> trace_run(const Config& cfg, std::int64_t run_index) {
  cfg.validate_or_throw();
  const Codebooks books{cfg.make_tx_codebook(), cfg.make_relay_codebook(),
                        cfg.make_quant_codebook()};
  Partial scratch;
  std::vector<BlockTrace> trace;
  trace.reserve(static_cast<std::size_t>(cfg.B) + 1);
  run_blocks(cfg, books, run_index, scratch, &trace);
  return trace;
}

SimReport simulate(const Config& cfg, std::int64_t runs, int workers) {
  if (runs < 1) throw std::invalid_argument("runs must be >= 1");
  cfg.validate_or_throw();

  const Codebooks books{cfg.make_tx_codebook(), cfg.make_relay_codebook(),
                        cfg.make_quant_codebook()};
  std::vector<Partial> parts(static_cast<std::size_t>(runs));
  detail::parallel_chunks(runs, workers, [&](std::int64_t run) {
    run_blocks(cfg, books, run, parts[static_cast<std::size_t>(run)], nullptr);
  });

  detail::KahanSum pow1, pow2, comb_var, comb_var_sq;
  std::int64_t t2_errors = 0, wraps = 0, msg_errors = 0, blocks = 0,
               comb_blocks = 0;
  for (const Partial& p : parts) {
    pow1.add(p.pow1.sum);
    pow2.add(p.pow2.sum);
    comb_var.add(p.comb_var.sum);
    comb_var_sq.add(p.comb_var_sq.sum);
    t2_errors += p.t2_errors;
    wraps += p.wraps;
    msg_errors += p.msg_errors;
    blocks += p.blocks;
    comb_blocks += p.comb_blocks;
  }

  SimReport rep;
  rep.runs = runs;
  rep.B = cfg.B;
  rep.mode = cfg.mode;
  rep.seed = cfg.seed;
  rep.effective_rate = cfg.effective_rate();
  const double decodes = static_cast<double>(runs) * cfg.B;
  rep.t2_error_rate = static_cast<double>(t2_errors) / decodes;
  rep.wrap_rate = static_cast<double>(wraps) / decodes;
  rep.msg_error_rate = static_cast<double>(msg_errors) / decodes;
  rep.power1 = pow1.sum / static_cast<double>(blocks);
  rep.power2 = pow2.sum / static_cast<double>(blocks);
  rep.comb_resid_blocks = comb_blocks;
  if (comb_blocks > 0) {
    const double c = static_cast<double>(comb_blocks);
    rep.comb_resid_var = comb_var.sum / c;
    const double var = std::max(
        0.0, comb_var_sq.sum / c - rep.comb_resid_var * rep.comb_resid_var);
    rep.comb_resid_var_se = std::sqrt(var / c);
  }
  return rep;
}

}  // namespace latcf::cf
