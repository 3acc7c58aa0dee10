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

#include "latcf/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "latcf/rates.hpp"
#include "latcf/relay_cf.hpp"
#include "latcf/wyner_ziv.hpp"

namespace latcf::cli {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

bool parse_sweep_spec(const std::string& text, SweepSpec& out,
                      std::string& err) {
  // NAME:START:STOP:STEPS
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  if (parts.size() != 4 || parts[0].empty()) {
    err = "sweep must be NAME:START:STOP:STEPS (got '" + text + "')";
    return false;
  }
  try {
    std::size_t pos = 0;
    out.param = parts[0];
    out.start = std::stod(parts[1], &pos);
    if (pos != parts[1].size()) throw std::invalid_argument(parts[1]);
    out.stop = std::stod(parts[2], &pos);
    if (pos != parts[2].size()) throw std::invalid_argument(parts[2]);
    out.steps = std::stoi(parts[3], &pos);
    if (pos != parts[3].size()) throw std::invalid_argument(parts[3]);
  } catch (const std::exception&) {
    err = "sweep has a non-numeric field: '" + text + "'";
    return false;
  }
  out.active = true;
  return true;
}

using DoubleMember = double ExperimentConfig::*;

const std::map<std::string, DoubleMember>& sweepable() {
  static const std::map<std::string, DoubleMember> m = {
      {"P", &ExperimentConfig::P},   {"N1", &ExperimentConfig::N1},
      {"N2", &ExperimentConfig::N2}, {"D", &ExperimentConfig::D},
      {"P1", &ExperimentConfig::P1}, {"P2", &ExperimentConfig::P2},
      {"N3", &ExperimentConfig::N3}, {"gamma", &ExperimentConfig::gamma},
  };
  return m;
}

std::set<std::string> allowed_sweep_params(Command cmd) {
  switch (cmd) {
    case Command::rates:
      return {"P", "N1", "N2", "D", "P1", "P2", "N3"};
    case Command::wz_sim:
      return {"P", "N1", "N2", "D", "gamma"};
    case Command::cf_sim:
      return {"P1", "P2", "N2", "N3", "D"};
    default:
      return {};
  }
}

wz::Config to_wz_config(const ExperimentConfig& c) {
  wz::Config w;
  w.P = c.P;
  w.N1 = c.N1;
  w.N2 = c.N2;
  w.D = c.D;
  w.n = c.n;
  w.gamma = c.gamma;
  return w;
}

bool parse_mode(const std::string& text, cf::Mode& out) {
  if (text == "chained") {
    out = cf::Mode::chained;
    return true;
  }
  if (text == "genie") {
    out = cf::Mode::genie;
    return true;
  }
  return false;
}

cf::Config to_cf_config(const ExperimentConfig& c) {
  cf::Config r;
  r.P1 = c.P1;
  r.P2 = c.P2;
  r.N2 = c.N2;
  r.N3 = c.N3;
  r.D = c.D;
  r.n = c.n;
  r.B = c.B;
  r.k1 = c.k1;
  r.k2 = c.k2;
  r.kq = c.kq;
  r.seed = c.seed;
  parse_mode(c.mode, r.mode);
  return r;
}

void validate_config(const ExperimentConfig& cfg,
                     std::vector<std::string>& errors) {
  auto bad = [&errors](const std::string& msg) { errors.push_back(msg); };

  if (cfg.cmd == Command::none) bad("exactly one subcommand is required");
  if (cfg.workers < 1) bad("workers must be >= 1");
  if (cfg.trials < 1) bad("trials must be >= 1");
  if (cfg.n < 1 || cfg.n > 1024) bad("n must be in [1, 1024]");

  auto nonneg = [&](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      bad(std::string(name) + " must be finite and >= 0 (got " + fmt(v) + ")");
    }
  };
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      bad(std::string(name) + " must be finite and > 0 (got " + fmt(v) + ")");
    }
  };

  switch (cfg.cmd) {
    case Command::rates:
      nonneg(cfg.P, "P");
      nonneg(cfg.N1, "N1");
      nonneg(cfg.N2, "N2");
      nonneg(cfg.P1, "P1");
      positive(cfg.P2, "P2");
      positive(cfg.N3, "N3");
      positive(cfg.D, "D");
      break;
    case Command::rd_curve:
      nonneg(cfg.P, "P");
      nonneg(cfg.N1, "N1");
      nonneg(cfg.N2, "N2");
      nonneg(cfg.P1, "P1");
      positive(cfg.P2, "P2");
      positive(cfg.N3, "N3");
      if (!(cfg.d_min > 0.0)) bad("Dmin must be > 0 (got " + fmt(cfg.d_min) + ")");
      if (!(cfg.d_max >= cfg.d_min)) bad("Dmax must be >= Dmin");
      if (cfg.steps < 1) bad("steps must be >= 1");
      break;
    case Command::wz_sim:
      try {
        to_wz_config(cfg).validate();
      } catch (const config_error& e) {
        bad(e.what());
      }
      break;
    case Command::cf_sim: {
      cf::Mode m;
      if (!parse_mode(cfg.mode, m)) {
        bad("mode must be 'chained' or 'genie' (got '" + cfg.mode + "')");
      }
      for (const auto& v : to_cf_config(cfg).validate()) bad(v);
      break;
    }
    default:
      break;
  }

  if (cfg.sweep.active) {
    const auto allowed = allowed_sweep_params(cfg.cmd);
    if (allowed.empty()) {
      bad("this subcommand does not take --sweep");
    } else if (!allowed.count(cfg.sweep.param)) {
      std::string names;
      for (const auto& a : allowed) names += (names.empty() ? "" : ", ") + a;
      bad("unknown sweep parameter '" + cfg.sweep.param + "' (one of: " +
          names + ")");
    }
    if (cfg.sweep.steps < 1) bad("sweep steps must be >= 1");
    if (!std::isfinite(cfg.sweep.start) || !std::isfinite(cfg.sweep.stop)) {
      bad("sweep bounds must be finite");
    }
    if (cfg.sweep.param == "D" &&
        (!(cfg.sweep.start > 0.0) || !(cfg.sweep.stop > 0.0))) {
      bad("sweep of D must stay > 0");
    }
  }
}

std::vector<ExperimentConfig> sweep_points(const ExperimentConfig& cfg) {
  std::vector<ExperimentConfig> pts;
  if (!cfg.sweep.active) {
    pts.push_back(cfg);
    return pts;
  }
  const auto it = sweepable().find(cfg.sweep.param);
  const int steps = cfg.sweep.steps;
  for (int i = 0; i < steps; ++i) {
    ExperimentConfig p = cfg;
    const double v =
        (steps == 1)
            ? cfg.sweep.start
            : cfg.sweep.start +
                  (cfg.sweep.stop - cfg.sweep.start) * i / double(steps - 1);
    p.*(it->second) = v;
    pts.push_back(p);
  }
  return pts;
}

void rates_row(std::ostream& os, const std::string& param, double value,
               const ExperimentConfig& p) {
  os << param << ',' << fmt(value) << ','
     << fmt(rates::wz_rd(p.P, p.N1, p.N2, p.D)) << ','
     << fmt(rates::wz_rd_alpha1_fixed(p.P, p.N1, p.N2, p.D)) << ','
     << fmt(rates::wz_rd_alpha2_fixed(p.N1, p.N2, p.D)) << ','
     << fmt(rates::cf_rate(p.P1, p.P2, p.N2, p.N3)) << ','
     << fmt(rates::relay_rate_bound(p.P1, p.P2, p.N3)) << ','
     << fmt(rates::compression_d_star(p.P1, p.P2, p.N2, p.N3)) << '\n';
}

}  // namespace

const char* command_name(Command c) {
  switch (c) {
    case Command::rates:
      return "rates";
    case Command::rd_curve:
      return "rd-curve";
    case Command::wz_sim:
      return "wz-sim";
    case Command::cf_sim:
      return "cf-sim";
    default:
      return "none";
  }
}

std::string render_csv(const ExperimentConfig& cfg) {
  std::ostringstream os;
  switch (cfg.cmd) {
    case Command::rates: {
      os << "param,value,wz_rd,wz_rd_a1,wz_rd_a2,cf_rate,Rprime,D_star\n";
      for (const auto& p : sweep_points(cfg)) {
        if (cfg.sweep.active) {
          rates_row(os, cfg.sweep.param, p.*(sweepable().at(cfg.sweep.param)),
                    p);
        } else {
          rates_row(os, "none", 0.0, p);
        }
      }
      break;
    }
    case Command::rd_curve: {
      os << "param,value,wz_rd,wz_rd_a1,wz_rd_a2,cf_rate,Rprime,D_star\n";
      for (int i = 0; i < cfg.steps; ++i) {
        ExperimentConfig p = cfg;
        p.D = (cfg.steps == 1)
                  ? cfg.d_min
                  : cfg.d_min +
                        (cfg.d_max - cfg.d_min) * i / double(cfg.steps - 1);
        rates_row(os, "D", p.D, p);
      }
      break;
    }
    case Command::wz_sim: {
      os << "P,N1,N2,D,n,k,gamma,trials,seed,rate_bits,wrap_rate,distortion,"
            "distortion_no_wrap,identity_pass_rate\n";
      for (const auto& p : sweep_points(cfg)) {
        const wz::Config w = to_wz_config(p);
        const wz::SimReport rep =
            wz::simulate(w, p.trials, p.seed, p.workers);
        os << fmt(w.P) << ',' << fmt(w.N1) << ',' << fmt(w.N2) << ','
           << fmt(w.D) << ',' << w.n << ',' << rep.k << ',' << fmt(w.gamma)
           << ',' << rep.trials << ',' << rep.seed << ','
           << fmt(rep.rate_bits) << ',' << fmt(rep.wrap_rate) << ','
           << fmt(rep.distortion) << ',' << fmt(rep.distortion_no_wrap) << ','
           << fmt(rep.identity_pass_rate) << '\n';
      }
      break;
    }
    case Command::cf_sim: {
      os << "P1,P2,N2,N3,D,n,k1,k2,kq,B,mode,seed,R_eff,t2_err,wrap_rate,"
            "msg_err,power1,power2\n";
      for (const auto& p : sweep_points(cfg)) {
        const cf::Config c = to_cf_config(p);
        const cf::SimReport rep = cf::simulate(c, p.trials, p.workers);
        os << fmt(c.P1) << ',' << fmt(c.P2) << ',' << fmt(c.N2) << ','
           << fmt(c.N3) << ',' << fmt(c.D) << ',' << c.n << ',' << c.k1 << ','
           << c.k2 << ',' << c.kq << ',' << c.B << ',' << mode_name(c.mode)
           << ',' << c.seed << ',' << fmt(rep.effective_rate) << ','
           << fmt(rep.t2_error_rate) << ',' << fmt(rep.wrap_rate) << ','
           << fmt(rep.msg_error_rate) << ',' << fmt(rep.power1) << ','
           << fmt(rep.power2) << '\n';
      }
      break;
    }
    default:
      throw config_error("no subcommand selected");
  }
  return os.str();
}

std::vector<std::string> apply_config_file(const std::string& path,
                                           ExperimentConfig& cfg) {
  std::vector<std::string> errors;
  std::ifstream in(path);
  if (!in) {
    errors.push_back("cannot open config file: " + path);
    return errors;
  }

  auto set_double = [](double& dst) {
    return [&dst](const std::string& v) {
      std::size_t pos = 0;
      dst = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
    };
  };
  auto set_int = [](int& dst) {
    return [&dst](const std::string& v) {
      std::size_t pos = 0;
      dst = std::stoi(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
    };
  };

  std::map<std::string, std::function<void(const std::string&)>> setters;
  setters["P"] = set_double(cfg.P);
  setters["N1"] = set_double(cfg.N1);
  setters["N2"] = set_double(cfg.N2);
  setters["D"] = set_double(cfg.D);
  setters["P1"] = set_double(cfg.P1);
  setters["P2"] = set_double(cfg.P2);
  setters["N3"] = set_double(cfg.N3);
  setters["gamma"] = set_double(cfg.gamma);
  setters["Dmin"] = set_double(cfg.d_min);
  setters["Dmax"] = set_double(cfg.d_max);
  setters["n"] = set_int(cfg.n);
  setters["k1"] = set_int(cfg.k1);
  setters["k2"] = set_int(cfg.k2);
  setters["kq"] = set_int(cfg.kq);
  setters["B"] = set_int(cfg.B);
  setters["steps"] = set_int(cfg.steps);
  setters["workers"] = set_int(cfg.workers);
  setters["trials"] = [&cfg](const std::string& v) {
    std::size_t pos = 0;
    cfg.trials = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
  };
  setters["seed"] = [&cfg](const std::string& v) {
    std::size_t pos = 0;
    cfg.seed = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
  };
  setters["out"] = [&cfg](const std::string& v) { cfg.out = v; };
  setters["mode"] = [&cfg](const std::string& v) { cfg.mode = v; };
  setters["sweep"] = [&cfg](const std::string& v) {
    std::string err;
    if (!parse_sweep_spec(v, cfg.sweep, err)) throw std::invalid_argument(err);
  };

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return (b == std::string::npos) ? std::string()
                                      : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) {
      errors.push_back(path + ":" + std::to_string(lineno) +
                       ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      errors.push_back(path + ":" + std::to_string(lineno) +
                       ": unknown config key '" + key + "'");
      continue;
    }
    try {
      it->second(value);
    } catch (const std::exception&) {
      errors.push_back(path + ":" + std::to_string(lineno) + ": key '" + key +
                       "' has an invalid value '" + value + "'");
    }
  }
  return errors;
}

ParseResult parse_args(const std::vector<std::string>& args) {
  ParseResult res;
  ExperimentConfig staged;
  std::string config_path, sweep_str;

  struct Binding {
    CLI::Option* opt;
    std::function<void(ExperimentConfig&, const ExperimentConfig&)> apply;
  };
  std::vector<Binding> binds;

  CLI::App app{"nested-lattice Wyner-Ziv and compress-and-forward simulator"};
  app.name("latcf");
  app.require_subcommand(1);

  auto bind_d = [&](CLI::App* sub, const std::string& name, DoubleMember mem,
                    const std::string& desc) {
    CLI::Option* o = sub->add_option(name, staged.*mem, desc);
    binds.push_back({o, [mem](ExperimentConfig& dst,
                              const ExperimentConfig& src) {
                       dst.*mem = src.*mem;
                     }});
  };
  auto bind_i = [&](CLI::App* sub, const std::string& name,
                    int ExperimentConfig::*mem, const std::string& desc) {
    CLI::Option* o = sub->add_option(name, staged.*mem, desc);
    binds.push_back({o, [mem](ExperimentConfig& dst,
                              const ExperimentConfig& src) {
                       dst.*mem = src.*mem;
                     }});
  };

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat key = value config file");
    CLI::Option* o;
    o = sub->add_option("--seed", staged.seed, "master seed (default 42)");
    binds.push_back({o, [](ExperimentConfig& d, const ExperimentConfig& s) {
                       d.seed = s.seed;
                     }});
    o = sub->add_option("--out", staged.out, "CSV output path (default: stdout)");
    binds.push_back({o, [](ExperimentConfig& d, const ExperimentConfig& s) {
                       d.out = s.out;
                     }});
    o = sub->add_option("--workers", staged.workers, "worker threads");
    binds.push_back({o, [](ExperimentConfig& d, const ExperimentConfig& s) {
                       d.workers = s.workers;
                     }});
    o = sub->add_option("--trials", staged.trials,
                        "Monte Carlo trials (cf-sim: independent runs)");
    binds.push_back({o, [](ExperimentConfig& d, const ExperimentConfig& s) {
                       d.trials = s.trials;
                     }});
    bind_i(sub, "--n", &ExperimentConfig::n, "lattice dimension");
  };
  auto add_sweep = [&](CLI::App* sub) {
    // Applied after the ordinary bindings: the spec string needs parsing.
    sub->add_option("--sweep", sweep_str,
                    "vary one parameter: NAME:START:STOP:STEPS");
  };

  CLI::App* sc_rates =
      app.add_subcommand("rates", "closed-form rate/distortion expressions");
  CLI::App* sc_rd =
      app.add_subcommand("rd-curve", "Wyner-Ziv rate-distortion curve over D");
  CLI::App* sc_wz =
      app.add_subcommand("wz-sim", "Monte Carlo Wyner-Ziv codec simulation");
  CLI::App* sc_cf = app.add_subcommand(
      "cf-sim", "block-Markov compress-and-forward relay simulation");

  for (CLI::App* sub : {sc_rates, sc_rd, sc_wz, sc_cf}) add_common(sub);
  for (CLI::App* sub : {sc_rates, sc_rd}) {
    bind_d(sub, "--P", &ExperimentConfig::P, "source power");
    bind_d(sub, "--N1", &ExperimentConfig::N1, "source-side noise variance");
    bind_d(sub, "--N2", &ExperimentConfig::N2, "side-info / relay noise variance");
    bind_d(sub, "--P1", &ExperimentConfig::P1, "transmitter power");
    bind_d(sub, "--P2", &ExperimentConfig::P2, "relay power");
    bind_d(sub, "--N3", &ExperimentConfig::N3, "destination noise variance");
  }
  bind_d(sc_rates, "--D", &ExperimentConfig::D, "distortion");
  sc_rd->add_option("--Dmin", staged.d_min, "distortion range start");
  binds.push_back({sc_rd->get_option("--Dmin"),
                   [](ExperimentConfig& d, const ExperimentConfig& s) {
                     d.d_min = s.d_min;
                   }});
  sc_rd->add_option("--Dmax", staged.d_max, "distortion range stop");
  binds.push_back({sc_rd->get_option("--Dmax"),
                   [](ExperimentConfig& d, const ExperimentConfig& s) {
                     d.d_max = s.d_max;
                   }});
  bind_i(sc_rd, "--steps", &ExperimentConfig::steps, "number of curve points");

  bind_d(sc_wz, "--P", &ExperimentConfig::P, "variance of X");
  bind_d(sc_wz, "--N1", &ExperimentConfig::N1, "variance of Z1");
  bind_d(sc_wz, "--N2", &ExperimentConfig::N2, "variance of Z2");
  bind_d(sc_wz, "--D", &ExperimentConfig::D, "target distortion");
  bind_d(sc_wz, "--gamma", &ExperimentConfig::gamma,
         "coarse-cell amplitude margin (>= 1)");

  bind_d(sc_cf, "--P1", &ExperimentConfig::P1, "transmitter power");
  bind_d(sc_cf, "--P2", &ExperimentConfig::P2, "relay power");
  bind_d(sc_cf, "--N2", &ExperimentConfig::N2, "relay noise variance");
  bind_d(sc_cf, "--N3", &ExperimentConfig::N3, "destination noise variance");
  bind_d(sc_cf, "--D", &ExperimentConfig::D, "relay compression distortion");
  bind_i(sc_cf, "--k1", &ExperimentConfig::k1, "message codebook nesting");
  bind_i(sc_cf, "--k2", &ExperimentConfig::k2, "relay codebook nesting");
  bind_i(sc_cf, "--kq", &ExperimentConfig::kq, "quantizer nesting");
  bind_i(sc_cf, "--B", &ExperimentConfig::B, "message blocks per run");
  {
    CLI::Option* o = sc_cf->add_option("--mode", staged.mode,
                                       "error propagation: chained | genie");
    binds.push_back({o, [](ExperimentConfig& d, const ExperimentConfig& s) {
                       d.mode = s.mode;
                     }});
  }
  for (CLI::App* sub : {sc_rates, sc_wz, sc_cf}) add_sweep(sub);

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("latcf");
  for (const auto& a : args) argv_store.push_back(a);
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    res.show_help = true;
    res.help_text = app.help();
    return res;
  } catch (const CLI::ParseError& e) {
    res.errors.push_back(e.what());
    return res;
  }

  if (sc_rates->parsed()) staged.cmd = Command::rates;
  if (sc_rd->parsed()) staged.cmd = Command::rd_curve;
  if (sc_wz->parsed()) staged.cmd = Command::wz_sim;
  if (sc_cf->parsed()) staged.cmd = Command::cf_sim;

  ExperimentConfig cfg;
  cfg.cmd = staged.cmd;

  // Precedence: defaults < file < LATCF_SEED < flags.
  if (!config_path.empty()) {
    for (auto& e : apply_config_file(config_path, cfg)) res.errors.push_back(e);
  }
  if (const char* env = std::getenv("LATCF_SEED")) {
    char* end = nullptr;
    const std::uint64_t v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && end != env) {
      cfg.seed = v;
    } else {
      res.errors.push_back(std::string("LATCF_SEED is not an integer: '") +
                           env + "'");
    }
  }
  for (const auto& b : binds) {
    if (b.opt->count() > 0) b.apply(cfg, staged);
  }
  // Sweep flag (file may have set one already; the flag wins).
  for (CLI::App* sub : {sc_rates, sc_wz, sc_cf}) {
    const CLI::Option* o =
        sub->parsed() ? sub->get_option_no_throw("--sweep") : nullptr;
    if (o && o->count() > 0) {
      std::string err;
      SweepSpec spec;
      if (parse_sweep_spec(sweep_str, spec, err)) {
        cfg.sweep = spec;
      } else {
        res.errors.push_back(err);
      }
    }
  }

  validate_config(cfg, res.errors);
  res.cfg = cfg;
  return res;
}

int run_experiment(const ExperimentConfig& cfg, std::ostream& summary,
                   std::ostream& errors) {
  std::vector<std::string> bad;
  validate_config(cfg, bad);
  if (!bad.empty()) {
    for (const auto& b : bad) errors << "error: " << b << '\n';
    return 2;
  }

  std::string csv;
  try {
    csv = render_csv(cfg);
  } catch (const std::exception& e) {
    errors << "error: " << e.what() << '\n';
    return 2;
  }

  std::size_t rows = 0;
  for (char c : csv) rows += (c == '\n');
  if (rows > 0) --rows;  // header

  if (cfg.out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(cfg.out, std::ios::binary | std::ios::trunc);
    if (!out) {
      errors << "error: cannot open output path: " << cfg.out << '\n';
      return 1;
    }
    out << csv;
    if (!out) {
      errors << "error: failed writing output: " << cfg.out << '\n';
      return 1;
    }
  }

  char digest[32];
  std::snprintf(digest, sizeof digest, "%016llx",
                static_cast<unsigned long long>(fnv1a64(csv)));
  summary << command_name(cfg.cmd) << ": " << rows << " row"
          << (rows == 1 ? "" : "s") << " -> "
          << (cfg.out.empty() ? std::string("<stdout>") : cfg.out)
          << " (seed " << cfg.seed << ", csv fnv1a " << digest << ")\n";
  return 0;
}

}  // namespace latcf::cli
