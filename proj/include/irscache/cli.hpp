// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The irs-cache-dof Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "irscache/io.hpp"

namespace irscache::cli {

enum Exit : int { ok = 0, verification_failure = 2, solver_infeasible = 3, config_error = 4 };

struct ConfigError : Error {
  using Error::Error;
};

struct RunConfig {
  SystemParams params = [] {
    SystemParams p;  // the three-transmitter, four-receiver example
    p.k_t = 3;
    p.k_r = 4;
    p.n_files = 12;
    p.mu_t = 1;
    p.mu_r = 1;
    p.q_elements = 6;
    return p;
  }();
  std::uint64_t seed = 1;
  QMode mode = QMode::paper_strict;
  std::optional<int> l;
  Scheme scheme = Scheme::automatic;
  bool irs_enabled = true;
  double tolerance = kDecodeTolerance;
  double noise_variance = 0.0;
  int episodes = 1;
  std::uint64_t partition_budget = kDefaultPartitionBudget;
  std::string out;
};

inline Scheme parse_scheme(const std::string& s) {
  if (s == "auto") return Scheme::automatic;
  if (s == "partition") return Scheme::partition;
  if (s == "ordered") return Scheme::ordered;
  throw ConfigError("scheme must be auto, partition or ordered (got '" + s + "')");
}

inline QMode parse_mode(const std::string& s) {
  if (s == "paper-strict" || s == "strict") return QMode::paper_strict;
  if (s == "sufficient") return QMode::sufficient;
  throw ConfigError("mode must be paper-strict or sufficient (got '" + s + "')");
}

/// Flat JSON object; unknown keys are rejected.
inline void apply_config_json(const io::json& j, RunConfig& cfg) {
  if (!j.is_object()) throw ConfigError("config must be a flat JSON object");
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "k_t") cfg.params.k_t = v.get<int>();
      else if (key == "k_r") cfg.params.k_r = v.get<int>();
      else if (key == "n_files") cfg.params.n_files = v.get<int>();
      else if (key == "f_packets") cfg.params.f_packets = v.get<long>();
      else if (key == "mu_t") cfg.params.mu_t = v.get<int>();
      else if (key == "mu_r") cfg.params.mu_r = v.get<int>();
      else if (key == "q_elements") cfg.params.q_elements = v.get<int>();
      else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (key == "mode") cfg.mode = parse_mode(v.get<std::string>());
      else if (key == "L") cfg.l = v.get<int>();
      else if (key == "scheme") cfg.scheme = parse_scheme(v.get<std::string>());
      else if (key == "irs_enabled") cfg.irs_enabled = v.get<bool>();
      else if (key == "tolerance") cfg.tolerance = v.get<double>();
      else if (key == "noise_variance") cfg.noise_variance = v.get<double>();
      else if (key == "episodes") cfg.episodes = v.get<int>();
      else if (key == "partition_budget") cfg.partition_budget = v.get<std::uint64_t>();
      else throw ConfigError("unknown config key '" + key + "'");
    } catch (const io::json::exception& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
}

inline void load_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  io::json j;
  try {
    j = io::json::parse(in);
  } catch (const io::json::parse_error& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  apply_config_json(j, cfg);
}

namespace detail {

inline void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw ConfigError("cannot write '" + cfg.out + "'");
  f << text;
}

inline int fail(std::ostream& err, int code, const std::string& status, const std::string& msg) {
  err << io::json{{"status", status}, {"exit_code", code}, {"message", msg}}.dump() << '\n';
  return code;
}

inline int partition_find(const RunConfig& cfg, std::optional<int> m_opt, std::ostream& out,
                          std::ostream& err) {
  const int mu_t = cfg.params.mu_t;
  const int m = m_opt ? *m_opt : cfg.params.m_groups();
  if (m < 1 || mu_t < 1) throw ConfigError("partition-find needs M >= 1 and mu_T >= 1");
  auto found = find_subset_partition(m, mu_t, cfg.partition_budget);
  if (!found) {
    emit(cfg, out, io::json{{"m", m}, {"mu_t", mu_t}, {"found", false}}.dump(2) + "\n");
    return fail(err, verification_failure, "not_found",
                "no subset partition within a budget of " + std::to_string(cfg.partition_budget) +
                    " search nodes");
  }
  const Verdict v = verify_subset_partition(*found);
  auto j = io::to_json(*found);
  j["found"] = true;
  j["verified"] = v.ok;
  if (!v.ok) j["report"] = v.report;
  emit(cfg, out, j.dump(2) + "\n");
  return v.ok ? Exit::ok : fail(err, verification_failure, "invalid_partition", v.report);
}

inline EpisodeOptions episode_options(const RunConfig& cfg) {
  EpisodeOptions o;
  o.mode = cfg.mode;
  o.l = cfg.l;
  o.scheme = cfg.scheme;
  o.irs_enabled = cfg.irs_enabled;
  o.tolerance = cfg.tolerance;
  o.noise_variance = cfg.noise_variance;
  o.partition_budget = cfg.partition_budget;
  return o;
}

/// Every tuple with K_T, K_R <= 6, every admissible L and both mu_T >= 2
/// placements.
inline int schedule_grid(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  long checked = 0;
  io::json failures = io::json::array();
  for (int kt = 1; kt <= 6; ++kt)
    for (int kr = 2; kr <= 6; ++kr)
      for (int mu_t = 1; mu_t <= kt; ++mu_t) {
        if (kt % mu_t) continue;
        for (int mu_r = 1; mu_r < kr; ++mu_r) {
          SystemParams p;
          p.k_t = kt;
          p.k_r = kr;
          p.n_files = kr;
          p.mu_t = mu_t;
          p.mu_r = mu_r;
          std::vector<Scheme> schemes{Scheme::partition};
          if (mu_t >= 2) schemes.push_back(Scheme::ordered);
          for (int l = 0; l <= l_cap(p); ++l)
            for (Scheme s : schemes) {
              EpisodeOptions o = episode_options(cfg);
              o.l = l;
              o.scheme = s;
              p.q_elements = static_cast<int>(required_elements(l, mu_t, QMode::sufficient));
              const auto setup = prepare_episode(p, o);
              ++checked;
              if (!setup.schedule_check.ok || !setup.cache_check.ok)
                failures.push_back({{"params", io::to_json(p)},
                                    {"L", l},
                                    {"placement", to_string(setup.shape.placement)},
                                    {"schedule", setup.schedule_check.report},
                                    {"cache", setup.cache_check.report}});
            }
        }
      }
  io::json j{{"checked", checked}, {"failures", failures}};
  emit(cfg, out, j.dump(2) + "\n");
  return failures.empty() ? Exit::ok
                          : fail(err, verification_failure, "schedule_invalid",
                                 std::to_string(failures.size()) + " of " +
                                     std::to_string(checked) + " tuples failed");
}

inline int schedule_verify(const RunConfig& cfg, bool grid, bool dump_schedule, std::ostream& out,
                           std::ostream& err) {
  if (grid) return schedule_grid(cfg, out, err);
  cfg.params.validate();
  const auto setup = prepare_episode(cfg.params, episode_options(cfg));
  io::json j{{"params", io::to_json(cfg.params)},
             {"shape", io::to_json(setup.shape)},
             {"H", setup.schedule.h()},
             {"cache_check", setup.cache_check.ok ? "pass" : setup.cache_check.report},
             {"schedule_check", setup.schedule_check.ok ? "pass" : setup.schedule_check.report}};
  if (dump_schedule) j["schedule"] = io::to_json(setup.schedule);
  emit(cfg, out, j.dump(2) + "\n");
  if (!setup.cache_check.ok)
    return fail(err, verification_failure, "cache_invalid", setup.cache_check.report);
  if (!setup.schedule_check.ok)
    return fail(err, verification_failure, "schedule_invalid", setup.schedule_check.report);
  return Exit::ok;
}

inline int simulate(const RunConfig& cfg, const std::string& csv_path, std::ostream& out,
                    std::ostream& err) {
  cfg.params.validate();
  if (cfg.episodes < 1) throw ConfigError("episodes must be >= 1");
  const auto opt = episode_options(cfg);
  const auto setup = prepare_episode(cfg.params, opt);
  std::vector<EpisodeReport> reports;
  try {
    for (int e = 0; e < cfg.episodes; ++e)
      reports.push_back(run_prepared(setup, cfg.seed + static_cast<std::uint64_t>(e), opt));
  } catch (const SingularSystemError& e) {
    return fail(err, solver_infeasible, "singular_system", e.what());
  }
  io::json j;
  if (reports.size() == 1) {
    j = io::to_json(reports.front());
  } else {
    j = io::json::array();
    for (const auto& r : reports) j.push_back(io::to_json(r));
  }
  emit(cfg, out, j.dump(2) + "\n");
  if (!csv_path.empty()) {
    std::ofstream f(csv_path);
    if (!f) throw ConfigError("cannot write '" + csv_path + "'");
    for (std::size_t e = 0; e < reports.size(); ++e) {
      const auto rows = io::blocks_csv(reports[e]);
      f << (e == 0 ? rows : rows.substr(rows.find('\n') + 1));
    }
  }
  long infeasible = 0, failed = 0;
  for (const auto& r : reports) {
    infeasible += r.infeasible_blocks();
    failed += r.failed_blocks();
    if (!r.schedule_check.ok || !r.cache_check.ok)
      return fail(err, verification_failure, "setup_invalid",
                  r.schedule_check.ok ? r.cache_check.report : r.schedule_check.report);
  }
  if (cfg.irs_enabled && infeasible)
    return fail(err, solver_infeasible, "irs_infeasible",
                std::to_string(infeasible) + " blocks need more cross-link nulls than Q = " +
                    std::to_string(cfg.params.q_elements) + " elements can solve");
  if (failed)
    return fail(err, verification_failure, "decode_failed",
                std::to_string(failed) + " blocks have residuals above " +
                    io::fmt_double(cfg.tolerance));
  return Exit::ok;
}

inline std::vector<long> parse_list(const std::string& s) {
  std::vector<long> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stol(item));
    } catch (const std::exception&) {
      throw ConfigError("bad integer '" + item + "' in list '" + s + "'");
    }
  }
  return out;
}

inline int dof_sweep(const RunConfig& cfg, const std::string& preset_name, const std::string& axis,
                     const std::string& range, const std::string& qs,
                     std::ostream& out) {
  SweepSpec spec;
  if (!preset_name.empty()) {
    spec = preset(preset_name, cfg.mode);
  } else {
    if (axis.empty() || range.empty())
      throw ConfigError("dof-sweep needs --preset or both --axis and --range");
    spec.axis = axis == "q"     ? SweepAxis::q
                : axis == "k_r" ? SweepAxis::k_r
                : axis == "mu_r"
                    ? SweepAxis::mu_r
                    : throw ConfigError("axis must be q, k_r or mu_r (got '" + axis + "')");
    const auto colon = range.find(':');
    if (colon == std::string::npos) throw ConfigError("range must look like A:B");
    const auto ends = parse_list(range.substr(0, colon) + "," + range.substr(colon + 1));
    spec.values = closed_range(ends[0], ends[1]);
    spec.base = cfg.params;
    spec.q_values = qs.empty() ? std::vector<long>{cfg.params.q_elements} : parse_list(qs);
    spec.mode = cfg.mode;
  }
  emit(cfg, out, io::sweep_csv(sweep(spec)));
  return Exit::ok;
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cache-aided interference network with an active IRS: designs, schedules, "
               "simulation and DoF sweeps"};
  app.name("irs-cache-dof");
  app.require_subcommand(1);

  std::string config_path, preset_name, out_path;
  std::optional<std::uint64_t> seed;
  bool strict = false, sufficient = false;
  app.add_option("--config", config_path, "flat JSON config file");
  app.add_option("--seed", seed, "64-bit seed");
  app.add_option("--preset", preset_name, "figure preset fig2 ... fig7 (dof-sweep)");
  auto* s_opt = app.add_flag("--strict-q", strict, "IRS size L(L+1) per L (default)");
  auto* f_opt = app.add_flag("--sufficient-q", sufficient, "IRS size mu_T L(L+1) per L");
  s_opt->excludes(f_opt);
  app.add_option("--out", out_path, "output file (default stdout)");
  std::vector<std::string> overrides;
  app.add_option("--set", overrides, "override a config key, KEY=VALUE (repeatable)");

  auto* pf = app.add_subcommand("partition-find", "search and verify an (M, mu_T)-subset partition");
  std::optional<int> m_opt;
  pf->add_option("--m", m_opt, "M (default K_T / mu_T)");

  auto* sv = app.add_subcommand("schedule-verify", "check cache budgets and the delivery schedule");
  bool grid = false, dump = false;
  sv->add_flag("--grid", grid, "all tuples with K_T, K_R <= 6");
  sv->add_flag("--dump", dump, "include the block-by-block schedule");

  auto* sim = app.add_subcommand("simulate", "run noiseless delivery episodes");
  std::string csv_path;
  sim->add_option("--csv", csv_path, "per-block CSV rows");

  auto* ds = app.add_subcommand("dof-sweep", "closed-form DoF sweeps as CSV");
  std::string axis, range, qs;
  ds->add_option("--axis", axis, "q | k_r | mu_r (custom sweep)");
  ds->add_option("--range", range, "A:B inclusive");
  ds->add_option("--q-list", qs, "comma-separated IRS sizes for k_r / mu_r axes");

  for (auto* sub : {pf, sv, sim, ds}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return detail::fail(err, Exit::config_error, "bad_arguments", e.what());
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) load_config_file(config_path, cfg);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects KEY=VALUE (got '" + kv + "')");
      io::json v;
      try {
        v = io::json::parse(kv.substr(eq + 1));
      } catch (const io::json::parse_error&) {
        v = kv.substr(eq + 1);
      }
      apply_config_json(io::json{{kv.substr(0, eq), v}}, cfg);
    }
    if (seed) cfg.seed = *seed;
    if (strict) cfg.mode = QMode::paper_strict;
    if (sufficient) cfg.mode = QMode::sufficient;
    cfg.out = out_path;
    if ((!config_path.empty() || !overrides.empty()) && (sv->parsed() || sim->parsed()) && !grid)
      cfg.params.validate();

    if (pf->parsed()) return detail::partition_find(cfg, m_opt, out, err);
    if (sv->parsed()) return detail::schedule_verify(cfg, grid, dump, out, err);
    if (sim->parsed()) return detail::simulate(cfg, csv_path, out, err);
    return detail::dof_sweep(cfg, preset_name, axis, range, qs, out);
  } catch (const PreconditionError& e) {
    return detail::fail(err, Exit::config_error, "config_error", e.what());
  } catch (const ConfigError& e) {
    return detail::fail(err, Exit::config_error, "config_error", e.what());
  } catch (const SingularSystemError& e) {
    return detail::fail(err, Exit::solver_infeasible, "singular_system", e.what());
  } catch (const Error& e) {
    return detail::fail(err, Exit::verification_failure, "error", e.what());
  }
}

}  // namespace irscache::cli
