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

#include <concepts>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "irscache/combinatorics.hpp"
#include "irscache/dof_analytics.hpp"
#include "irscache/link_simulator.hpp"

namespace irscache::io {

using json = nlohmann::ordered_json;

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json to_json(const Subset& s) { return json(s); }

inline json to_json(const cx& z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json to_json(const SystemParams& p) {
  return {{"k_t", p.k_t},   {"k_r", p.k_r},   {"n_files", p.n_files},      {"f_packets", p.f_packets},
          {"mu_t", p.mu_t}, {"mu_r", p.mu_r}, {"q_elements", p.q_elements}};
}

template <std::same_as<Rational> R>
inline json to_json(const R& r) { return r.str(); }

inline json to_json(const SubfileId& w) {
  json j{{"file", w.file}, {"tx", w.tx_set}, {"rx", w.rx_set}};
  if (w.kappa) j["kappa"] = w.kappa;
  if (!w.zf_set.empty()) j["zf"] = w.zf_set;
  if (!w.irs_set.empty()) j["irs"] = w.irs_set;
  return j;
}

inline json to_json(const SubsetPartitionSystem& s) {
  json classes = json::array();
  for (const auto& c : s.classes) {
    json cl = json::array();
    for (const auto& b : c) cl.push_back(b);
    classes.push_back(std::move(cl));
  }
  return {{"m", s.m}, {"mu_t", s.mu_t}, {"classes", std::move(classes)}};
}

inline json to_json(const SchemeShape& s) {
  return {{"regime", to_string(s.regime)}, {"placement", to_string(s.placement)},
          {"L", s.l},                      {"leftover", s.leftover},
          {"zf_size", s.zf_size},          {"active", s.active}};
}

inline json to_json(const Schedule& sch) {
  json blocks = json::array();
  for (const auto& b : sch.blocks) {
    json dl = json::array();
    for (const auto& d : b.deliveries)
      dl.push_back({{"subfile", to_json(d.subfile)}, {"rx", d.rx}, {"serving", d.serving},
                    {"group", d.group}});
    json nulls = json::array();
    for (const auto& [i, j] : b.null_links) nulls.push_back({i, j});
    blocks.push_back({{"block", b.index},
                      {"active_rx", b.active_rx},
                      {"deliveries", std::move(dl)},
                      {"null_links", std::move(nulls)}});
  }
  return {{"shape", to_json(sch.shape)}, {"H", sch.h()}, {"blocks", std::move(blocks)}};
}

inline json to_json(const CacheAssignment& a) {
  auto list = [](const std::vector<std::vector<SubfileId>>& caches) {
    json out = json::array();
    for (const auto& c : caches) {
      json node = json::array();
      for (const auto& w : c) node.push_back(to_string(w));
      out.push_back(std::move(node));
    }
    return out;
  };
  return {{"packets_per_subfile", to_json(a.packets_per_subfile)},
          {"tx", list(a.tx_caches)},
          {"rx", list(a.rx_caches)}};
}

inline json to_json(const ChannelRealization& ch) {
  return {{"block", ch.block_index}, {"seed", ch.seed},
          {"direct", to_json(ch.direct)}, {"tx_to_irs", to_json(ch.tx_to_irs)},
          {"irs_to_rx", to_json(ch.irs_to_rx)}};
}

inline json to_json(const EpisodeReport& r) {
  json blocks = json::array();
  for (const auto& b : r.blocks)
    blocks.push_back({{"block", b.index},
                      {"nulls", b.nulls},
                      {"q", r.params.q_elements},
                      {"irs_status", r.irs_enabled ? to_string(b.irs_status) : "disabled"},
                      {"irs_residual", b.irs_residual},
                      {"zf_residual", b.zf_residual},
                      {"rx", b.rx},
                      {"decode_residual", b.decode_residual},
                      {"delivered", b.delivered}});
  return {{"params", to_json(r.params)},
          {"seed", r.seed},
          {"mode", to_string(r.mode)},
          {"irs_enabled", r.irs_enabled},
          {"shape", to_json(r.shape)},
          {"cache_check", r.cache_check.ok ? "pass" : r.cache_check.report},
          {"schedule_check", r.schedule_check.ok ? "pass" : r.schedule_check.report},
          {"H", r.h()},
          {"delivered", r.delivered},
          {"scheduled", r.scheduled},
          {"sum_dof", to_json(r.sum_dof())},
          {"per_user_dof", to_json(r.per_user_dof())},
          {"failed_blocks", r.failed_blocks()},
          {"infeasible_blocks", r.infeasible_blocks()},
          {"max_irs_residual_rel", r.max_irs_relative()},
          {"max_zf_residual", r.max_zf_residual()},
          {"max_decode_residual", r.max_decode_residual()},
          {"blocks", std::move(blocks)}};
}

/// One row per block: seed,block,nulls,q,irs_status,irs_residual,zf_residual,delivered,active.
inline std::string blocks_csv(const EpisodeReport& r) {
  std::ostringstream os;
  os << "seed,block,nulls,q,irs_status,irs_residual,zf_residual,delivered,active\n";
  for (const auto& b : r.blocks)
    os << r.seed << ',' << b.index << ',' << b.nulls << ',' << r.params.q_elements << ','
       << (r.irs_enabled ? to_string(b.irs_status) : "disabled") << ','
       << fmt_double(b.irs_residual) << ',' << fmt_double(b.zf_residual) << ',' << b.delivered
       << ',' << b.rx.size() << '\n';
  return os.str();
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "axis_value,scheme,L,sum_dof_num,sum_dof_den,per_user_dof_float\n";
  for (const auto& r : rows)
    os << r.axis_value << ',' << r.point.scheme << ',' << r.point.l << ','
       << numerator(r.point.sum_dof) << ',' << denominator(r.point.sum_dof) << ','
       << fmt_double(to_double(r.point.per_user_dof)) << '\n';
  return os.str();
}

}  // namespace irscache::io
