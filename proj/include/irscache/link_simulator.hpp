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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "irscache/cache_placement.hpp"
#include "irscache/channel_model.hpp"
#include "irscache/delivery_scheduler.hpp"
#include "irscache/dof_analytics.hpp"
#include "irscache/irs_configurator.hpp"
#include "irscache/zf_precoder.hpp"

namespace irscache {

inline constexpr double kDecodeTolerance = 1e-8;

/// x_i = sum of v * s over the deliveries transmitter i serves.
inline CVector transmit_block(const BlockPlan& plan, const BeamformerSet& bf,
                              const std::vector<cx>& symbols, int k_t,
                              const CacheIndex* cache = nullptr) {
  require(bf.v.size() == plan.deliveries.size() && symbols.size() == plan.deliveries.size(),
          "transmit_block: beamformers/symbols do not match the block");
  CVector x = CVector::Zero(k_t);
  for (std::size_t d = 0; d < plan.deliveries.size(); ++d) {
    const auto& dl = plan.deliveries[d];
    for (std::size_t k = 0; k < dl.serving.size(); ++k) {
      const int i = dl.serving[k];
      if (cache && !cache->tx_has(i, dl.subfile))
        throw ScheduleConsistencyError("block " + std::to_string(plan.index) + ": transmitter " +
                                       std::to_string(i) + " does not cache " +
                                       to_string(dl.subfile));
      x(i - 1) += bf.v[d][k] * symbols[d];
    }
  }
  return x;
}

struct DecodeResult {
  std::size_t delivery = 0;
  cx estimate;
  double residual = 0.0;  // relative to the magnitude of what was subtracted
};

/// Receiver rx removes every scheduled term it caches, then scales by its
/// desired gain.
inline DecodeResult receiver_decode(cx y, int rx, const BlockPlan& plan, const CMatrix& h_eq,
                                    const BeamformerSet& bf, const CacheIndex& cache,
                                    const std::vector<cx>& symbols) {
  require(contains(plan.active_rx, rx), "receiver_decode: receiver not active in block");
  std::optional<std::size_t> own;
  double subtracted = 0.0;
  for (std::size_t d = 0; d < plan.deliveries.size(); ++d) {
    if (plan.deliveries[d].rx == rx) {
      own = d;
      continue;
    }
    if (cache.rx_has(rx, plan.deliveries[d].subfile)) {
      const cx term = effective_gain(h_eq, plan, bf, d, rx) * symbols[d];
      y -= term;
      subtracted += std::abs(term);
    }
  }
  require(own.has_value(), "receiver_decode: no delivery for receiver");
  const cx g = effective_gain(h_eq, plan, bf, *own, rx);
  DecodeResult r;
  r.delivery = *own;
  r.estimate = y / g;
  r.residual = std::abs(r.estimate - symbols[*own]) / std::max(1.0, subtracted / std::abs(g));
  return r;
}

struct EpisodeOptions {
  double noise_variance = 0.0;
  QMode mode = QMode::paper_strict;
  std::optional<int> l;  // otherwise derived from Q
  bool irs_enabled = true;
  Scheme scheme = Scheme::automatic;
  std::optional<DemandVector> demand;  // worst case by default
  double tolerance = kDecodeTolerance;
  std::uint64_t partition_budget = kDefaultPartitionBudget;
};

struct BlockRecord {
  long index = 0;
  std::size_t nulls = 0;
  IrsStatus irs_status = IrsStatus::exact;
  double irs_residual = 0.0;  // absolute, max |H~| over the null set
  double channel_scale = 0.0;  // max |H| of the direct channel
  double zf_residual = 0.0;    // max substitution error of the ZF constraints
  std::vector<int> rx;
  std::vector<double> decode_residual;
  int delivered = 0;

  bool ok() const { return delivered == static_cast<int>(rx.size()); }
  double irs_relative() const { return channel_scale > 0 ? irs_residual / channel_scale : 0.0; }
};

struct EpisodeReport {
  SystemParams params;
  std::uint64_t seed = 0;
  QMode mode = QMode::paper_strict;
  bool irs_enabled = true;
  SchemeShape shape;
  std::vector<BlockRecord> blocks;
  long delivered = 0;
  long scheduled = 0;
  Verdict schedule_check;
  Verdict cache_check;

  long h() const { return static_cast<long>(blocks.size()); }
  Rational sum_dof() const { return blocks.empty() ? Rational(0) : Rational(delivered, h()); }
  Rational per_user_dof() const { return sum_dof() / params.k_r; }
  long failed_blocks() const {
    long n = 0;
    for (const auto& b : blocks) n += b.ok() ? 0 : 1;
    return n;
  }
  long infeasible_blocks() const {
    long n = 0;
    for (const auto& b : blocks) n += b.irs_status == IrsStatus::infeasible ? 1 : 0;
    return n;
  }
  double max_irs_relative() const {
    double m = 0;
    for (const auto& b : blocks) m = std::max(m, b.irs_relative());
    return m;
  }
  double max_zf_residual() const {
    double m = 0;
    for (const auto& b : blocks) m = std::max(m, b.zf_residual);
    return m;
  }
  double max_decode_residual() const {
    double m = 0;
    for (const auto& b : blocks)
      for (double r : b.decode_residual) m = std::max(m, r);
    return m;
  }
  bool passed() const {
    return schedule_check.ok && cache_check.ok && failed_blocks() == 0 && infeasible_blocks() == 0;
  }
};

/// Everything about an episode that does not depend on the channel draw.
struct EpisodeSetup {
  SystemParams params;
  SchemeShape shape;
  DemandVector demand;
  SubfileUniverse universe;
  CacheAssignment cache;
  std::shared_ptr<const CacheIndex> index;
  Schedule schedule;
  Verdict schedule_check;
  Verdict cache_check;
};

inline EpisodeSetup prepare_episode(const SystemParams& p, const EpisodeOptions& opt) {
  p.validate();
  EpisodeSetup s;
  s.params = p;
  const int l = opt.l ? *opt.l : max_feasible_l(p.q_elements, p, opt.mode);
  const PlacementMode placement = choose_placement(p, opt.scheme, opt.partition_budget);
  s.demand = opt.demand ? *opt.demand : DemandVector::worst_case(p.k_r);
  s.demand.validate(p);
  s.universe = split_library(p, placement);
  s.cache = place_caches(s.universe, p);
  s.cache_check = verify_cache_budgets(s.cache, p);
  s.index = std::make_shared<CacheIndex>(s.cache);
  s.shape = shape_scheme(p, l, placement);
  s.schedule = build_schedule(p, s.demand, l, placement,
                              make_serving_systems(p, placement, opt.partition_budget));
  s.schedule_check = verify_schedule_partition(
      s.schedule, scheduled_requests(s.universe, s.demand, s.shape, p.k_r));
  return s;
}

/// Unit-modulus symbol per delivery.
inline std::vector<cx> block_symbols(std::uint64_t seed, const BlockPlan& plan) {
  auto rng = block_stream(seed, plan.index, 1);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<cx> s;
  for (std::size_t d = 0; d < plan.deliveries.size(); ++d) s.push_back(std::polar(1.0, phase(rng)));
  return s;
}

struct BlockState {
  ChannelRealization ch;
  NullSet nulls;
  IrsSolution irs;
  CMatrix h_eq;
  BeamformerSet bf;
};

inline BlockState solve_block(const SystemParams& p, const BlockPlan& plan, std::uint64_t seed,
                              bool irs_enabled) {
  BlockState st;
  st.ch = sample_block_channels(p, plan.index, seed);
  st.nulls = required_nulls(plan, p);
  try {
    if (irs_enabled) {
      st.irs = solve_irs(st.ch, st.nulls);
    } else {
      st.irs.config = IrsConfig::zero(p.q_elements);
      st.irs.equations = st.nulls.size();
      st.irs.elements = p.q_elements;
      st.irs.residual = residuals(st.irs.config, st.ch, st.nulls);
    }
    st.h_eq = equivalent_channel(st.ch, st.irs.config);
    st.bf = precode_block(plan, st.h_eq, p.mu_t);
  } catch (const SingularSystemError& e) {
    throw SingularSystemError("block " + std::to_string(plan.index) + ": " + e.what());
  }
  return st;
}

inline EpisodeReport run_prepared(const EpisodeSetup& s, std::uint64_t seed,
                                  const EpisodeOptions& opt) {
  const auto& p = s.params;
  EpisodeReport rep;
  rep.params = p;
  rep.seed = seed;
  rep.mode = opt.mode;
  rep.irs_enabled = opt.irs_enabled;
  rep.shape = s.shape;
  rep.schedule_check = s.schedule_check;
  rep.cache_check = s.cache_check;
  for (const auto& plan : s.schedule.blocks) {
    const BlockState st = solve_block(p, plan, seed, opt.irs_enabled);
    BlockRecord rec;
    rec.index = plan.index;
    rec.nulls = st.nulls.size();
    rec.irs_status = st.irs.status;
    rec.irs_residual = st.irs.residual;
    rec.channel_scale = st.ch.direct.cwiseAbs().maxCoeff();
    for (std::size_t d = 0; d < plan.deliveries.size(); ++d) {
      const auto& dl = plan.deliveries[d];
      double e = std::abs(effective_gain(st.h_eq, plan, st.bf, d, dl.rx) - 1.0);
      if (p.mu_t == 1) e = 0.0;  // binary selection has no unit-gain constraint
      for (int k : dl.subfile.zf_set) e = std::max(e, std::abs(effective_gain(st.h_eq, plan, st.bf, d, k)));
      rec.zf_residual = std::max(rec.zf_residual, e);
    }
    const auto symbols = block_symbols(seed, plan);
    const CVector x = transmit_block(plan, st.bf, symbols, p.k_t, s.index.get());
    CVector y = st.h_eq * x;
    if (opt.noise_variance > 0) {
      auto rng = block_stream(seed, plan.index, 2);
      std::normal_distribution<double> g(0.0, std::sqrt(opt.noise_variance / 2));
      for (Eigen::Index j = 0; j < y.size(); ++j) {
        const double re = g(rng);
        const double im = g(rng);
        y(j) += cx(re, im);
      }
    }
    for (const auto& dl : plan.deliveries) {
      const auto r = receiver_decode(y(dl.rx - 1), dl.rx, plan, st.h_eq, st.bf, *s.index, symbols);
      rec.rx.push_back(dl.rx);
      rec.decode_residual.push_back(r.residual);
      if (r.residual < opt.tolerance) ++rec.delivered;
    }
    rep.delivered += rec.delivered;
    rep.scheduled += static_cast<long>(plan.deliveries.size());
    rep.blocks.push_back(std::move(rec));
  }
  return rep;
}

inline EpisodeReport run_episode(const SystemParams& p, std::uint64_t seed,
                                 const EpisodeOptions& opt = {}) {
  return run_prepared(prepare_episode(p, opt), seed, opt);
}

struct SlopeEstimate {
  double per_user = 0.0;             // slope of the total rate / (H K_R)
  double per_user_interfered = 0.0;  // mean slope over (receiver, block) pairs with leftover interference
  long interfered_pairs = 0;
  long pairs = 0;
};

namespace detail {

inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  const double den = n * sxx - sx * sx;
  require(std::abs(den) > 1e-12, "estimate_dof_slope: degenerate fit");
  return (n * sxy - sx * sy) / den;
}

}  // namespace detail

/// Rates log2(1 + SINR) at unit noise with per-transmitter power scaled to P;
/// the fitted slope against log2 P is the DoF.
inline SlopeEstimate estimate_dof_slope(const SystemParams& p, std::uint64_t seed,
                                        const std::vector<double>& powers,
                                        const EpisodeOptions& opt = {}) {
  require(powers.size() >= 2, "estimate_dof_slope: need at least two powers");
  for (std::size_t k = 0; k < powers.size(); ++k) {
    require(powers[k] >= 1e3, "estimate_dof_slope: powers must be >= 1e3");
    if (k) require(powers[k] > powers[k - 1], "estimate_dof_slope: powers must increase");
  }
  const EpisodeSetup s = prepare_episode(p, opt);
  std::vector<double> logp;
  for (double pw : powers) logp.push_back(std::log2(pw));
  std::vector<double> total(powers.size(), 0.0);
  std::vector<std::vector<double>> interfered;  // per pair: rates at each power
  long pairs = 0;
  for (const auto& plan : s.schedule.blocks) {
    const BlockState st = solve_block(p, plan, seed, opt.irs_enabled);
    std::vector<double> load(static_cast<std::size_t>(p.k_t), 0.0);
    for (std::size_t d = 0; d < plan.deliveries.size(); ++d)
      for (std::size_t k = 0; k < plan.deliveries[d].serving.size(); ++k)
        load[static_cast<std::size_t>(plan.deliveries[d].serving[k] - 1)] += std::norm(st.bf.v[d][k]);
    const double peak = *std::max_element(load.begin(), load.end());
    for (std::size_t d = 0; d < plan.deliveries.size(); ++d) {
      const int rx = plan.deliveries[d].rx;
      const double g2 = std::norm(effective_gain(st.h_eq, plan, st.bf, d, rx));
      double leak = 0.0;
      for (std::size_t e = 0; e < plan.deliveries.size(); ++e)
        if (e != d && !s.index->rx_has(rx, plan.deliveries[e].subfile))
          leak += std::norm(effective_gain(st.h_eq, plan, st.bf, e, rx));
      std::vector<double> rates;
      for (std::size_t k = 0; k < powers.size(); ++k) {
        const double a2 = powers[k] / peak;
        const double rate = std::log2(1.0 + a2 * g2 / (a2 * leak + 1.0));
        total[k] += rate;
        rates.push_back(rate);
      }
      ++pairs;
      if (leak > 1e-9 * g2) interfered.push_back(std::move(rates));
    }
  }
  SlopeEstimate out;
  out.pairs = pairs;
  out.per_user = detail::fit_slope(logp, total) / (static_cast<double>(s.schedule.h()) * p.k_r);
  out.interfered_pairs = static_cast<long>(interfered.size());
  if (!interfered.empty()) {
    double acc = 0.0;
    for (const auto& r : interfered) acc += detail::fit_slope(logp, r);
    out.per_user_interfered = acc / static_cast<double>(interfered.size());
  }
  return out;
}

}  // namespace irscache
