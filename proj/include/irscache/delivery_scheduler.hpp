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

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "irscache/cache_placement.hpp"
#include "irscache/combinatorics.hpp"

namespace irscache {

/// d[j-1] is the file requested by receiver j.
struct DemandVector {
  std::vector<int> d;

  static DemandVector worst_case(int k_r) {
    DemandVector v;
    for (int j = 1; j <= k_r; ++j) v.d.push_back(j);
    return v;
  }

  int operator()(int j) const { return d[static_cast<std::size_t>(j - 1)]; }

  bool all_distinct() const {
    auto s = d;
    std::sort(s.begin(), s.end());
    return std::adjacent_find(s.begin(), s.end()) == s.end();
  }

  void validate(const SystemParams& params) const {
    require(static_cast<int>(d.size()) == params.k_r, "demand vector must have K_R entries");
    for (int f : d) require(f >= 1 && f <= params.n_files, "demanded file outside [1, N]");
  }
};

/// Every uncached subfile of W_{d_j}, paired with receiver j.
inline std::vector<Request> demanded_subfiles(const SubfileUniverse& universe,
                                              const DemandVector& demand) {
  std::vector<Request> out;
  for (int j = 1; j <= static_cast<int>(demand.d.size()); ++j)
    for (const auto& w : universe.subfiles)
      if (w.file == demand(j) && !contains(w.rx_set, j))
        out.push_back({w, j, universe.packets_per_subfile});
  return out;
}

enum class Regime { t1_full, t1_subnetwork, t2_partition, t2_ordered, t2_subnetwork };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::t1_full: return "T1-I";
    case Regime::t1_subnetwork: return "T1-II";
    case Regime::t2_partition: return "T2-IA";
    case Regime::t2_ordered: return "T2-IB";
    case Regime::t2_subnetwork: return "T2-II";
  }
  return "?";
}

/// Which transmitter-side construction a mu_T >= 2 schedule uses.
enum class Scheme { automatic, partition, ordered };

/// Resolved shape of a delivery scheme for given parameters and IRS size L.
struct SchemeShape {
  Regime regime = Regime::t1_full;
  PlacementMode placement = PlacementMode::subset;
  int l = 0;            // requested IRS parameter L
  int leftover = 0;     // receivers per block reached through IRS nulls only
  int zf_size = 0;      // |T|, receivers zero-forced by transmitter cooperation
  int active = 0;       // receivers served per block
  bool subnetwork = false;

  /// Cross-links the lemma topology nulls in every block.
  int nulls_per_block(int mu_t) const { return mu_t * leftover * (leftover + 1); }
};

/// Largest L the theorem admits for these parameters.
inline int l_cap(const SystemParams& p) {
  return p.mu_t == 1 ? std::min(p.k_t - 1, p.k_r - 1) : std::min(p.m_groups() - 1, p.k_r - 1);
}

inline SchemeShape shape_scheme(const SystemParams& p, int l,
                                PlacementMode placement = PlacementMode::subset) {
  p.validate();
  require(l >= 0 && l <= l_cap(p), "L outside [0, " + std::to_string(l_cap(p)) + "]");
  SchemeShape s;
  s.l = l;
  s.placement = placement;
  if (p.mu_t == 1) {
    s.zf_size = 0;
    s.subnetwork = p.mu_r + 1 + l < p.k_r;
    s.leftover = s.subnetwork ? l : p.k_r - p.mu_r - 1;
    s.regime = s.subnetwork ? Regime::t1_subnetwork : Regime::t1_full;
  } else {
    s.subnetwork = p.mu_r + p.mu_t + l < p.k_r;
    // When mu_R + mu_T exceeds K_R every non-caching receiver is zero-forced.
    s.zf_size = std::min(p.mu_t - 1, p.k_r - p.mu_r - 1);
    s.leftover = s.subnetwork ? l : std::max(0, p.k_r - p.mu_r - p.mu_t);
    s.regime = s.subnetwork ? Regime::t2_subnetwork
               : placement == PlacementMode::subset ? Regime::t2_partition
                                                    : Regime::t2_ordered;
  }
  s.active = 1 + p.mu_r + s.zf_size + s.leftover;
  return s;
}

struct Delivery {
  SubfileId subfile;
  int rx = 0;
  Subset serving;
  int group = 1;  // 1: head group; 2..: the IRS-separated single-subfile groups
};

struct BlockPlan {
  long index = 0;  // 1-based
  std::vector<Delivery> deliveries;
  Subset active_rx;
  std::vector<std::pair<int, int>> null_links;  // (tx, rx), sorted
  int head = 0;
  Subset cache_set;  // R of the head receiver's subfile
  Subset zf_set;     // T of the head receiver's subfile
};

struct Schedule {
  std::vector<BlockPlan> blocks;
  Regime regime = Regime::t1_full;
  SchemeShape shape;

  long h() const { return static_cast<long>(blocks.size()); }
};

namespace detail {

// Serving set (tx set, kappa) for IRS group l at rotation r.
using ServingFn = std::function<std::pair<Subset, long>(int l, long r)>;

inline void emit_subnetwork(Schedule& out, const DemandVector& demand, const Subset& active,
                            int mu_r, int zf_size, int leftover, long rotations,
                            const ServingFn& serve, bool label_irs) {
  const int head = active.front();
  const Subset others = without(active, head);
  std::vector<std::pair<Subset, Subset>> anchors;
  for (const auto& rpos : enumerate_subsets(static_cast<int>(others.size()), mu_r)) {
    Subset r;
    for (int p : rpos) r.push_back(others[static_cast<std::size_t>(p - 1)]);
    const Subset rest = set_minus(others, r);
    for (const auto& tpos : enumerate_subsets(static_cast<int>(rest.size()), zf_size)) {
      Subset t;
      for (int p : tpos) t.push_back(rest[static_cast<std::size_t>(p - 1)]);
      anchors.emplace_back(r, std::move(t));
    }
  }
  for (long rot = 0; rot < rotations; ++rot) {
    for (const auto& [r, t] : anchors) {
      BlockPlan b;
      b.index = out.h() + 1;
      b.active_rx = active;
      b.head = head;
      b.cache_set = r;
      b.zf_set = t;
      const Subset left = set_minus(others, set_union(r, t));
      require(static_cast<int>(left.size()) == leftover, "scheduler: leftover size mismatch");

      auto make = [&](int rx, Subset rs, Subset ts, int group) {
        auto [tx, kappa] = serve(group, rot);
        SubfileId w{demand(rx), kappa, tx, std::move(rs), std::move(ts), {}};
        if (label_irs) w.irs_set = set_minus(without(active, rx), set_union(w.rx_set, w.zf_set));
        b.deliveries.push_back({std::move(w), rx, tx, group});
      };
      make(head, r, t, 1);
      for (int j : r) make(j, with(without(r, j), head), t, 1);
      for (int j : t) make(j, r, with(without(t, j), head), 1);
      for (std::size_t g = 0; g < left.size(); ++g) make(left[g], r, t, static_cast<int>(g) + 2);

      // Head group reaches only head, R and T; group of leftover receiver j
      // reaches only j, R and T.
      std::set<std::pair<int, int>> nulls;
      for (const auto& dl : b.deliveries) {
        for (int i : dl.serving) {
          if (dl.group == 1) {
            for (int j : left) nulls.emplace(i, j);
          } else {
            nulls.emplace(i, head);
            for (int j : left)
              if (j != dl.rx) nulls.emplace(i, j);
          }
        }
      }
      b.null_links.assign(nulls.begin(), nulls.end());
      out.blocks.push_back(std::move(b));
    }
  }
}

}  // namespace detail

/// Transmitter-side ingredients for mu_T >= 2 schedules.
struct ServingSystems {
  std::shared_ptr<const SubsetPartitionSystem> partition;
  std::shared_ptr<const OrderedPartitionSystem> ordered;
};

namespace detail {

inline std::pair<ServingFn, long> serving_for(const SystemParams& p, const SchemeShape& s,
                                              const ServingSystems& sys) {
  if (p.mu_t == 1) {
    const int kt = p.k_t;
    // S_{k1,1,l} = l, rotated by k2 - 1 = r.
    return {[kt](int l, long r) { return std::pair{Subset{cyclic_shift(l, r, kt)}, 0L}; }, kt};
  }
  const int m = p.m_groups();
  if (s.placement == PlacementMode::subset) {
    require(sys.partition != nullptr, "subset-partition schedule needs a partition system");
    require(sys.partition->m == m && sys.partition->mu_t == p.mu_t,
            "partition system does not match (M, mu_T)");
    auto part = sys.partition;
    // kappa = (l (+)_M (k2-1)) + (k3-1) M with r = (k3-1) M + (k2-1).
    return {[part, m](int l, long r) {
              const long k2 = r % m;
              const long k3 = r / m;
              const long kappa = cyclic_shift(l, k2, m) + k3 * m;
              return std::pair{part->by_kappa(kappa), 0L};
            },
            part->kappa_count()};
  }
  require(sys.ordered != nullptr, "ordered schedule needs an ordered-partition system");
  require(sys.ordered->m == m && sys.ordered->mu_t == p.mu_t,
          "ordered-partition system does not match (M, mu_T)");
  auto ord = sys.ordered;
  const long sub = factorial_i64(m - 1);
  const long window = sub * m;
  // Inside a window the first block of the ordering selects the caching
  // transmitters; IRS groups use distinct first blocks, rotated by k2.
  return {[ord, m, sub, window](int l, long r) {
            const long k2 = r % m;
            const long k3 = (r / m) % sub;
            const long k4 = r / window;
            const long first = (l - 1 + k2) % m;
            const long kappa = k4 * window + first * sub + k3 + 1;
            return std::pair{ord->by_kappa(kappa).front(), kappa};
          },
          ord->size()};
}

inline Schedule build(const SystemParams& p, const DemandVector& demand, const SchemeShape& s,
                      const ServingSystems& sys) {
  demand.validate(p);
  require(s.leftover + 1 <= (p.mu_t == 1 ? p.k_t : p.m_groups()),
          "not enough disjoint serving sets for L + 1 groups per block");
  Schedule out;
  out.regime = s.regime;
  out.shape = s;
  auto [serve, rotations] = serving_for(p, s, sys);
  if (!s.subnetwork) {
    emit_subnetwork(out, demand, iota_set(p.k_r), p.mu_r, s.zf_size, s.leftover, rotations, serve,
                    false);
  } else {
    for (const auto& c : enumerate_subsets(p.k_r, s.active))
      emit_subnetwork(out, demand, c, p.mu_r, s.zf_size, s.leftover, rotations, serve, true);
  }
  return out;
}

}  // namespace detail

/// mu_T = 1 with mu_R + 1 + L >= K_R: all K_R receivers served in every block.
inline Schedule schedule_theorem1(const SystemParams& p, const DemandVector& demand) {
  require(p.mu_t == 1, "schedule_theorem1: mu_T must be 1");
  const int l = p.k_r - p.mu_r - 1;
  require(l <= p.k_t - 1, "schedule_theorem1: needs K_R - mu_R - 1 <= K_T - 1");
  require(p.q_elements >= l * (l + 1), "schedule_theorem1: Q >= L(L+1) violated");
  return detail::build(p, demand, shape_scheme(p, l), {});
}

/// mu_T >= 2 with an (M, mu_T)-subset partition and mu_R + mu_T + L >= K_R.
inline Schedule schedule_theorem2_partition(const SystemParams& p, const DemandVector& demand,
                                            const SubsetPartitionSystem& sys) {
  require(p.mu_t >= 2, "schedule_theorem2_partition: mu_T must be >= 2");
  if (auto v = verify_subset_partition(sys); !v) throw PreconditionError("invalid partition system: " + v.report);
  const int l = std::max(0, p.k_r - p.mu_r - p.mu_t);
  return detail::build(p, demand, shape_scheme(p, l, PlacementMode::subset),
                       {std::make_shared<SubsetPartitionSystem>(sys), nullptr});
}

/// mu_T >= 2 over ordered partitions and mu_R + mu_T + L >= K_R.
inline Schedule schedule_theorem2_ordered(const SystemParams& p, const DemandVector& demand,
                                          const OrderedPartitionSystem& sys) {
  require(p.mu_t >= 2, "schedule_theorem2_ordered: mu_T must be >= 2");
  const int l = std::max(0, p.k_r - p.mu_r - p.mu_t);
  return detail::build(p, demand, shape_scheme(p, l, PlacementMode::ordered),
                       {nullptr, std::make_shared<OrderedPartitionSystem>(sys)});
}

/// Sub-network schedule: every active set C of mu_R + mu_T + L receivers gets
/// its own full-DoF schedule on L-refined subfiles.
inline Schedule schedule_caseII(const SystemParams& p, const DemandVector& demand, int l,
                                PlacementMode inner, const ServingSystems& sys = {}) {
  const auto s = shape_scheme(p, l, inner);
  require(s.subnetwork, "schedule_caseII: needs mu_R + mu_T + L < K_R");
  if (p.mu_t == 1) require(p.q_elements >= l * (l + 1), "schedule_caseII: Q >= L(L+1) violated");
  return detail::build(p, demand, s, sys);
}

/// Transmitter-side systems for a parameter set, built on demand.
inline ServingSystems make_serving_systems(const SystemParams& p, PlacementMode placement,
                                           std::uint64_t budget = kDefaultPartitionBudget) {
  ServingSystems sys;
  if (p.mu_t < 2) return sys;
  if (placement == PlacementMode::subset) {
    auto found = find_subset_partition(p.m_groups(), p.mu_t, budget);
    require(found.has_value(), "no (M, mu_T)-subset partition found within budget");
    sys.partition = std::make_shared<SubsetPartitionSystem>(std::move(*found));
  } else {
    sys.ordered = std::make_shared<OrderedPartitionSystem>(
        enumerate_ordered_partitions(p.m_groups(), p.mu_t));
  }
  return sys;
}

/// Picks subset placement when a subset partition is found within budget and
/// falls back to ordered partitions otherwise.
inline PlacementMode choose_placement(const SystemParams& p, Scheme scheme,
                                      std::uint64_t budget = kDefaultPartitionBudget) {
  if (p.mu_t == 1 || scheme == Scheme::partition) return PlacementMode::subset;
  if (scheme == Scheme::ordered) return PlacementMode::ordered;
  return find_subset_partition(p.m_groups(), p.mu_t, budget) ? PlacementMode::subset
                                                             : PlacementMode::ordered;
}

inline Schedule build_schedule(const SystemParams& p, const DemandVector& demand, int l,
                               PlacementMode placement, const ServingSystems& sys) {
  return detail::build(p, demand, shape_scheme(p, l, placement), sys);
}

/// The refined requests a schedule of this shape must deliver exactly once.
inline std::vector<Request> scheduled_requests(const SubfileUniverse& universe,
                                               const DemandVector& demand,
                                               const SchemeShape& shape, int k_r) {
  return refine_subfiles(demanded_subfiles(universe, demand), k_r, shape.zf_size,
                         shape.subnetwork ? shape.leftover : 0);
}

inline Verdict verify_schedule_partition(const Schedule& schedule,
                                         const std::vector<Request>& demanded) {
  std::map<std::pair<int, SubfileId>, int> count;
  for (const auto& r : demanded) count.emplace(std::pair{r.rx, r.subfile}, 0);
  std::vector<std::string> problems;
  std::size_t extra = 0;
  for (const auto& b : schedule.blocks) {
    for (const auto& dl : b.deliveries) {
      auto it = count.find({dl.rx, dl.subfile});
      if (it == count.end()) {
        if (++extra <= 5)
          problems.push_back("undemanded delivery " + to_string(dl.subfile) + " -> rx " +
                             std::to_string(dl.rx) + " in block " + std::to_string(b.index));
        continue;
      }
      if (++it->second == 2)
        problems.push_back("duplicate delivery " + to_string(dl.subfile) + " -> rx " +
                           std::to_string(dl.rx) + " (block " + std::to_string(b.index) + ")");
    }
  }
  std::vector<std::string> missing;
  for (const auto& [key, n] : count)
    if (n == 0) missing.push_back(to_string(key.second) + " -> rx " + std::to_string(key.first));
  if (problems.empty() && missing.empty()) return Verdict::pass();
  std::string report;
  for (const auto& p : problems) report += p + "; ";
  if (extra > 5) report += std::to_string(extra - 5) + " more undemanded deliveries; ";
  if (!missing.empty()) {
    report += "missing " + std::to_string(missing.size()) + " subfiles:";
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) report += " " + missing[i];
    if (missing.size() > 20) report += " ...";
  }
  return Verdict::fail(report);
}

}  // namespace irscache
