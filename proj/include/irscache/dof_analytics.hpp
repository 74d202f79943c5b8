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
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "irscache/common.hpp"
#include "irscache/delivery_scheduler.hpp"
#include "irscache/params.hpp"

namespace irscache {

/// How many IRS elements an L-topology costs: L(L+1) as provisioned by the
/// theorems, or mu_T L(L+1), the number of cross-links the mu_T >= 2 topology
/// actually nulls.
enum class QMode { paper_strict, sufficient };

inline const char* to_string(QMode m) {
  return m == QMode::paper_strict ? "paper-strict" : "sufficient";
}

inline long required_elements(int l, int mu_t, QMode mode) {
  const long base = static_cast<long>(l) * (l + 1);
  return mode == QMode::sufficient ? base * mu_t : base;
}

namespace detail {

inline void check_dof_params(const SystemParams& p) {
  require(p.k_t >= 1 && p.k_r >= 2, "need K_T >= 1 and K_R >= 2");
  require(p.mu_t >= 1 && p.mu_t <= p.k_t, "mu_T in [1, K_T] violated");
  require(p.mu_r >= 1 && p.mu_r <= p.k_r - 1, "mu_R in [1, K_R-1] violated");
  if (p.mu_t >= 2)
    require(p.k_t % p.mu_t == 0, "K_T must equal M*mu_T (K_T=" + std::to_string(p.k_t) +
                                     ", mu_T=" + std::to_string(p.mu_t) + ")");
}

}  // namespace detail

inline int max_feasible_l(long q_elements, const SystemParams& p, QMode mode) {
  require(q_elements >= 0, "Q >= 0 violated");
  detail::check_dof_params(p);
  int l = 0;
  while (l + 1 <= l_cap(p) && required_elements(l + 1, p.mu_t, mode) <= q_elements) ++l;
  return l;
}

struct DofPoint {
  int k_t = 0, k_r = 0, mu_t = 0, mu_r = 0;
  long q = 0;
  int l = 0;
  std::string scheme;  // thm1 | thm2 | bench_oneshot | bench_ndt, optionally suffixed
  QMode mode = QMode::paper_strict;
  Rational sum_dof;
  Rational per_user_dof;
};

namespace detail {

inline DofPoint point(const SystemParams& p, std::string scheme, int l, const Rational& per_user) {
  DofPoint d;
  d.k_t = p.k_t;
  d.k_r = p.k_r;
  d.mu_t = p.mu_t;
  d.mu_r = p.mu_r;
  d.q = p.q_elements;
  d.l = l;
  d.scheme = std::move(scheme);
  d.per_user_dof = per_user;
  d.sum_dof = per_user * p.k_r;
  return d;
}

}  // namespace detail

inline DofPoint dof_theorem1(const SystemParams& p, int l) {
  detail::check_dof_params(p);
  require(p.mu_t == 1, "dof_theorem1: mu_T must be 1");
  require(l >= 0 && l <= l_cap(p), "dof_theorem1: L outside [0, min(K_T-1, K_R-1)]");
  return detail::point(p, "thm1", l, Rational(std::min(p.mu_r + 1 + l, p.k_r), p.k_r));
}

inline DofPoint dof_theorem2(const SystemParams& p, int l) {
  detail::check_dof_params(p);
  require(p.mu_t >= 2, "dof_theorem2: mu_T must be >= 2");
  require(l >= 0 && l <= l_cap(p), "dof_theorem2: L outside [0, min(M-1, K_R-1)]");
  return detail::point(p, "thm2", l, Rational(std::min(p.mu_r + p.mu_t + l, p.k_r), p.k_r));
}

inline DofPoint dof_theorem(const SystemParams& p, int l) {
  return p.mu_t == 1 ? dof_theorem1(p, l) : dof_theorem2(p, l);
}

inline DofPoint dof_benchmark_oneshot(const SystemParams& p) {
  detail::check_dof_params(p);
  return detail::point(p, "bench_oneshot", 0,
                       Rational(std::min(p.mu_t + p.mu_r, p.k_r), p.k_r));
}

/// d_1 term of the symbol-extension benchmark: max over mu_T' in [1 : mu_T].
inline Rational ndt_d1(const SystemParams& p) {
  Rational best = 0;
  const long kr = p.k_r, kt = p.k_t, mr = p.mu_r;
  for (long t = 1; t <= p.mu_t; ++t) {
    const BigInt a = binomial(kr - 1, mr) * binomial(kt - 1, t) * binomial(kr - mr - 1, t - 1) * t;
    const BigInt b = binomial(kr - 1, mr + 1) * binomial(kr - mr - 2, t - 1) * binomial(kt, t - 1);
    if (a + b == 0) continue;
    best = std::max(best, Rational(a, a + b));
  }
  return best;
}

inline DofPoint dof_benchmark_ndt(const SystemParams& p) {
  detail::check_dof_params(p);
  const int s = p.mu_r + p.mu_t;
  Rational v;
  if (s >= p.k_r) {
    v = 1;
  } else if (s == p.k_r - 1) {
    const BigInt a = binomial(p.k_r - 1, p.mu_r) * binomial(p.k_t - 1, p.mu_t) * p.mu_t;
    v = Rational(a, a + 1);
  } else {
    v = std::max(ndt_d1(p), Rational(s, p.k_r));
  }
  return detail::point(p, "bench_ndt", 0, v);
}

/// Fractional cache sizes / IRS parameter handled by time-sharing between the
/// integer schemes at the surrounding grid corners.
inline DofPoint dof_memory_sharing(const SystemParams& p, const Rational& mu_t, const Rational& mu_r,
                                   const Rational& l) {
  require(mu_t >= 1 && mu_t <= p.k_t, "memory sharing: mu_T outside [1, K_T]");
  require(mu_r >= 1 && mu_r <= p.k_r - 1, "memory sharing: mu_R outside [1, K_R-1]");
  require(l >= 0 && l <= p.k_r - 1, "memory sharing: L outside [0, K_R-1]");
  auto floor_of = [](const Rational& x) {
    return static_cast<long>(numerator(x) / denominator(x));  // x >= 0
  };
  const std::array<Rational, 3> x{mu_t, mu_r, l};
  std::array<long, 3> lo{};
  std::array<Rational, 3> frac{};
  for (int k = 0; k < 3; ++k) {
    lo[k] = floor_of(x[k]);
    frac[k] = x[k] - lo[k];
  }
  Rational acc = 0;
  for (int corner = 0; corner < 8; ++corner) {
    Rational w = 1;
    std::array<long, 3> c{};
    for (int k = 0; k < 3; ++k) {
      const bool up = (corner >> k) & 1;
      if (up && frac[k] == 0) {
        w = 0;
        break;
      }
      c[k] = lo[k] + (up ? 1 : 0);
      w *= up ? frac[k] : 1 - frac[k];
    }
    if (w == 0) continue;
    acc += w * Rational(std::min<long>(c[0] + c[1] + c[2], p.k_r), p.k_r);
  }
  DofPoint d = detail::point(p, "memory_sharing", floor_of(l), acc);
  return d;
}

enum class SweepAxis { q, k_r, mu_r };

inline const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::q: return "Q";
    case SweepAxis::k_r: return "K_R";
    case SweepAxis::mu_r: return "mu_R";
  }
  return "?";
}

struct SweepSpec {
  SweepAxis axis = SweepAxis::q;
  std::vector<long> values;
  SystemParams base;
  std::vector<long> q_values;  // IRS sizes plotted along the K_R / mu_R axes
  QMode mode = QMode::paper_strict;
};

struct SweepRow {
  long axis_value = 0;
  DofPoint point;
};

inline std::vector<SweepRow> sweep(const SweepSpec& spec) {
  std::vector<SweepRow> rows;
  for (long v : spec.values) {
    SystemParams p = spec.base;
    if (spec.axis == SweepAxis::q) p.q_elements = static_cast<int>(v);
    if (spec.axis == SweepAxis::k_r) p.k_r = static_cast<int>(v);
    if (spec.axis == SweepAxis::mu_r) p.mu_r = static_cast<int>(v);
    p.n_files = std::max(p.n_files, p.k_r);
    const std::string thm = p.mu_t == 1 ? "thm1" : "thm2";
    auto add_irs = [&](long q, const std::string& label) {
      SystemParams pq = p;
      pq.q_elements = static_cast<int>(q);
      auto d = dof_theorem(pq, max_feasible_l(q, pq, spec.mode));
      d.scheme = label;
      d.mode = spec.mode;
      rows.push_back({v, d});
    };
    if (spec.axis == SweepAxis::q) {
      add_irs(v, thm);
    } else {
      for (long q : spec.q_values) add_irs(q, thm + "_q" + std::to_string(q));
    }
    for (auto d : {dof_benchmark_oneshot(p), dof_benchmark_ndt(p)}) {
      d.mode = spec.mode;
      rows.push_back({v, d});
    }
  }
  return rows;
}

inline std::vector<long> closed_range(long a, long b) {
  std::vector<long> out;
  for (long v = a; v <= b; ++v) out.push_back(v);
  return out;
}

/// Figure presets fig2 ... fig7.
inline SweepSpec preset(const std::string& name, QMode mode = QMode::paper_strict) {
  auto base = [](int kt, int kr, int mu_t, int mu_r) {
    SystemParams p;
    p.k_t = kt;
    p.k_r = kr;
    p.n_files = kr;
    p.mu_t = mu_t;
    p.mu_r = mu_r;
    return p;
  };
  const std::vector<long> qs{2, 12, 30, 110};
  SweepSpec s;
  s.mode = mode;
  if (name == "fig2") {
    s = {SweepAxis::q, closed_range(0, 420), base(26, 26, 1, 5), {}, mode};
  } else if (name == "fig3") {
    s = {SweepAxis::q, closed_range(0, 420), base(26, 26, 2, 12), {}, mode};
  } else if (name == "fig4") {
    s = {SweepAxis::k_r, closed_range(6, 40), base(20, 6, 1, 5), qs, mode};
  } else if (name == "fig5") {
    s = {SweepAxis::k_r, closed_range(6, 40), base(20, 6, 2, 5), qs, mode};
  } else if (name == "fig6") {
    s = {SweepAxis::mu_r, closed_range(1, 15), base(16, 16, 1, 1), qs, mode};
  } else if (name == "fig7") {
    s = {SweepAxis::mu_r, closed_range(1, 15), base(16, 16, 2, 1), qs, mode};
  } else {
    throw PreconditionError("unknown preset '" + name + "' (expected fig2 ... fig7)");
  }
  return s;
}

}  // namespace irscache
