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
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace irscache {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation was violated by the caller.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A linear system that is singular only on a probability-zero set of channel
/// draws turned out singular. Resampling the channel is the remedy.
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

/// The delivery schedule and the cache placement disagree.
class ScheduleConsistencyError : public Error {
 public:
  using Error::Error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw PreconditionError(what);
}

/// Sorted, duplicate-free list of 1-based node indices.
using Subset = std::vector<int>;

inline bool contains(const Subset& s, int x) {
  return std::binary_search(s.begin(), s.end(), x);
}

inline Subset set_union(const Subset& a, const Subset& b) {
  Subset out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline Subset set_minus(const Subset& a, const Subset& b) {
  Subset out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

inline Subset with(const Subset& a, int x) { return set_union(a, Subset{x}); }
inline Subset without(const Subset& a, int x) { return set_minus(a, Subset{x}); }

inline bool disjoint(const Subset& a, const Subset& b) {
  Subset out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out.empty();
}

/// [1 : n]
inline Subset iota_set(int n) {
  Subset s(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = i + 1;
  return s;
}

inline std::string to_string(const Subset& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "}";
}

/// Exact binomial coefficient; zero when k < 0 or k > n.
inline BigInt binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (long i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

inline BigInt factorial(long n) {
  BigInt r = 1;
  for (long i = 2; i <= n; ++i) r *= i;
  return r;
}

/// Binomial coefficient for counting loops; throws when it does not fit.
inline std::int64_t binomial_i64(long n, long k) {
  const BigInt b = binomial(n, k);
  if (b > std::numeric_limits<std::int64_t>::max())
    throw PreconditionError("binomial coefficient overflows 64-bit count");
  return b.convert_to<std::int64_t>();
}

inline std::int64_t factorial_i64(long n) {
  const BigInt b = factorial(n);
  if (b > std::numeric_limits<std::int64_t>::max())
    throw PreconditionError("factorial overflows 64-bit count");
  return b.convert_to<std::int64_t>();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace irscache
