/* Copyright (C) 2026 The dmtrace authors.
 * This program is licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#ifndef DMTRACE_HECKE_HPP
#define DMTRACE_HECKE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "dmtrace/drinfeld.hpp"
#include "dmtrace/funcfield.hpp"
#include "dmtrace/poly.hpp"

namespace dmt {

/// One Hecke trace request: the trace of T_P^n on the weight-k type-l cusp
/// forms over F_q[T]. The base tower is the (p, e, 1) tower for F_q and P is
/// a monic irreducible over it; l is an arbitrary integer.
struct HeckeQuery {
    TowerPtr base;
    Poly P;
    int n = 1;
    int k = 2;
    int l = 0;
};

/// Result row. Exponents are at the infinite place (nullopt for the zero
/// trace); bounds are stored doubled so the half-integral k/2 stays exact.
struct HeckeTraceReport {
    HeckeQuery query;
    KElem trace_adelic;             // sum over classes of s_{k-2} b^{l-k+1}
    KElem trace_normalized;         // P^{n(k-l)} times trace_adelic
    std::optional<int> exponent_adelic;
    std::optional<int> exponent_normalized;
    std::int64_t bound2_adelic = 0;      // 2 n d (k/2 + l - k) = n d (2l - k)
    std::int64_t bound2_normalized = 0;  // 2 n d (k/2) = n d k
    bool ramanujan_adelic_ok = false;
    bool ramanujan_normalized_ok = false;
    int class_count = 0;
};

/// Power-sum polynomial s_m of the quadratic X^2 - a X + b: with roots
/// pi, pibar this is sum_{i=0}^m pi^i pibar^{m-i}, computed by the
/// recurrence s_0 = 1, s_1 = a, s_j = a s_{j-1} - b s_{j-2}.
Poly symmetric_trace(const Poly& a, const Poly& b, int m);

/// Whether q^(2 exponent) <= q^bound2 at the infinite place; a missing
/// exponent (zero value) always passes.
bool ramanujan_check(const std::optional<int>& exponent, std::int64_t bound2);

/// Evaluates the trace by enumerating the rank-2 classes over F_{q^{nd}}
/// with the canonical root of P and summing s_{k-2} b^{l-k+1} per class
/// (the sum is unweighted since every class has #Aut = -1 in k). Asserts
/// that the denominator of the result is a power of P. With cross_check
/// every class term is recomputed through the semilinear trace of the
/// fiber module and compared exactly.
HeckeTraceReport hecke_trace(const HeckeQuery& qu, bool cross_check = false,
                             std::uint64_t budget = kDefaultEnumBudget);

/// The stack-side evaluation of the same trace: -1 times the weighted sum
/// over classes of trace(tau^{nd}) on the fiber module, each class weighted
/// by 1/#Aut in K. Agrees with hecke_trace since #Aut = -1 in k; kept as an
/// independent bookkeeping path for the verification suite.
KElem crystal_side_trace(const HeckeQuery& qu,
                         std::uint64_t budget = kDefaultEnumBudget);

/// Cartesian range of queries evaluated in lex order on (P, n, k, l); class
/// lists are enumerated once per (nd, P) and reused across rows.
struct HeckeRanges {
    std::vector<Poly> P;
    std::vector<int> n, k, l;
};

std::vector<HeckeTraceReport> trace_table(const TowerPtr& base,
                                          const HeckeRanges& ranges,
                                          bool cross_check = false,
                                          std::uint64_t budget = kDefaultEnumBudget);

/// Reports for every (k, l) pair of a single (P, n), in the given order,
/// computed against an externally supplied class list (typically loaded from
/// a cache instead of re-enumerated). The list must live on the tower
/// F_{q^{n deg P}} with theta a root of P; its integrity is checked through
/// the mass formula before any row is produced.
std::vector<HeckeTraceReport> hecke_rows_with_classes(
    const TowerPtr& base, const Poly& P, int n, const std::vector<int>& ks,
    const std::vector<int>& ls, const ClassList& classes,
    bool cross_check = false);

}  // namespace dmt

#endif
