/* Copyright (C) 2026 The dmtrace authors.
 * This program is licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#include <optional>

#include "doctest.h"
#include "dmtrace/errors.hpp"
#include "dmtrace/hecke.hpp"

using namespace dmt;

TEST_SUITE("hecke") {

TEST_CASE("power sums of a monic quadratic") {
    auto f3 = build_tower(3, 1, 1);
    const FieldTower* b = f3.get();
    Poly T = poly_T(b);
    Poly one = poly_one(b);
    Poly a2T = poly_scale(ff_make(b, {2}), T);
    CHECK(symmetric_trace(a2T, T * T, 0) == one);
    CHECK(symmetric_trace(a2T, T * T, 1) == a2T);
    // s_2 = a^2 - b = 4T^2 - T^2 = 0 mod 3
    CHECK(symmetric_trace(a2T, T * T, 2).is_zero());
    // s_3 = a^3 - 2ab; a = T, b = 1: T^3 + T mod 3
    CHECK(symmetric_trace(T, one, 3) == T * T * T + T);
    // s_4 = a^4 - 3a^2 b + b^2 = a^4 + b^2 mod 3; a = T, b = T
    CHECK(symmetric_trace(T, T, 4) == T * T * T * T + T * T);
}

TEST_CASE("bound comparisons with doubled exponents") {
    CHECK(ramanujan_check(std::optional<int>(-2), -2));
    CHECK(ramanujan_check(std::nullopt, -100));   // zero always passes
    CHECK(!ramanujan_check(std::optional<int>(3), 4));  // 6 > 4
}

TEST_CASE("worked trace values at the degree-1 prime") {
    auto f3 = build_tower(3, 1, 1);
    Poly T = poly_T(f3.get());
    RatF Tr = rf_T(f3.get());

    HeckeTraceReport r41 = hecke_trace(HeckeQuery{f3, T, 1, 4, 1}, true);
    CHECK(r41.trace_adelic == rf_inv(Tr * Tr));
    CHECK(r41.trace_normalized == Tr);
    CHECK(r41.class_count == 6);
    REQUIRE(r41.exponent_adelic.has_value());
    CHECK(*r41.exponent_adelic == -2);
    CHECK(r41.bound2_adelic == -2);
    CHECK(r41.bound2_normalized == 4);
    CHECK(r41.ramanujan_adelic_ok);
    CHECK(r41.ramanujan_normalized_ok);

    HeckeTraceReport r51 = hecke_trace(HeckeQuery{f3, T, 1, 5, 1}, true);
    CHECK(r51.trace_adelic.is_zero());
    CHECK(r51.trace_normalized.is_zero());
    CHECK(!r51.exponent_adelic.has_value());
    CHECK(r51.ramanujan_adelic_ok);
    CHECK(r51.ramanujan_normalized_ok);

    HeckeTraceReport r61 = hecke_trace(HeckeQuery{f3, T, 1, 6, 1}, true);
    CHECK(r61.trace_adelic == rf_inv(Tr * Tr * Tr * Tr));
    CHECK(r61.trace_normalized == Tr);
}

TEST_CASE("adelic trace equals the weighted crystal fiber sum") {
    auto f3 = build_tower(3, 1, 1);
    Poly T = poly_T(f3.get());
    for (int k = 2; k <= 6; ++k) {
        HeckeQuery qu{f3, T, 1, k, 1};
        CHECK(crystal_side_trace(qu) == hecke_trace(qu).trace_adelic);
    }
}

TEST_CASE("bounds hold for negative and large type values") {
    auto f3 = build_tower(3, 1, 1);
    Poly T = poly_T(f3.get());
    HeckeTraceReport rneg = hecke_trace(HeckeQuery{f3, T, 1, 4, -2}, true);
    CHECK(rneg.ramanujan_adelic_ok);
    CHECK(rneg.ramanujan_normalized_ok);
    HeckeTraceReport rbig = hecke_trace(HeckeQuery{f3, T, 1, 4, 6}, true);
    CHECK(rbig.ramanujan_adelic_ok);
    CHECK(rbig.ramanujan_normalized_ok);
}

TEST_CASE("operator powers multiply on a one-dimensional space") {
    auto f3 = build_tower(3, 1, 1);
    Poly T = poly_T(f3.get());
    HeckeTraceReport r1 = hecke_trace(HeckeQuery{f3, T, 1, 4, 1});
    HeckeTraceReport r2 = hecke_trace(HeckeQuery{f3, T, 2, 4, 1}, true);
    CHECK(r2.trace_adelic == r1.trace_adelic * r1.trace_adelic);
    CHECK(r2.class_count == 24);
    HeckeTraceReport r3 = hecke_trace(HeckeQuery{f3, T, 3, 4, 1});
    CHECK(r3.trace_adelic ==
          r1.trace_adelic * r1.trace_adelic * r1.trace_adelic);
}

TEST_CASE("degree-2 prime values") {
    auto f3 = build_tower(3, 1, 1);
    Poly P = parse_poly("T^2+1", f3.get());
    RatF Pr(P);
    HeckeTraceReport r = hecke_trace(HeckeQuery{f3, P, 1, 4, 1}, true);
    CHECK(r.class_count == 24);
    CHECK(r.trace_adelic == rf_inv(Pr * Pr));
    CHECK(r.ramanujan_adelic_ok);
    CHECK(r.ramanujan_normalized_ok);
    HeckeTraceReport r2 = hecke_trace(HeckeQuery{f3, P, 2, 4, 1});
    CHECK(r2.class_count == 168);
    CHECK(r2.trace_adelic == rf_pow(Pr, -4));
}

TEST_CASE("forced vanishing off the congruence k = 2l mod (q-1)") {
    auto f3 = build_tower(3, 1, 1);
    Poly T = poly_T(f3.get());
    for (int k = 2; k <= 9; ++k)
        for (int l = 0; l <= 1; ++l) {
            HeckeTraceReport r = hecke_trace(HeckeQuery{f3, T, 1, k, l});
            if (((k - 2 * l) % 2 + 2) % 2 != 0) CHECK(r.trace_adelic.is_zero());
        }
}

TEST_CASE("table rows are canonical and cached per extension") {
    auto f3 = build_tower(3, 1, 1);
    Poly T = poly_T(f3.get());
    HeckeTraceReport single = hecke_trace(HeckeQuery{f3, T, 1, 4, 1});
    HeckeRanges rg;
    rg.P = {T};
    rg.n = {1};
    rg.k = {4};
    rg.l = {1};
    auto tbl = trace_table(f3, rg);
    REQUIRE(tbl.size() == 1);
    CHECK(tbl[0].trace_adelic == single.trace_adelic);

    rg.k = {5, 7};
    tbl = trace_table(f3, rg);
    REQUIRE(tbl.size() == 2);
    for (auto& r : tbl) CHECK(r.trace_adelic.is_zero());

    rg.k = {4};
    rg.n = {1, 2};
    tbl = trace_table(f3, rg);
    REQUIRE(tbl.size() == 2);
    CHECK(tbl[1].trace_adelic == tbl[0].trace_adelic * tbl[0].trace_adelic);

    // duplicate and unsorted ranges collapse to the canonical grid
    rg.n = {2, 1, 2};
    rg.k = {4, 4};
    auto tbl2 = trace_table(f3, rg);
    REQUIRE(tbl2.size() == 2);
    CHECK(tbl2[0].trace_adelic == tbl[0].trace_adelic);
    CHECK(tbl2[1].trace_adelic == tbl[1].trace_adelic);
}

TEST_CASE("query validation") {
    auto f3 = build_tower(3, 1, 1);
    auto f9 = build_tower(3, 1, 2);
    Poly T = poly_T(f3.get());
    CHECK_THROWS_AS(hecke_trace(HeckeQuery{f3, T * T, 1, 4, 1}), UserError);
    CHECK_THROWS_AS(hecke_trace(HeckeQuery{f3, T, 0, 4, 1}), UserError);
    CHECK_THROWS_AS(hecke_trace(HeckeQuery{f3, T, 1, 1, 1}), UserError);
    CHECK_THROWS_AS(hecke_trace(HeckeQuery{f9, poly_T(f9.get()), 1, 4, 1}),
                    UserError);
    // q^{nd} = 3^7 blows the default enumeration budget
    CHECK_THROWS_AS(hecke_trace(HeckeQuery{f3, T, 7, 4, 1}), BudgetError);
}

TEST_CASE("rows from a caller supplied class list") {
    auto f3 = build_tower(3, 1, 1);
    auto f9 = build_tower(3, 1, 2);
    Poly T = poly_T(f3.get());
    FFElem theta = canonical_theta(T, f9);
    ClassList cl = enumerate_classes(f9, theta);
    auto rows = hecke_rows_with_classes(f3, T, 2, {4, 5}, {1}, cl, false);
    REQUIRE(rows.size() == 2);
    HeckeTraceReport direct = hecke_trace(HeckeQuery{f3, T, 2, 4, 1});
    CHECK(rows[0].trace_adelic == direct.trace_adelic);
    CHECK(rows[0].trace_normalized == direct.trace_normalized);
    CHECK(rows[1].trace_adelic.is_zero());

    SUBCASE("tampered stabilizer order breaks the mass check") {
        cl.entries[0].aut += 1;
        CHECK_THROWS_AS(hecke_rows_with_classes(f3, T, 2, {4}, {1}, cl, false),
                        UserError);
    }
    SUBCASE("a list for the wrong characteristic is rejected") {
        Poly P2 = parse_poly("T^2+1", f3.get());
        CHECK_THROWS_AS(hecke_rows_with_classes(f3, P2, 1, {4}, {1}, cl, false),
                        UserError);
    }
}

TEST_CASE("recurrence and crystal paths agree with cross checking on") {
    // cross_check = true recomputes every class term through the semilinear
    // trace of the fiber; any disagreement throws.
    auto f3 = build_tower(3, 1, 1);
    Poly P = parse_poly("T^2+1", f3.get());
    for (int k = 2; k <= 5; ++k)
        CHECK_NOTHROW(hecke_trace(HeckeQuery{f3, P, 1, k, 1}, true));
}

}  // TEST_SUITE
