/* Copyright (C) 2026 The dmtrace authors.
 * This program is licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#include "doctest.h"
#include "dmtrace/errors.hpp"
#include "dmtrace/funcfield.hpp"

using namespace dmt;

TEST_SUITE("funcfield") {

TEST_CASE("fractions reduce to lowest terms with monic denominator") {
    auto f3 = build_tower(3, 1, 1);
    Poly T = poly_T(f3.get());
    Poly one = poly_one(f3.get());
    // (T^2 - 1) / (T - 1) = T + 1
    RatF r = RatF(T * T - one) / RatF(T - one);
    CHECK(r.num() == T + one);
    CHECK(r.den() == one);
    // scalar denominators normalize into the numerator
    RatF s = RatF(T) / RatF(poly_scale(-ff_one(f3.get()), one));
    CHECK(s.den() == one);
    CHECK(s.num() == poly_scale(-ff_one(f3.get()), T));
}

TEST_CASE("division by zero is rejected") {
    auto f3 = build_tower(3, 1, 1);
    CHECK_THROWS_AS(rf_inv(rf_zero(f3.get())), MathError);
}

TEST_CASE("negative powers") {
    auto f3 = build_tower(3, 1, 1);
    RatF T = rf_T(f3.get());
    CHECK(rf_pow(T, -2) == rf_inv(T * T));
    CHECK(rf_pow(T, 0) == rf_one(f3.get()));
    CHECK(rf_pow(T + rf_one(f3.get()), 3) ==
          (T + rf_one(f3.get())) * (T + rf_one(f3.get())) * (T + rf_one(f3.get())));
}

TEST_CASE("size exponent at the infinite place") {
    auto f3 = build_tower(3, 1, 1);
    RatF T = rf_T(f3.get());
    // deg num - deg den
    CHECK(infty_size_exponent(T * T) == 2);
    CHECK(infty_size_exponent(rf_inv(T)) == -1);
    CHECK(infty_size_exponent(rf_one(f3.get())) == 0);
    CHECK(!infty_size_exponent(rf_zero(f3.get())).has_value());
}

TEST_CASE("quotient ring arithmetic mod T^2+1") {
    auto f3 = build_tower(3, 1, 1);
    Poly T = poly_T(f3.get());
    Poly f = T * T + poly_one(f3.get());
    CoeffRing B = CoeffRing::quotient(f3, f);
    CHECK(B.length_over_fq() == 2);
    RatF t = B.reduce(RatF(T));
    // T^2 = -1 = 2 in the quotient
    RatF t2 = B.mul(t, t);
    CHECK(B.eq(t2, rf_scale_int(B.one(), 2)));
    // T^4 = 1
    CHECK(B.eq(B.mul(t2, t2), B.one()));
}

TEST_CASE("ring kinds and length accounting") {
    auto f3 = build_tower(3, 1, 1);
    auto f9 = build_tower(3, 1, 2);
    CoeffRing base = CoeffRing::base_field(f3);
    CHECK(base.length_over_fq() == 1);
    CoeffRing ext = base.extended_to(f9);
    CHECK(ext.tower() == f9.get());
    Poly T = poly_T(f3.get());
    CoeffRing quad = CoeffRing::quotient(f3, T * T);
    CHECK(quad.length_over_fq() == 2);
}

TEST_CASE("frobenius on an extended ring fixes base elements") {
    auto f3 = build_tower(3, 1, 1);
    auto f9 = build_tower(3, 1, 2);
    CoeffRing R = CoeffRing::base_field(f3).extended_to(f9);
    RatF c(poly_const(ff_gen(f9.get())));
    CHECK(!R.eq(R.frobenius(c, 1), c));  // generator moves
    CHECK(R.eq(R.frobenius(c, 2), c));   // order two
    CHECK(!R.is_frobenius_invariant(c));
    CHECK(R.is_frobenius_invariant(R.mul(c, R.frobenius(c, 1))));  // the norm
    RatF base_elem = rf_scale_int(R.one(), 2);
    CHECK(R.eq(R.frobenius(base_elem, 1), base_elem));
}

TEST_CASE("truncated series arithmetic") {
    auto f3 = build_tower(3, 1, 1);
    CoeffRing B = CoeffRing::base_field(f3);
    // a = 1 + t, b = 1 - t: ab = 1 - t^2
    TruncSeries a(B, 6);
    a.set_coeff(0, B.one());
    a.set_coeff(1, B.one());
    TruncSeries b(B, 6);
    b.set_coeff(0, B.one());
    b.set_coeff(1, rf_scale_int(B.one(), -1));
    TruncSeries ab = a * b;
    CHECK(B.eq(ab.coeff(0), B.one()));
    CHECK(ab.coeff(1).is_zero());
    CHECK(B.eq(ab.coeff(2), rf_scale_int(B.one(), -1)));
    CHECK(ab.coeff(3).is_zero());
}

TEST_CASE("series inverse of 1 - t is the geometric series") {
    auto f3 = build_tower(3, 1, 1);
    CoeffRing B = CoeffRing::base_field(f3);
    TruncSeries a(B, 8);
    a.set_coeff(0, B.one());
    a.set_coeff(1, rf_scale_int(B.one(), -1));
    TruncSeries inv = series_inverse(a);
    for (int n = 0; n <= 8; ++n) CHECK(B.eq(inv.coeff(n), B.one()));
    CHECK(a * inv == TruncSeries(B, 8, {B.one()}));
}

TEST_CASE("t dlog of a product is additive") {
    auto f3 = build_tower(3, 1, 1);
    CoeffRing B = CoeffRing::base_field(f3);
    RatF two = rf_scale_int(B.one(), 2);
    // f = 1 - 2t, g = 1 - t; t dlog picks up sum of root powers
    std::vector<RatF> f = {B.one(), rf_scale_int(B.one(), -2)};
    std::vector<RatF> g = {B.one(), rf_scale_int(B.one(), -1)};
    std::vector<RatF> fg = {B.one(), rf_scale_int(B.one(), -3),
                            B.mul(two, B.one())};
    TruncSeries df = series_dlog(B, f, 10);
    TruncSeries dg = series_dlog(B, g, 10);
    TruncSeries dfg = series_dlog(B, fg, 10);
    CHECK(dfg == df + dg);
    // t dlog(1 - ct) has n-th coefficient -c^n
    for (int n = 1; n <= 10; ++n)
        CHECK(B.eq(df.coeff(n), rf_scale_int(rf_pow(two, n), -1)));
}

TEST_CASE("formatting keeps numerator and denominator readable") {
    auto f3 = build_tower(3, 1, 1);
    RatF T = rf_T(f3.get());
    CHECK(format_ratf(rf_inv(T * T)) == "(1)/(T^2)");
    CHECK(format_ratf(T) == "T");
    CHECK(format_ratf(rf_zero(f3.get())) == "0");
}

}  // TEST_SUITE
