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
#include "dmtrace/skewpoly.hpp"

using namespace dmt;

TEST_SUITE("skewpoly") {

TEST_CASE("twist relation tau c = c^q tau") {
    auto f9 = build_tower(3, 1, 2);
    SkewPoly tau = skew_tau(f9.get());
    for (std::uint64_t i = 0; i < 9; ++i) {
        FFElem c = elem_from_index(f9.get(), i);
        CHECK(tau * skew_const(c) == skew_const(ff_pow(c, 3)) * tau);
    }
}

TEST_CASE("constants from the base field are central") {
    auto f9 = build_tower(3, 1, 2);
    SkewPoly tau = skew_tau(f9.get());
    FFElem two = embed_from_fq(f9.get(), -ff_one(f9->fq()));
    CHECK(tau * skew_const(two) == skew_const(two) * tau);
}

TEST_CASE("multiplication degree and leading coefficient") {
    auto f9 = build_tower(3, 1, 2);
    FFElem w = ff_gen(f9.get());
    SkewPoly a(f9.get(), {ff_one(f9.get()), w});            // 1 + w tau
    SkewPoly b(f9.get(), {w, ff_zero(f9.get()), ff_one(f9.get())});  // w + tau^2
    SkewPoly ab = a * b;
    // (1 + w tau)(w + tau^2) = w + w^4 tau + tau^2 + w tau^3 and w^4 = 1
    CHECK(ab.degree() == 3);
    CHECK(ab.coeff(3) == w);
    CHECK(ab.coeff(2).is_one());
    CHECK(ab.coeff(1).is_one());
    CHECK(ab.coeff(0) == w);
}

TEST_CASE("worked product over F_9") {
    // (w tau)(w tau) = w w^3 tau^2 = w^4 tau^2 = tau^2 since w has order 4
    auto f9 = build_tower(3, 1, 2);
    FFElem w = ff_gen(f9.get());
    SkewPoly wt(f9.get(), {ff_zero(f9.get()), w});
    SkewPoly sq = wt * wt;
    CHECK(sq.degree() == 2);
    CHECK(sq.coeff(2).is_one());
    CHECK(sq.coeff(0).is_zero());
    CHECK(sq.coeff(1).is_zero());
}

TEST_CASE("skew_pow matches repeated product") {
    auto f9 = build_tower(3, 1, 2);
    FFElem w = ff_gen(f9.get());
    SkewPoly a(f9.get(), {w, ff_one(f9.get())});
    SkewPoly acc = skew_one(f9.get());
    for (std::uint32_t n = 0; n <= 5; ++n) {
        CHECK(skew_pow(a, n) == acc);
        acc = acc * a;
    }
}

TEST_CASE("right division reconstructs") {
    auto f3 = build_tower(3, 1, 1);
    SkewPoly a(f3.get(), {ff_one(f3.get()), ff_zero(f3.get()), ff_one(f3.get())});
    SkewPoly b(f3.get(), {ff_one(f3.get()), ff_one(f3.get())});
    auto [q, r] = right_divmod(a, b);
    CHECK(q * b + r == a);
    CHECK(r.degree() < b.degree());
    CHECK_THROWS_AS(right_divmod(a, skew_zero(f3.get())), MathError);
}

TEST_CASE("division by a unit leaves no remainder") {
    auto f9 = build_tower(3, 1, 2);
    FFElem w = ff_gen(f9.get());
    SkewPoly a(f9.get(), {w, ff_one(f9.get()), w * w});
    auto [q, r] = right_divmod(a, skew_const(w));
    CHECK(r.is_zero());
    CHECK(q * skew_const(w) == a);
}

TEST_CASE("application is the q-linearized evaluation") {
    // (tau^2 + 1) acts on F_9 as x -> x^81 + x = 2x
    auto f9 = build_tower(3, 1, 2);
    SkewPoly a(f9.get(), {ff_one(f9.get()), ff_zero(f9.get()), ff_one(f9.get())});
    for (std::uint64_t i = 0; i < 9; ++i) {
        FFElem x = elem_from_index(f9.get(), i);
        CHECK(skew_apply(a, x) == x + x);
    }
}

TEST_CASE("application is a ring homomorphism to endomorphisms") {
    auto f9 = build_tower(3, 1, 2);
    FFElem w = ff_gen(f9.get());
    SkewPoly a(f9.get(), {w, ff_one(f9.get())});
    SkewPoly b(f9.get(), {ff_one(f9.get()), w, w});
    for (std::uint64_t i = 0; i < 9; ++i) {
        FFElem x = elem_from_index(f9.get(), i);
        CHECK(skew_apply(a * b, x) == skew_apply(a, skew_apply(b, x)));
        CHECK(skew_apply(a + b, x) == skew_apply(a, x) + skew_apply(b, x));
    }
}

TEST_CASE("associativity on fixed triples") {
    auto f9 = build_tower(3, 1, 2);
    FFElem w = ff_gen(f9.get());
    SkewPoly a(f9.get(), {w, ff_one(f9.get())});
    SkewPoly b(f9.get(), {ff_one(f9.get()), w});
    SkewPoly c(f9.get(), {w * w, w, ff_one(f9.get())});
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((b + c) * a == b * a + c * a);
}

TEST_CASE("zero and degree conventions") {
    auto f3 = build_tower(3, 1, 1);
    CHECK(skew_zero(f3.get()).degree() == -1);
    CHECK(skew_zero(f3.get()).is_zero());
    CHECK(skew_one(f3.get()).degree() == 0);
    CHECK(skew_tau(f3.get()).degree() == 1);
    // trailing zeros are normalized away
    SkewPoly a(f3.get(), {ff_one(f3.get()), ff_zero(f3.get())});
    CHECK(a.degree() == 0);
}

}  // TEST_SUITE
