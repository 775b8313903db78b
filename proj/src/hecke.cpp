/* Copyright (C) 2026 The dmtrace authors.
 * This program is licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#include "dmtrace/hecke.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <utility>

#include "dmtrace/errors.hpp"

namespace dmt {

namespace {

void validate_query(const HeckeQuery& qu) {
    if (!qu.base) throw UserError("null base tower");
    if (qu.base->m != 1)
        throw UserError("the base tower must be the (p, e, 1) tower for F_q");
    if (qu.P.tower() != qu.base.get())
        throw UserError("P must be a polynomial over the base field");
    if (qu.P.degree() < 1 || !qu.P.is_monic() || !poly_is_irreducible(qu.P))
        throw UserError("P must be monic irreducible of positive degree");
    if (qu.n < 1) throw UserError("the power n must be at least 1");
    if (qu.k < 2) throw UserError("the weight k must be at least 2");
}

/// Classes sharing a Frobenius characteristic polynomial contribute the same
/// row term, so the trace sums run over (a, b) with a multiplicity.
struct AggClass {
    Poly a, b;
    std::int64_t count = 0;
};

struct ClassContext {
    TowerPtr tower;  // F_{q^{nd}}
    FFElem theta;    // canonical root of P
    ClassList classes;
    std::vector<AggClass> agg;
};

ClassContext make_context(TowerPtr tower, const FFElem& theta,
                          ClassList classes) {
    ClassContext ctx{std::move(tower), theta, std::move(classes), {}};
    std::map<std::string, size_t> index;
    for (const ClassEntry& e : ctx.classes.entries) {
        std::string key = format_poly(e.cp.a) + "|" + format_poly(e.cp.b);
        auto [it, fresh] = index.emplace(key, ctx.agg.size());
        if (fresh) ctx.agg.push_back(AggClass{e.cp.a, e.cp.b, 0});
        ++ctx.agg[it->second].count;
    }
    return ctx;
}

ClassContext enumerate_for(const HeckeQuery& qu, std::uint64_t budget) {
    int d = qu.P.degree();
    std::uint32_t m = std::uint32_t(qu.n * d);
    TowerPtr tower = build_tower(qu.base->p, qu.base->e, m, budget);
    FFElem theta = canonical_theta(qu.P, tower);
    ClassList classes = enumerate_classes(tower, theta, budget);
    return make_context(std::move(tower), theta, std::move(classes));
}

void check_denominator_is_prime_power(const KElem& v, const Poly& P) {
    Poly den = v.den();
    while (den.degree() > 0) {
        auto [quot, rem] = poly_divmod(den, P);
        if (!rem.is_zero())
            throw TheoryViolation("trace denominator is not a power of P");
        den = quot;
    }
}

/// The integer v as an element of F_q.
FFElem ff_from_int(const FieldTower* base, std::int64_t v) {
    std::int64_t p = std::int64_t(base->p);
    std::int64_t r = ((v % p) + p) % p;
    FFElem acc = ff_zero(base), one = ff_one(base);
    while (r--) acc = acc + one;
    return acc;
}

HeckeTraceReport finish_report(const HeckeQuery& qu, const ClassContext& ctx,
                               bool cross_check) {
    const FieldTower* base = qu.base.get();
    int d = qu.P.degree();
    std::int64_t epow = qu.l - qu.k + 1;
    KElem total = rf_zero(base);
    if (cross_check) {
        for (const ClassEntry& e : ctx.classes.entries) {
            Poly s = symmetric_trace(e.cp.a, e.cp.b, qu.k - 2);
            KElem term = RatF(s) * rf_pow(RatF(e.cp.b), epow);
            DrinfeldModule dm = make_drinfeld(ctx.tower, ctx.theta, e.g, e.delta);
            if (sym_det_trace(dm, qu.k, qu.l) != term)
                throw TheoryViolation(
                    "class term disagrees between the recurrence and the "
                    "semilinear trace");
            total = total + term;
        }
    } else {
        // Every b is a unit multiple of the same monic power of P, so the sum
        // has the common denominator Q^{k-l-1}: accumulate the polynomial
        // numerator and build a single rational at the end.
        Poly Q = poly_pow(qu.P, std::uint32_t(qu.n));
        Poly num = poly_zero(base);
        for (const AggClass& cl : ctx.agg) {
            Poly s = symmetric_trace(cl.a, cl.b, qu.k - 2);
            FFElem w = ff_pow(cl.b.leading(), epow) * ff_from_int(base, cl.count);
            num = num + poly_scale(w, s);
        }
        total = RatF(num) * rf_pow(RatF(Q), epow);
    }
    check_denominator_is_prime_power(total, qu.P);

    HeckeTraceReport rep;
    rep.query = qu;
    rep.trace_adelic = total;
    rep.trace_normalized =
        rf_pow(RatF(qu.P), std::int64_t(qu.n) * (qu.k - qu.l)) * total;
    rep.exponent_adelic = infty_size_exponent(rep.trace_adelic);
    rep.exponent_normalized = infty_size_exponent(rep.trace_normalized);
    std::int64_t nd = std::int64_t(qu.n) * d;
    rep.bound2_adelic = nd * (2 * std::int64_t(qu.l) - qu.k);
    rep.bound2_normalized = nd * qu.k;
    rep.ramanujan_adelic_ok = ramanujan_check(rep.exponent_adelic, rep.bound2_adelic);
    rep.ramanujan_normalized_ok =
        ramanujan_check(rep.exponent_normalized, rep.bound2_normalized);
    rep.class_count = int(ctx.classes.entries.size());
    return rep;
}

/// Inverse of a nonzero integer inside F_q(T), used for the 1/#Aut weights.
KElem int_inverse_in_k(const FieldTower* base, int value) {
    fp_t p = base->p;
    fp_t v = fp_t(((value % std::int64_t(p)) + std::int64_t(p)) % std::int64_t(p));
    if (v == 0) throw MathError("integer weight divisible by p");
    fp_t inv = 1;
    while ((inv * v) % p != 1) ++inv;
    return rf_scale_int(rf_one(base), std::int64_t(inv));
}

bool poly_lex_less(const Poly& a, const Poly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (int i = 0; i <= a.degree(); ++i) {
        std::uint64_t ia = elem_index(a.coeff(i));
        std::uint64_t ib = elem_index(b.coeff(i));
        if (ia != ib) return ia < ib;
    }
    return false;
}

}  // namespace

Poly symmetric_trace(const Poly& a, const Poly& b, int m) {
    if (a.tower() != b.tower()) throw TowerMismatch();
    if (m < 0) throw UserError("negative power-sum index");
    const FieldTower* tw = a.tower();
    Poly prev = poly_one(tw);
    if (m == 0) return prev;
    Poly cur = a;
    for (int j = 2; j <= m; ++j) {
        Poly next = a * cur - b * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

bool ramanujan_check(const std::optional<int>& exponent, std::int64_t bound2) {
    if (!exponent) return true;
    return 2 * std::int64_t(*exponent) <= bound2;
}

HeckeTraceReport hecke_trace(const HeckeQuery& qu, bool cross_check,
                             std::uint64_t budget) {
    validate_query(qu);
    ClassContext ctx = enumerate_for(qu, budget);
    return finish_report(qu, ctx, cross_check);
}

KElem crystal_side_trace(const HeckeQuery& qu, std::uint64_t budget) {
    validate_query(qu);
    ClassContext ctx = enumerate_for(qu, budget);
    const FieldTower* base = qu.base.get();
    int nd = qu.n * qu.P.degree();
    KElem acc = rf_zero(base);
    for (const ClassEntry& e : ctx.classes.entries) {
        DrinfeldModule dm = make_drinfeld(ctx.tower, ctx.theta, e.g, e.delta);
        KElem tr = trace_tau_n(fiber_crystal(dm, qu.k, qu.l), nd);
        acc = acc + int_inverse_in_k(base, e.aut) * tr;
    }
    return rf_scale_int(acc, -1);
}

std::vector<HeckeTraceReport> trace_table(const TowerPtr& base,
                                          const HeckeRanges& ranges,
                                          bool cross_check,
                                          std::uint64_t budget) {
    std::vector<Poly> Ps = ranges.P;
    std::vector<int> ns = ranges.n, ks = ranges.k, ls = ranges.l;
    std::sort(Ps.begin(), Ps.end(), poly_lex_less);
    Ps.erase(std::unique(Ps.begin(), Ps.end()), Ps.end());
    for (auto* v : {&ns, &ks, &ls}) {
        std::sort(v->begin(), v->end());
        v->erase(std::unique(v->begin(), v->end()), v->end());
    }

    std::map<std::pair<int, std::string>, ClassContext> cache;
    std::vector<HeckeTraceReport> out;
    for (const Poly& P : Ps)
        for (int n : ns) {
            for (int k : ks)
                for (int l : ls) {
                    HeckeQuery qu{base, P, n, k, l};
                    validate_query(qu);
                    auto key = std::make_pair(n * P.degree(), format_poly(P));
                    auto it = cache.find(key);
                    if (it == cache.end())
                        it = cache.emplace(key, enumerate_for(qu, budget)).first;
                    out.push_back(finish_report(qu, it->second, cross_check));
                }
        }
    return out;
}

std::vector<HeckeTraceReport> hecke_rows_with_classes(
    const TowerPtr& base, const Poly& P, int n, const std::vector<int>& ks,
    const std::vector<int>& ls, const ClassList& classes, bool cross_check) {
    if (ks.empty() || ls.empty()) return {};
    HeckeQuery probe{base, P, n, ks.front(), ls.front()};
    validate_query(probe);
    std::uint32_t m = std::uint32_t(n * P.degree());
    const FieldTower* kt = classes.tower.get();
    if (!kt || kt->p != base->p || kt->e != base->e || kt->m != m)
        throw UserError("class list does not live on the tower of the query");
    if (!(min_poly_over_fq(classes.theta) == P))
        throw UserError("theta of the class list is not a root of P");
    // Guard against truncated or hand-edited data: the mass formula must
    // come out exact before the entries are trusted.
    std::int64_t num = 0, den = 1;
    for (const ClassEntry& e : classes.entries) {
        if (e.aut <= 0 || e.cp.m != int(m) || e.cp.a.tower() != base.get() ||
            e.cp.b.tower() != base.get())
            throw UserError("malformed class entry");
        num = num * e.aut + den;
        den *= e.aut;
        std::int64_t g = std::gcd(num, den);
        num /= g;
        den /= g;
    }
    if (den != 1 || num != std::int64_t(kt->size))
        throw UserError("class list fails the mass formula check");

    ClassContext ctx = make_context(classes.tower, classes.theta, classes);
    std::vector<HeckeTraceReport> out;
    for (int k : ks)
        for (int l : ls) {
            HeckeQuery qu{base, P, n, k, l};
            validate_query(qu);
            out.push_back(finish_report(qu, ctx, cross_check));
        }
    return out;
}

}  // namespace dmt
