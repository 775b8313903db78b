/* Copyright (C) 2026 The dmtrace authors.
 * This program is licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#include "dmtrace/drinfeld.hpp"

#include <algorithm>
#include <cstdint>
#include <exception>
#include <numeric>
#include <utility>

#include "dmtrace/errors.hpp"
#include "dmtrace/funcfield.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dmt {

namespace {

TowerPtr fq_ptr(const TowerPtr& tower) {
    return tower->fq_tower ? tower->fq_tower : tower;
}

CoeffRing ext_rational_ring(const TowerPtr& tower) {
    return CoeffRing::rational_field(fq_ptr(tower)).extended_to(tower);
}

}  // namespace

DrinfeldModule make_drinfeld(TowerPtr tower, const FFElem& theta,
                             const FFElem& g, const FFElem& delta) {
    if (!tower) throw UserError("null field tower");
    const FieldTower* kt = tower.get();
    if (theta.tower() != kt || g.tower() != kt || delta.tower() != kt)
        throw TowerMismatch();
    if (delta.is_zero())
        throw UserError("delta must be nonzero (rank-2 condition)");
    Poly P = min_poly_over_fq(theta);
    int d = P.degree();
    if (int(kt->m) % d != 0)
        throw UserError("degree of the characteristic does not divide m");
    return DrinfeldModule{std::move(tower), theta, g, delta, std::move(P)};
}

SkewPoly phi_of(const DrinfeldModule& dm, const Poly& a) {
    const FieldTower* kt = dm.tower.get();
    if (a.tower() != kt->fq())
        throw UserError("phi_of expects a polynomial over F_q");
    SkewPoly phiT(kt, {dm.theta, dm.g, dm.delta});
    SkewPoly acc = skew_zero(kt);
    for (int i = a.degree(); i >= 0; --i)
        acc = acc * phiT + skew_const(embed_from_fq(kt, a.coeff(i)));
    return acc;
}

RingMatrix motive_matrix(const DrinfeldModule& dm) {
    const FieldTower* kt = dm.tower.get();
    CoeffRing R = ext_rational_ring(dm.tower);
    FFElem dinv = ff_inv(dm.delta);
    Poly TmTheta(kt, {-dm.theta, ff_one(kt)});
    RatF m01{poly_scale(dinv, TmTheta)};
    RatF m11{poly_const(-(dm.g * dinv))};
    return RingMatrix(R, 2, 2,
                      {R.zero(), m01, RatF(poly_one(kt)), m11});
}

CharPoly frobenius_charpoly(const DrinfeldModule& dm) {
    const FieldTower* kt = dm.tower.get();
    const FieldTower* fq = kt->fq();
    int m = int(kt->m);
    int d = dm.charP.degree();
    CharPoly cp;
    cp.m = m;

    // The norm is available in closed form: the twisted determinant
    // telescopes to (-1)^m N(delta)^{-1} P^{m/d}, N the field norm to F_q.
    FFElem mu = ff_inv(norm_to_fq(dm.delta));
    if (m % 2 != 0) mu = -mu;
    cp.b = poly_scale(mu, poly_pow(dm.charP, std::uint32_t(m / d)));

    // The trace is then forced by the quadratic identity
    // tau^{2m} - phi_a tau^m + phi_b = 0 in k{tau}: tau^{2m} + phi_b must be
    // a left multiple of tau^m, and expanding the cofactor in powers of
    // phi_T recovers a. Every step of the recovery checks the conclusion it
    // relies on, so a successful return has verified the identity.
    std::vector<SkewPoly> pw;  // phi_T^i, i = 0..m
    pw.reserve(size_t(m) + 1);
    pw.push_back(skew_one(kt));
    SkewPoly phiT(kt, {dm.theta, dm.g, dm.delta});
    for (int i = 1; i <= m; ++i) pw.push_back(pw.back() * phiT);

    SkewPoly G = skew_pow(skew_tau(kt), std::uint32_t(2 * m));
    for (int i = 0; i <= cp.b.degree(); ++i)
        G = G + skew_const(embed_from_fq(kt, cp.b.coeff(i))) * pw[size_t(i)];

    const std::vector<FFElem>& gc = G.coeffs();
    for (int j = 0; j < m && j < int(gc.size()); ++j)
        if (!gc[size_t(j)].is_zero())
            throw TheoryViolation("frobenius charpoly fails the skew identity");
    // G can degenerate all the way to zero (trace zero classes).
    SkewPoly H = int(gc.size()) > m
                     ? SkewPoly(kt, std::vector<FFElem>(gc.begin() + m, gc.end()))
                     : skew_zero(kt);

    std::vector<FFElem> ac(size_t(m / 2) + 1, ff_zero(fq));
    while (!H.is_zero()) {
        int D = H.degree();
        if (D > m || D % 2 != 0)
            throw TheoryViolation("frobenius trace exceeds the Weil degree bound");
        int i = D / 2;
        FFElem c =
            H.coeffs()[size_t(D)] * ff_inv(pw[size_t(i)].coeffs()[size_t(D)]);
        std::optional<FFElem> cq = to_fq(c);
        if (!cq)
            throw TheoryViolation("frobenius charpoly does not descend to F_q[T]");
        ac[size_t(i)] = *cq;
        H = H - skew_const(c) * pw[size_t(i)];
        if (!H.is_zero() && H.degree() >= D)
            throw TheoryViolation("frobenius charpoly fails the skew identity");
    }
    cp.a = Poly(fq, std::move(ac));
    return cp;
}

bool verify_charpoly(const DrinfeldModule& dm, const CharPoly& cp) {
    const FieldTower* kt = dm.tower.get();
    std::uint32_t m = std::uint32_t(cp.m);
    SkewPoly tau = skew_tau(kt);
    SkewPoly lhs = skew_pow(tau, 2 * m) - phi_of(dm, cp.a) * skew_pow(tau, m) +
                   phi_of(dm, cp.b);
    return lhs.is_zero();
}

int aut_order(const DrinfeldModule& dm) {
    const FieldTower* kt = dm.tower.get();
    std::int64_t q = std::int64_t(kt->q);
    int count = 0;
    for (std::uint64_t i = 0; i < kt->size; ++i) {
        FFElem c = elem_from_index(kt, i);
        if (c.is_zero()) continue;
        if (ff_pow(c, q - 1) * dm.g == dm.g &&
            ff_pow(c, q * q - 1) * dm.delta == dm.delta)
            ++count;
    }
    return count;
}

namespace {

struct Orbit {
    FFElem g;
    FFElem delta;
    int aut;
};

/// Lex-ordered orbit representatives of the twisted scaling action together
/// with their stabilizer sizes; asserts the mass formula on the way out.
std::vector<Orbit> discover_orbits(const TowerPtr& tower, const FFElem& theta,
                                   std::uint64_t budget) {
    const FieldTower* kt = tower.get();
    if (theta.tower() != kt) throw TowerMismatch();
    {
        int d = min_poly_over_fq(theta).degree();
        if (int(kt->m) % d != 0)
            throw UserError("degree of the characteristic does not divide m");
    }
    std::uint64_t size = kt->size;
    if (size > budget)
        throw BudgetError("class enumeration exceeds the configured budget");

    std::uint64_t q = kt->q;
    std::uint64_t units = size - 1;
    // The scaling action only moves unit-group exponents, so the scan runs on
    // discrete logs: exp_idx[e] is the element index of gen^e.
    std::vector<std::uint64_t> exp_idx(units), dlog(size, 0);
    {
        FFElem gen = unit_group_generator(kt);
        FFElem acc = ff_one(kt);
        for (std::uint64_t e = 0; e < units; ++e) {
            exp_idx[e] = elem_index(acc);
            dlog[exp_idx[e]] = e;
            acc = acc * gen;
        }
        if (!(acc == ff_one(kt)))
            throw TheoryViolation("unit group generator has wrong order");
    }
    std::uint64_t r1 = (q - 1) % units;
    std::uint64_t r2 = (q * q - 1) % units;

    std::vector<bool> seen(size * size, false);
    std::vector<Orbit> orbits;
    std::uint64_t orbit_total = 0;
    // Exact rational accumulator for the mass sum(1/aut).
    std::int64_t mass_num = 0, mass_den = 1;
    for (std::uint64_t gi = 0; gi < size; ++gi) {
        std::uint64_t eg = gi == 0 ? 0 : dlog[gi];
        for (std::uint64_t di = 1; di < size; ++di) {
            if (seen[gi * size + di]) continue;
            int stab = 0;
            std::uint64_t orbit_size = 0;
            std::uint64_t ed = dlog[di];
            for (std::uint64_t u = 0; u < units; ++u) {
                std::uint64_t ogi = gi == 0 ? 0 : exp_idx[(eg + r1 * u) % units];
                std::uint64_t odi = exp_idx[(ed + r2 * u) % units];
                if (ogi == gi && odi == di) ++stab;
                std::uint64_t idx = ogi * size + odi;
                if (!seen[idx]) {
                    seen[idx] = true;
                    ++orbit_size;
                }
            }
            if (std::uint64_t(stab) * orbit_size != units)
                throw TheoryViolation("orbit size times stabilizer mismatch");
            orbit_total += orbit_size;
            mass_num = mass_num * stab + mass_den;
            mass_den *= stab;
            std::int64_t gcd = std::gcd(mass_num, mass_den);
            mass_num /= gcd;
            mass_den /= gcd;
            orbits.push_back(
                Orbit{elem_from_index(kt, gi), elem_from_index(kt, di), stab});
        }
    }
    if (orbit_total != size * (size - 1))
        throw TheoryViolation("orbits do not partition the parameter space");
    if (mass_den != 1 || mass_num != std::int64_t(size))
        throw TheoryViolation("mass formula sum(1/#Aut) = q^m fails");
    return orbits;
}

ClassList assemble_classes(const TowerPtr& tower, const FFElem& theta,
                           std::uint64_t budget, bool parallel) {
    (void)parallel;
    std::vector<Orbit> orbits = discover_orbits(tower, theta, budget);
    ClassList out;
    out.tower = tower;
    out.theta = theta;
    out.entries.resize(orbits.size());
    Poly P = min_poly_over_fq(theta);
    std::exception_ptr err = nullptr;
    std::int64_t n = std::int64_t(orbits.size());
    // The charpoly work per class is independent; exceptions are collected
    // and rethrown after the loop so OpenMP regions stay exception-free.
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            const Orbit& o = orbits[size_t(i)];
            // Validity was established once for the whole family (delta is a
            // unit by construction, deg P | m was checked during discovery),
            // so the module is assembled directly instead of re-deriving the
            // minimal polynomial per class.
            DrinfeldModule dm{tower, theta, o.g, o.delta, P};
            ClassEntry e;
            e.g = o.g;
            e.delta = o.delta;
            e.aut = o.aut;
            e.cp = frobenius_charpoly(dm);
            e.supersingular = poly_rem(e.cp.a, P).is_zero();
            out.entries[size_t(i)] = std::move(e);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return out;
}

}  // namespace

ClassList enumerate_classes(TowerPtr tower, const FFElem& theta,
                            std::uint64_t budget) {
    return assemble_classes(tower, theta, budget, true);
}

ClassList enumerate_classes_serial(TowerPtr tower, const FFElem& theta,
                                   std::uint64_t budget) {
    return assemble_classes(tower, theta, budget, false);
}

FFElem canonical_theta(const Poly& P, const TowerPtr& tower) {
    if (!poly_is_irreducible(P))
        throw UserError("characteristic polynomial must be irreducible");
    std::vector<FFElem> roots = roots_in_tower(P, tower.get());
    if (roots.empty())
        throw UserError("characteristic polynomial has no root in the field");
    return roots.front();
}

TauModule fiber_crystal(const DrinfeldModule& dm, int k, int l) {
    if (k < 2) throw UserError("weight must be at least 2");
    CoeffRing B = CoeffRing::rational_field(fq_ptr(dm.tower));
    CoeffRing R = B.extended_to(dm.tower);
    RingMatrix M = motive_matrix(dm);
    int n = k - 2;

    // Pascal triangle mod p for the multinomial expansion below.
    fp_t p = dm.tower->p;
    std::vector<std::vector<std::int64_t>> binom(size_t(n) + 1);
    for (int i = 0; i <= n; ++i) {
        binom[size_t(i)].assign(size_t(i) + 1, 1);
        for (int j = 1; j < i; ++j)
            binom[size_t(i)][size_t(j)] =
                (binom[size_t(i) - 1][size_t(j) - 1] +
                 binom[size_t(i) - 1][size_t(j)]) % std::int64_t(p);
    }

    RatF A = M.at(0, 0), Bc = M.at(0, 1), C = M.at(1, 0), D = M.at(1, 1);
    std::vector<RatF> Ap(size_t(n) + 1), Bp(size_t(n) + 1), Cp(size_t(n) + 1),
        Dp(size_t(n) + 1);
    Ap[0] = Bp[0] = Cp[0] = Dp[0] = R.one();
    for (int i = 1; i <= n; ++i) {
        Ap[size_t(i)] = R.mul(Ap[size_t(i) - 1], A);
        Bp[size_t(i)] = R.mul(Bp[size_t(i) - 1], Bc);
        Cp[size_t(i)] = R.mul(Cp[size_t(i) - 1], C);
        Dp[size_t(i)] = R.mul(Dp[size_t(i) - 1], D);
    }

    // Basis v_s = e1^{n-s} e2^s. The image of v_s expands the commuting
    // product (A e1 + C e2)^{n-s} (B e1 + D e2)^s; the coefficient of
    // v_t = e1^{n-t} e2^t collects the terms with u + v = n - t.
    RingMatrix S(R, n + 1, n + 1);
    for (int s = 0; s <= n; ++s) {
        int i = n - s;
        for (int t = 0; t <= n; ++t) {
            int w = n - t;
            RatF acc = R.zero();
            for (int u = std::max(0, w - s); u <= std::min(i, w); ++u) {
                int v = w - u;
                std::int64_t bin =
                    binom[size_t(i)][size_t(u)] * binom[size_t(s)][size_t(v)];
                RatF term = R.mul(R.mul(Ap[size_t(u)], Cp[size_t(i - u)]),
                                  R.mul(Bp[size_t(v)], Dp[size_t(s - v)]));
                acc = R.add(acc, rf_scale_int(term, bin));
            }
            S.set(t, s, acc);
        }
    }

    RatF det_power = rf_pow(ring_det(M), l - k + 1);
    return TauModule::make(dm.tower, B, S.scale(det_power));
}

KElem sym_det_trace(const DrinfeldModule& dm, int k, int l) {
    return trace_tau_n(fiber_crystal(dm, k, l), int(dm.tower->m));
}

}  // namespace dmt
