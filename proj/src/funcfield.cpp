/* Copyright (C) 2026 The dmtrace authors.
 * This program is licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#include "dmtrace/funcfield.hpp"

#include <sstream>

namespace dmt {

RatF::RatF(const Poly& num) : num_(num), den_(poly_one(num.tower())) {}

RatF::RatF(const Poly& num, const Poly& den) : num_(num), den_(den) {
    if (num.tower() != den.tower()) throw TowerMismatch();
    if (den_.is_zero()) throw MathError("zero denominator");
    reduce();
}

void RatF::reduce() {
    if (num_.is_zero()) {
        den_ = poly_one(den_.tower());
        return;
    }
    Poly g = poly_gcd(num_, den_);
    if (g.degree() > 0) {
        num_ = poly_div_exact(num_, g);
        den_ = poly_div_exact(den_, g);
    }
    if (!den_.is_monic()) {
        FFElem s = ff_inv(den_.leading());
        num_ = poly_scale(s, num_);
        den_ = poly_scale(s, den_);
    }
}

RatF RatF::operator+(const RatF& o) const {
    return RatF(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatF RatF::operator-(const RatF& o) const {
    return RatF(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RatF RatF::operator-() const {
    RatF r = *this;
    r.num_ = -r.num_;
    return r;
}

RatF RatF::operator*(const RatF& o) const {
    return RatF(num_ * o.num_, den_ * o.den_);
}

RatF RatF::operator/(const RatF& o) const {
    if (o.is_zero()) throw MathError("division by zero rational function");
    return RatF(num_ * o.den_, den_ * o.num_);
}

RatF rf_zero(const FieldTower* tw) { return RatF(poly_zero(tw)); }
RatF rf_one(const FieldTower* tw) { return RatF(poly_one(tw)); }
RatF rf_T(const FieldTower* tw) { return RatF(poly_T(tw)); }

RatF rf_inv(const RatF& a) {
    if (a.is_zero()) throw MathError("inverse of zero rational function");
    return RatF(a.den(), a.num());
}

RatF rf_pow(const RatF& a, std::int64_t n) {
    RatF base = n < 0 ? rf_inv(a) : a;
    std::uint64_t nn = std::uint64_t(n < 0 ? -n : n);
    RatF r = rf_one(a.tower());
    while (nn) {
        if (nn & 1) r = r * base;
        base = base * base;
        nn >>= 1;
    }
    return r;
}

RatF rf_scale_int(const RatF& a, std::int64_t n) {
    const FieldTower* tw = a.tower();
    std::int64_t v = n % std::int64_t(tw->p);
    if (v < 0) v += tw->p;
    FFElem s = ff_mul_scalar(ff_one(tw), fp_t(v));
    return RatF(poly_scale(s, a.num()), a.den());
}

std::optional<int> infty_size_exponent(const RatF& a) {
    if (a.is_zero()) return std::nullopt;
    return a.num().degree() - a.den().degree();
}

// ---------------------------------------------------------------------------
// CoeffRing

CoeffRing CoeffRing::base_field(TowerPtr tower) {
    CoeffRing r;
    r.kind_ = RingKind::BaseField;
    r.tower_ = std::move(tower);
    return r;
}

CoeffRing CoeffRing::quotient(TowerPtr tower, const Poly& modulus) {
    if (modulus.tower() != tower.get()) throw TowerMismatch();
    if (modulus.degree() < 1 || !modulus.is_monic())
        throw UserError("quotient modulus must be monic of positive degree");
    CoeffRing r;
    r.kind_ = RingKind::Quotient;
    r.tower_ = std::move(tower);
    r.modulus_ = modulus;
    return r;
}

CoeffRing CoeffRing::rational_field(TowerPtr tower) {
    CoeffRing r;
    r.kind_ = RingKind::RationalField;
    r.tower_ = std::move(tower);
    return r;
}

CoeffRing CoeffRing::extended_to(TowerPtr target) const {
    switch (kind_) {
        case RingKind::BaseField:
            return base_field(target);
        case RingKind::Quotient:
            return quotient(target, embed_poly(modulus_, target.get()));
        case RingKind::RationalField:
            return rational_field(target);
    }
    throw Error("unreachable");
}

CoeffRing CoeffRing::base_ring() const {
    TowerPtr fq = build_tower(tower_->p, tower_->e, 1);
    switch (kind_) {
        case RingKind::BaseField:
            return base_field(fq);
        case RingKind::Quotient:
            return quotient(fq, poly_to_fq(modulus_));
        case RingKind::RationalField:
            return rational_field(fq);
    }
    throw Error("unreachable");
}

int CoeffRing::length_over_fq() const {
    switch (kind_) {
        case RingKind::BaseField:
            return 1;
        case RingKind::Quotient:
            return modulus_.degree();
        case RingKind::RationalField:
            throw UserError("rational function field has no finite length");
    }
    throw Error("unreachable");
}

RatF CoeffRing::zero() const { return rf_zero(tower_.get()); }
RatF CoeffRing::one() const { return rf_one(tower_.get()); }

RatF CoeffRing::reduce(const RatF& a) const {
    if (a.tower() != tower_.get()) throw TowerMismatch();
    switch (kind_) {
        case RingKind::BaseField:
            if (!a.is_poly() || a.num().degree() > 0)
                throw UserError("element outside the constant field");
            return a;
        case RingKind::Quotient: {
            if (!a.is_poly())
                throw UserError("quotient ring elements must be polynomial");
            return RatF(poly_rem(a.num(), modulus_));
        }
        case RingKind::RationalField:
            return a;
    }
    throw Error("unreachable");
}

RatF CoeffRing::add(const RatF& a, const RatF& b) const { return reduce(a + b); }
RatF CoeffRing::sub(const RatF& a, const RatF& b) const { return reduce(a - b); }
RatF CoeffRing::neg(const RatF& a) const { return reduce(-a); }
RatF CoeffRing::mul(const RatF& a, const RatF& b) const { return reduce(a * b); }

bool CoeffRing::is_unit(const RatF& a) const {
    switch (kind_) {
        case RingKind::BaseField:
        case RingKind::RationalField:
            return !a.is_zero();
        case RingKind::Quotient: {
            Poly g = poly_gcd(poly_rem(a.num(), modulus_), modulus_);
            return g.degree() == 0;
        }
    }
    throw Error("unreachable");
}

RatF CoeffRing::inv(const RatF& a) const {
    switch (kind_) {
        case RingKind::BaseField:
        case RingKind::RationalField:
            return rf_inv(a);
        case RingKind::Quotient: {
            // extended Euclid: u*num = g mod modulus
            Poly r0 = modulus_, r1 = poly_rem(a.num(), modulus_);
            Poly u0 = poly_zero(tower_.get()), u1 = poly_one(tower_.get());
            while (!r1.is_zero()) {
                auto [q, r2] = poly_divmod(r0, r1);
                Poly u2 = u0 - q * u1;
                r0 = std::move(r1); r1 = std::move(r2);
                u0 = std::move(u1); u1 = std::move(u2);
            }
            if (r0.degree() != 0) throw MathError("non-unit in quotient ring");
            return RatF(poly_rem(poly_scale(ff_inv(r0.leading()), u0), modulus_));
        }
    }
    throw Error("unreachable");
}

bool CoeffRing::is_nilpotent(const RatF& a) const {
    switch (kind_) {
        case RingKind::BaseField:
        case RingKind::RationalField:
            return a.is_zero();
        case RingKind::Quotient: {
            // nilpotent iff a^(deg f) = 0 in the quotient
            RatF r = reduce(a);
            RatF acc = one();
            for (int i = 0; i < modulus_.degree(); ++i) acc = mul(acc, r);
            return acc.is_zero();
        }
    }
    throw Error("unreachable");
}

bool CoeffRing::eq(const RatF& a, const RatF& b) const {
    return reduce(a) == reduce(b);
}

RatF CoeffRing::frobenius(const RatF& a, std::int64_t j) const {
    RatF r(poly_frobenius(a.num(), j), poly_frobenius(a.den(), j));
    return reduce(r);
}

bool CoeffRing::is_frobenius_invariant(const RatF& a) const {
    return eq(frobenius(a, 1), a);
}

RatF CoeffRing::map_down(const RatF& a) const {
    RatF r = reduce(a);
    return RatF(poly_to_fq(r.num()), poly_to_fq(r.den()));
}

RatF CoeffRing::embed(const RatF& a) const {
    return RatF(embed_poly(a.num(), tower_.get()), embed_poly(a.den(), tower_.get()));
}

// ---------------------------------------------------------------------------
// TruncSeries

TruncSeries::TruncSeries(const CoeffRing& ring, int order)
    : ring_(ring), order_(order), c_(size_t(order + 1), ring.zero()) {
    if (order < 0) throw UserError("negative series order");
}

TruncSeries::TruncSeries(const CoeffRing& ring, int order, std::vector<RatF> coeffs)
    : TruncSeries(ring, order) {
    for (size_t i = 0; i < coeffs.size() && i <= size_t(order); ++i)
        c_[i] = ring_.reduce(coeffs[i]);
}

const RatF& TruncSeries::coeff(int i) const {
    if (i < 0 || i > order_) throw UserError("series coefficient out of range");
    return c_[size_t(i)];
}

void TruncSeries::set_coeff(int i, const RatF& v) {
    if (i < 0 || i > order_) throw UserError("series coefficient out of range");
    c_[size_t(i)] = ring_.reduce(v);
}

TruncSeries TruncSeries::operator+(const TruncSeries& o) const {
    if (order_ != o.order_) throw UserError("series order mismatch");
    TruncSeries r(ring_, order_);
    for (int i = 0; i <= order_; ++i)
        r.c_[size_t(i)] = ring_.add(c_[size_t(i)], o.c_[size_t(i)]);
    return r;
}

TruncSeries TruncSeries::operator-(const TruncSeries& o) const {
    if (order_ != o.order_) throw UserError("series order mismatch");
    TruncSeries r(ring_, order_);
    for (int i = 0; i <= order_; ++i)
        r.c_[size_t(i)] = ring_.sub(c_[size_t(i)], o.c_[size_t(i)]);
    return r;
}

TruncSeries TruncSeries::operator*(const TruncSeries& o) const {
    if (order_ != o.order_) throw UserError("series order mismatch");
    TruncSeries r(ring_, order_);
    for (int i = 0; i <= order_; ++i) {
        if (c_[size_t(i)].is_zero()) continue;
        for (int j = 0; i + j <= order_; ++j)
            r.c_[size_t(i + j)] = ring_.add(
                r.c_[size_t(i + j)], ring_.mul(c_[size_t(i)], o.c_[size_t(j)]));
    }
    return r;
}

bool TruncSeries::operator==(const TruncSeries& o) const {
    if (order_ != o.order_) return false;
    for (int i = 0; i <= order_; ++i)
        if (!ring_.eq(c_[size_t(i)], o.c_[size_t(i)])) return false;
    return true;
}

TruncSeries series_inverse(const TruncSeries& a) {
    const CoeffRing& ring = a.ring();
    RatF c0inv = ring.inv(a.coeff(0));
    TruncSeries r(ring, a.order());
    r.set_coeff(0, c0inv);
    for (int n = 1; n <= a.order(); ++n) {
        RatF acc = ring.zero();
        for (int i = 1; i <= n; ++i)
            acc = ring.add(acc, ring.mul(a.coeff(i), r.coeff(n - i)));
        r.set_coeff(n, ring.neg(ring.mul(c0inv, acc)));
    }
    return r;
}

TruncSeries series_derivative(const TruncSeries& a) {
    const CoeffRing& ring = a.ring();
    TruncSeries r(ring, a.order());
    for (int i = 1; i <= a.order(); ++i)
        r.set_coeff(i - 1, rf_scale_int(a.coeff(i), i));
    return r;
}

TruncSeries series_dlog(const CoeffRing& ring, const std::vector<RatF>& poly_in_t,
                        int order) {
    return series_dlog_series(TruncSeries(ring, order, poly_in_t));
}

TruncSeries series_dlog_series(const TruncSeries& L) {
    const CoeffRing& ring = L.ring();
    if (!ring.is_unit(L.coeff(0)))
        throw TheoryViolation("dlog of a series with non-unit constant term");
    TruncSeries dL = series_derivative(L);
    TruncSeries shifted(ring, L.order());  // t * L'(t)
    for (int i = 1; i <= L.order(); ++i) shifted.set_coeff(i, dL.coeff(i - 1));
    return shifted * series_inverse(L);
}

bool ring_eq(const CoeffRing& a, const CoeffRing& b) {
    return a.kind() == b.kind() && a.tower() == b.tower() &&
           a.modulus() == b.modulus();
}

std::string format_ratf(const RatF& a) {
    if (a.is_poly()) return format_poly(a.num());
    std::ostringstream os;
    os << "(" << format_poly(a.num()) << ")/(" << format_poly(a.den()) << ")";
    return os.str();
}

}  // namespace dmt
