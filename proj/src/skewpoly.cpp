/* Copyright (C) 2026 The dmtrace authors.
 * This program is licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#include "dmtrace/skewpoly.hpp"

#include <algorithm>

namespace dmt {

SkewPoly::SkewPoly(const FieldTower* tw, std::vector<FFElem> coeffs)
    : tw_(tw), c_(std::move(coeffs)) {
    for (const FFElem& x : c_)
        if (x.tower() != tw_) throw TowerMismatch();
    normalize();
}

void SkewPoly::normalize() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

FFElem SkewPoly::coeff(int i) const {
    if (i < 0 || i >= int(c_.size())) return ff_zero(tw_);
    return c_[size_t(i)];
}

SkewPoly SkewPoly::operator+(const SkewPoly& o) const {
    if (tw_ != o.tw_) throw TowerMismatch();
    std::vector<FFElem> r(std::max(c_.size(), o.c_.size()), ff_zero(tw_));
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < c_.size()) r[i] = r[i] + c_[i];
        if (i < o.c_.size()) r[i] = r[i] + o.c_[i];
    }
    return SkewPoly(tw_, std::move(r));
}

SkewPoly SkewPoly::operator-(const SkewPoly& o) const { return *this + (-o); }

SkewPoly SkewPoly::operator-() const {
    std::vector<FFElem> r(c_);
    for (FFElem& x : r) x = -x;
    return SkewPoly(tw_, std::move(r));
}

SkewPoly SkewPoly::operator*(const SkewPoly& o) const {
    if (tw_ != o.tw_) throw TowerMismatch();
    if (c_.empty() || o.c_.empty()) return SkewPoly(tw_);
    // tau^i c = sigma^i(c) tau^i
    std::vector<FFElem> r(c_.size() + o.c_.size() - 1, ff_zero(tw_));
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        for (size_t j = 0; j < o.c_.size(); ++j)
            r[i + j] = r[i + j] + c_[i] * frobenius_pow(o.c_[j], std::int64_t(i));
    }
    return SkewPoly(tw_, std::move(r));
}

SkewPoly skew_zero(const FieldTower* tw) { return SkewPoly(tw); }
SkewPoly skew_one(const FieldTower* tw) { return SkewPoly(tw, {ff_one(tw)}); }
SkewPoly skew_tau(const FieldTower* tw) {
    return SkewPoly(tw, {ff_zero(tw), ff_one(tw)});
}
SkewPoly skew_const(const FFElem& a) { return SkewPoly(a.tower(), {a}); }

SkewPoly skew_pow(const SkewPoly& a, std::uint32_t n) {
    SkewPoly r = skew_one(a.tower());
    SkewPoly base = a;
    while (n) {
        if (n & 1) r = r * base;
        base = base * base;
        n >>= 1;
    }
    return r;
}

std::pair<SkewPoly, SkewPoly> right_divmod(const SkewPoly& a, const SkewPoly& b) {
    if (a.tower() != b.tower()) throw TowerMismatch();
    if (b.is_zero()) throw MathError("skew division by zero");
    const FieldTower* tw = a.tower();
    int db = b.degree();
    std::vector<FFElem> rem(a.coeffs());
    if (int(rem.size()) - 1 < db) return {SkewPoly(tw), a};
    std::vector<FFElem> quo(rem.size() - size_t(db), ff_zero(tw));
    FFElem blc = b.coeff(db);
    for (int i = int(rem.size()) - 1; i >= db; --i) {
        if (rem[size_t(i)].is_zero()) continue;
        int shift = i - db;
        // (c tau^shift)(blc tau^db) has top coefficient c * sigma^shift(blc)
        FFElem c = rem[size_t(i)] * ff_inv(frobenius_pow(blc, shift));
        quo[size_t(shift)] = quo[size_t(shift)] + c;
        for (int j = 0; j <= db; ++j)
            rem[size_t(shift + j)] =
                rem[size_t(shift + j)] - c * frobenius_pow(b.coeff(j), shift);
    }
    return {SkewPoly(tw, std::move(quo)), SkewPoly(tw, std::move(rem))};
}

FFElem skew_apply(const SkewPoly& f, const FFElem& v) {
    if (f.tower() != v.tower()) throw TowerMismatch();
    FFElem acc = ff_zero(f.tower());
    FFElem vq = v;
    for (int i = 0; i <= f.degree(); ++i) {
        acc = acc + f.coeff(i) * vq;
        vq = frobenius_q(vq);
    }
    return acc;
}

}  // namespace dmt
