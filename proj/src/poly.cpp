/* Copyright (C) 2026 The dmtrace authors.
 * This program is licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#include "dmtrace/poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace dmt {

Poly::Poly(const FieldTower* tw, std::vector<FFElem> coeffs)
    : tw_(tw), c_(std::move(coeffs)) {
    for (const FFElem& x : c_)
        if (x.tower() != tw_) throw TowerMismatch();
    normalize();
}

void Poly::normalize() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

FFElem Poly::coeff(int i) const {
    if (i < 0 || i >= int(c_.size())) return ff_zero(tw_);
    return c_[size_t(i)];
}

FFElem Poly::leading() const {
    if (c_.empty()) throw MathError("leading coefficient of zero polynomial");
    return c_.back();
}

bool Poly::is_monic() const { return !c_.empty() && c_.back().is_one(); }

Poly Poly::operator+(const Poly& o) const {
    if (tw_ != o.tw_) throw TowerMismatch();
    std::vector<FFElem> r(std::max(c_.size(), o.c_.size()), ff_zero(tw_));
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < c_.size()) r[i] = r[i] + c_[i];
        if (i < o.c_.size()) r[i] = r[i] + o.c_[i];
    }
    return Poly(tw_, std::move(r));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator-() const {
    std::vector<FFElem> r(c_);
    for (FFElem& x : r) x = -x;
    return Poly(tw_, std::move(r));
}

Poly Poly::operator*(const Poly& o) const {
    if (tw_ != o.tw_) throw TowerMismatch();
    if (c_.empty() || o.c_.empty()) return Poly(tw_);
    std::vector<FFElem> r(c_.size() + o.c_.size() - 1, ff_zero(tw_));
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        for (size_t j = 0; j < o.c_.size(); ++j)
            r[i + j] = r[i + j] + c_[i] * o.c_[j];
    }
    return Poly(tw_, std::move(r));
}

Poly poly_zero(const FieldTower* tw) { return Poly(tw); }
Poly poly_one(const FieldTower* tw) { return Poly(tw, {ff_one(tw)}); }
Poly poly_T(const FieldTower* tw) { return Poly(tw, {ff_zero(tw), ff_one(tw)}); }
Poly poly_const(const FFElem& a) { return Poly(a.tower(), {a}); }

Poly poly_scale(const FFElem& s, const Poly& f) {
    std::vector<FFElem> r(f.coeffs());
    for (FFElem& x : r) x = x * s;
    return Poly(f.tower(), std::move(r));
}

std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b) {
    if (a.tower() != b.tower()) throw TowerMismatch();
    if (b.is_zero()) throw MathError("polynomial division by zero");
    const FieldTower* tw = a.tower();
    int db = b.degree();
    FFElem lcinv = ff_inv(b.leading());
    std::vector<FFElem> rem(a.coeffs());
    if (int(rem.size()) - 1 < db) return {Poly(tw), a};
    std::vector<FFElem> quo(rem.size() - size_t(db), ff_zero(tw));
    for (int i = int(rem.size()) - 1; i >= db; --i) {
        FFElem c = rem[size_t(i)] * lcinv;
        if (c.is_zero()) continue;
        quo[size_t(i - db)] = c;
        for (int j = 0; j <= db; ++j)
            rem[size_t(i - db + j)] = rem[size_t(i - db + j)] - c * b.coeff(j);
    }
    return {Poly(tw, std::move(quo)), Poly(tw, std::move(rem))};
}

Poly poly_rem(const Poly& a, const Poly& b) { return poly_divmod(a, b).second; }

Poly poly_div_exact(const Poly& a, const Poly& b) {
    auto [q, r] = poly_divmod(a, b);
    if (!r.is_zero()) throw TheoryViolation("inexact polynomial division");
    return q;
}

Poly poly_monic(const Poly& a) {
    if (a.is_zero()) return a;
    return poly_scale(ff_inv(a.leading()), a);
}

Poly poly_gcd(const Poly& a, const Poly& b) {
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r = poly_rem(x, y);
        x = std::move(y);
        y = std::move(r);
    }
    return poly_monic(x);
}

Poly poly_pow(const Poly& a, std::uint32_t n) {
    Poly r = poly_one(a.tower());
    Poly base = a;
    while (n) {
        if (n & 1) r = r * base;
        base = base * base;
        n >>= 1;
    }
    return r;
}

Poly poly_derivative(const Poly& a) {
    if (a.degree() < 1) return poly_zero(a.tower());
    std::vector<FFElem> r;
    r.reserve(size_t(a.degree()));
    for (int i = 1; i <= a.degree(); ++i) {
        FFElem c = a.coeff(i);
        FFElem acc = ff_zero(a.tower());
        for (int j = 0; j < i % int(a.tower()->p); ++j) acc = acc + c;
        r.push_back(acc);
    }
    return Poly(a.tower(), std::move(r));
}

FFElem poly_eval(const Poly& f, const FFElem& at) {
    const FieldTower* tw = at.tower();
    FFElem acc = ff_zero(tw);
    for (int i = f.degree(); i >= 0; --i) {
        FFElem c = f.coeff(i);
        FFElem cc = (c.tower() == tw) ? c : embed_from_fq(tw, c);
        acc = acc * at + cc;
    }
    return acc;
}

Poly poly_frobenius(const Poly& f, std::int64_t j) {
    std::vector<FFElem> r(f.coeffs());
    for (FFElem& x : r) x = frobenius_pow(x, j);
    return Poly(f.tower(), std::move(r));
}

bool poly_is_frobenius_invariant(const Poly& f) {
    for (const FFElem& x : f.coeffs())
        if (frobenius_q(x) != x) return false;
    return true;
}

Poly embed_poly(const Poly& f, const FieldTower* target) {
    if (f.tower() == target) return f;
    if (f.tower() != target->fq()) throw TowerMismatch();
    std::vector<FFElem> r;
    r.reserve(f.coeffs().size());
    for (const FFElem& x : f.coeffs()) r.push_back(embed_from_fq(target, x));
    return Poly(target, std::move(r));
}

Poly poly_to_fq(const Poly& f) {
    const FieldTower* fq = f.tower()->fq();
    if (fq == f.tower()) return f;
    std::vector<FFElem> r;
    r.reserve(f.coeffs().size());
    for (const FFElem& x : f.coeffs()) {
        auto c = to_fq(x);
        if (!c) throw TheoryViolation("coefficient outside the base field");
        r.push_back(*c);
    }
    return Poly(fq, std::move(r));
}

bool poly_is_irreducible(const Poly& f) {
    int d = f.degree();
    if (d <= 0) return false;
    if (d == 1) return true;
    const FieldTower* tw = f.tower();
    std::vector<int> prime_divs;
    int n = d;
    for (int l = 2; l * l <= n; ++l)
        if (n % l == 0) {
            prime_divs.push_back(l);
            while (n % l == 0) n /= l;
        }
    if (n > 1) prime_divs.push_back(n);

    Poly x = poly_rem(poly_T(tw), f);
    std::vector<Poly> at_step(size_t(d + 1));
    at_step[0] = x;
    // Iterate h -> h^Q mod f, keeping intermediate steps for the gcd checks.
    Poly h = x;
    for (int i = 1; i <= d; ++i) {
        Poly r = poly_one(tw);
        Poly base = h;
        std::uint64_t nn = tw->size;
        while (nn) {
            if (nn & 1) r = poly_rem(r * base, f);
            base = poly_rem(base * base, f);
            nn >>= 1;
        }
        h = r;
        at_step[size_t(i)] = h;
    }
    if (!(at_step[size_t(d)] == x)) return false;
    for (int l : prime_divs) {
        Poly g = poly_gcd(at_step[size_t(d / l)] - x, f);
        if (g.degree() != 0) return false;
    }
    return true;
}

std::vector<FFElem> roots_in_tower(const Poly& f, const FieldTower* target,
                                   std::uint64_t budget) {
    if (target->size > budget)
        throw BudgetError("root scan exceeds field size budget");
    Poly g = embed_poly(f, target);
    if (g.is_zero()) throw UserError("root scan of the zero polynomial");
    std::vector<FFElem> roots;
    for (std::uint64_t idx = 0; idx < target->size; ++idx) {
        FFElem a = elem_from_index(target, idx);
        if (poly_eval(g, a).is_zero()) roots.push_back(a);
    }
    return roots;  // scan order is the canonical element order
}

Poly min_poly_over_fq(const FFElem& a) {
    const FieldTower* tw = a.tower();
    Poly f = poly_one(tw);
    FFElem b = a;
    do {
        f = f * (poly_T(tw) - poly_const(b));
        b = frobenius_q(b);
    } while (b != a);
    return poly_to_fq(f);
}

// ---------------------------------------------------------------------------
// Text rendering and parsing

namespace {

std::uint64_t coeff_value(const FFElem& a) {
    const auto& c = a.coords();
    std::uint64_t v = 0;
    for (size_t i = c.size(); i-- > 0;) v = v * a.tower()->p + c[i];
    return v;
}

FFElem coeff_from_value(const FieldTower* tw, std::uint64_t v) {
    v %= tw->size;
    std::vector<fp_t> c(tw->deg);
    for (std::uint32_t i = 0; i < tw->deg; ++i) {
        c[i] = fp_t(v % tw->p);
        v /= tw->p;
    }
    return FFElem(tw, std::move(c));
}

}  // namespace

std::string format_poly(const Poly& f) {
    if (f.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = f.degree(); i >= 0; --i) {
        FFElem c = f.coeff(i);
        if (c.is_zero()) continue;
        if (!first) os << "+";
        first = false;
        std::uint64_t v = coeff_value(c);
        if (i == 0) {
            os << v;
        } else {
            if (v != 1) os << v << "*";
            os << "T";
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

Poly parse_poly(const std::string& text, const FieldTower* tw) {
    size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto fail = [&](const std::string& why) -> UserError {
        std::ostringstream os;
        os << "cannot parse polynomial '" << text << "' at position " << pos
           << ": " << why;
        return UserError(os.str());
    };
    auto parse_uint = [&]() -> std::uint64_t {
        skip_ws();
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            throw fail("expected a digit");
        std::uint64_t v = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            v = v * 10 + std::uint64_t(text[pos] - '0');
            if (v > (std::uint64_t(1) << 62)) throw fail("coefficient too large");
            ++pos;
        }
        return v;
    };

    std::vector<FFElem> acc;
    auto add_term = [&](const FFElem& c, std::uint32_t exp) {
        if (acc.size() <= exp) acc.resize(exp + 1, ff_zero(tw));
        acc[exp] = acc[exp] + c;
    };

    bool expect_term = true;
    bool negate = false;
    skip_ws();
    if (pos >= text.size()) throw fail("empty input");
    while (pos < text.size()) {
        skip_ws();
        if (pos >= text.size()) break;
        char ch = text[pos];
        if (expect_term) {
            FFElem c = ff_one(tw);
            bool have_coeff = false;
            if (std::isdigit(static_cast<unsigned char>(ch))) {
                c = coeff_from_value(tw, parse_uint());
                have_coeff = true;
                skip_ws();
                if (pos < text.size() && text[pos] == '*') {
                    ++pos;
                    skip_ws();
                }
            }
            std::uint32_t exp = 0;
            if (pos < text.size() && (text[pos] == 'T' || text[pos] == 't')) {
                ++pos;
                exp = 1;
                skip_ws();
                if (pos < text.size() && text[pos] == '^') {
                    ++pos;
                    std::uint64_t ev = parse_uint();
                    if (ev > 4096) throw fail("exponent too large");
                    exp = std::uint32_t(ev);
                }
            } else if (!have_coeff) {
                throw fail("expected a coefficient or 'T'");
            }
            add_term(negate ? -c : c, exp);
            expect_term = false;
            negate = false;
        } else {
            if (ch == '+') {
                ++pos;
            } else if (ch == '-') {
                ++pos;
                negate = true;
            } else {
                throw fail("expected '+' or '-'");
            }
            expect_term = true;
        }
    }
    if (expect_term) throw fail("trailing operator");
    return Poly(tw, std::move(acc));
}

}  // namespace dmt
