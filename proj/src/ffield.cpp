/* Copyright (C) 2026 The dmtrace authors.
 * This program is licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#include "dmtrace/ffield.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace dmt {
namespace {

// ---------------------------------------------------------------------------
// Raw polynomial arithmetic over F_p. Vectors hold coefficients low to high
// and may carry trailing zeros; fp_deg ignores them.

using fpvec = std::vector<fp_t>;

bool is_prime(fp_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

int fp_deg(const fpvec& a) {
    for (int i = int(a.size()) - 1; i >= 0; --i)
        if (a[size_t(i)] != 0) return i;
    return -1;
}

void fp_trim(fpvec& a) { a.resize(size_t(fp_deg(a) + 1)); }

fpvec fp_mul(const fpvec& a, const fpvec& b, fp_t p) {
    int da = fp_deg(a), db = fp_deg(b);
    if (da < 0 || db < 0) return {};
    fpvec r(size_t(da + db + 1), 0);
    for (int i = 0; i <= da; ++i) {
        if (a[size_t(i)] == 0) continue;
        std::uint64_t ai = a[size_t(i)];
        for (int j = 0; j <= db; ++j)
            r[size_t(i + j)] = fp_t((r[size_t(i + j)] + ai * b[size_t(j)]) % p);
    }
    return r;
}

// Remainder of a modulo monic f.
fpvec fp_rem(fpvec a, const fpvec& f, fp_t p) {
    int df = fp_deg(f);
    for (int i = fp_deg(a); i >= df; --i) {
        fp_t c = a[size_t(i)];
        if (c == 0) continue;
        a[size_t(i)] = 0;
        for (int j = 0; j < df; ++j) {
            std::uint64_t sub = std::uint64_t(c) * f[size_t(j)] % p;
            a[size_t(i - df + j)] =
                fp_t((a[size_t(i - df + j)] + p - sub) % p);
        }
    }
    fp_trim(a);
    return a;
}

fpvec fp_mulmod(const fpvec& a, const fpvec& b, const fpvec& f, fp_t p) {
    return fp_rem(fp_mul(a, b, p), f, p);
}

fpvec fp_powmod(fpvec base, std::uint64_t n, const fpvec& f, fp_t p) {
    fpvec r{1};
    base = fp_rem(std::move(base), f, p);
    while (n) {
        if (n & 1) r = fp_mulmod(r, base, f, p);
        base = fp_mulmod(base, base, f, p);
        n >>= 1;
    }
    return r;
}

fp_t fp_inv_scalar(fp_t a, fp_t p) {
    // Extended Euclid on integers.
    std::int64_t t = 0, nt = 1, r = p, nr = a % p;
    while (nr != 0) {
        std::int64_t qq = r / nr;
        std::swap(t -= qq * nt, nt);
        std::swap(r -= qq * nr, nr);
    }
    if (t < 0) t += p;
    return fp_t(t);
}

void fp_make_monic(fpvec& a, fp_t p) {
    int d = fp_deg(a);
    if (d < 0) return;
    fp_t lc = a[size_t(d)];
    if (lc == 1) return;
    fp_t s = fp_inv_scalar(lc, p);
    for (auto& c : a) c = fp_t(std::uint64_t(c) * s % p);
}

fpvec fp_gcd(fpvec a, fpvec b, fp_t p) {
    fp_trim(a);
    fp_trim(b);
    while (fp_deg(b) >= 0) {
        fp_make_monic(b, p);
        fpvec r = fp_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    fp_make_monic(a, p);
    return a;
}

// Extended gcd: returns g and u with u*a = g mod f (v not needed).
std::pair<fpvec, fpvec> fp_xgcd_mod(const fpvec& a, const fpvec& f, fp_t p) {
    fpvec r0 = f, r1 = a, u0 = {}, u1 = {1};
    fp_trim(r1);
    while (fp_deg(r1) >= 0) {
        // r0 = q*r1 + r2
        fpvec r2 = r0, q(size_t(std::max(0, fp_deg(r0) - fp_deg(r1)) + 1), 0);
        int d1 = fp_deg(r1);
        fp_t lc_inv = fp_inv_scalar(r1[size_t(d1)], p);
        for (int i = fp_deg(r2); i >= d1; --i) {
            fp_t c = fp_t(std::uint64_t(r2[size_t(i)]) * lc_inv % p);
            if (c == 0) continue;
            q[size_t(i - d1)] = c;
            for (int j = 0; j <= d1; ++j) {
                std::uint64_t sub = std::uint64_t(c) * r1[size_t(j)] % p;
                r2[size_t(i - d1 + j)] =
                    fp_t((r2[size_t(i - d1 + j)] + p - sub) % p);
            }
        }
        fp_trim(r2);
        // u2 = u0 - q*u1
        fpvec qu = fp_mul(q, u1, p);
        fpvec u2(std::max(u0.size(), qu.size()), 0);
        for (size_t i = 0; i < u2.size(); ++i) {
            fp_t x = i < u0.size() ? u0[i] : 0;
            fp_t y = i < qu.size() ? qu[i] : 0;
            u2[i] = fp_t((x + p - y) % p);
        }
        r0 = std::move(r1); r1 = std::move(r2);
        u0 = std::move(u1); u1 = std::move(u2);
    }
    return {r0, u0};
}

// Deterministic irreducibility test over F_p (Rabin): x^{p^d} = x mod f and
// gcd(x^{p^{d/l}} - x, f) = 1 for every prime l | d.
bool fp_irreducible(const fpvec& f, fp_t p) {
    int d = fp_deg(f);
    if (d <= 0) return false;
    if (d == 1) return true;
    std::vector<int> prime_divs;
    int n = d;
    for (int l = 2; l * l <= n; ++l)
        if (n % l == 0) {
            prime_divs.push_back(l);
            while (n % l == 0) n /= l;
        }
    if (n > 1) prime_divs.push_back(n);

    // h_i = x^{p^i} mod f, computed by repeated p-th powering.
    fpvec h{0, 1};
    h = fp_rem(std::move(h), f, p);
    std::vector<fpvec> at_step(size_t(d + 1));
    at_step[0] = h;
    for (int i = 1; i <= d; ++i) {
        h = fp_powmod(h, p, f, p);
        at_step[size_t(i)] = h;
    }
    fpvec x{0, 1};
    x = fp_rem(std::move(x), f, p);
    if (at_step[size_t(d)] != x) return false;
    for (int l : prime_divs) {
        fpvec g = at_step[size_t(d / l)];
        g.resize(std::max(g.size(), x.size()), 0);
        for (size_t i = 0; i < x.size(); ++i) g[i] = fp_t((g[i] + p - x[i]) % p);
        fpvec gg = fp_gcd(g, f, p);
        if (fp_deg(gg) != 0) return false;
    }
    return true;
}

// Lexicographically smallest monic irreducible of degree d over F_p, with the
// constant coefficient as the most significant position of the comparison.
fpvec canonical_modulus(fp_t p, int d) {
    fpvec f(size_t(d + 1), 0);
    f[size_t(d)] = 1;
    std::vector<fp_t> digits(size_t(d), 0);  // digits[0] = c_0, most significant
    for (;;) {
        for (int i = 0; i < d; ++i) f[size_t(i)] = digits[size_t(i)];
        if ((d == 1 || f[0] != 0) && fp_irreducible(f, p)) return f;
        // odometer increment, last digit fastest
        int i = d - 1;
        while (i >= 0 && ++digits[size_t(i)] == p) digits[size_t(i--)] = 0;
        if (i < 0) throw TheoryViolation("no irreducible polynomial found");
    }
}

// deg x deg matrix-vector and matrix-matrix products over F_p (row-major).
fpvec fpmat_apply(const fpvec& mat, const fpvec& v, int n, fp_t p) {
    fpvec r(size_t(n), 0);
    for (int i = 0; i < n; ++i) {
        std::uint64_t acc = 0;
        for (int j = 0; j < n; ++j)
            acc += std::uint64_t(mat[size_t(i * n + j)]) * v[size_t(j)];
        r[size_t(i)] = fp_t(acc % p);
    }
    return r;
}

fpvec fpmat_mul(const fpvec& a, const fpvec& b, int n, fp_t p) {
    fpvec r(size_t(n) * size_t(n), 0);
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) {
            std::uint64_t ail = a[size_t(i * n + l)];
            if (!ail) continue;
            for (int j = 0; j < n; ++j)
                r[size_t(i * n + j)] = fp_t(
                    (r[size_t(i * n + j)] + ail * b[size_t(l * n + j)]) % p);
        }
    return r;
}

// Inverse of an n x n matrix over F_p by Gauss-Jordan.
fpvec fpmat_inv(fpvec a, int n, fp_t p) {
    fpvec inv(size_t(n) * size_t(n), 0);
    for (int i = 0; i < n; ++i) inv[size_t(i * n + i)] = 1;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (a[size_t(r * n + col)] != 0) { piv = r; break; }
        if (piv < 0) throw MathError("singular matrix over F_p");
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(a[size_t(piv * n + j)], a[size_t(col * n + j)]);
                std::swap(inv[size_t(piv * n + j)], inv[size_t(col * n + j)]);
            }
        fp_t s = fp_inv_scalar(a[size_t(col * n + col)], p);
        for (int j = 0; j < n; ++j) {
            a[size_t(col * n + j)] = fp_t(std::uint64_t(a[size_t(col * n + j)]) * s % p);
            inv[size_t(col * n + j)] = fp_t(std::uint64_t(inv[size_t(col * n + j)]) * s % p);
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            fp_t c = a[size_t(r * n + col)];
            if (!c) continue;
            for (int j = 0; j < n; ++j) {
                a[size_t(r * n + j)] = fp_t(
                    (a[size_t(r * n + j)] + p - fp_t(std::uint64_t(c) * a[size_t(col * n + j)] % p)) % p);
                inv[size_t(r * n + j)] = fp_t(
                    (inv[size_t(r * n + j)] + p - fp_t(std::uint64_t(c) * inv[size_t(col * n + j)] % p)) % p);
            }
        }
    }
    return inv;
}

std::uint64_t checked_pow(std::uint64_t base, std::uint32_t exp, std::uint64_t cap) {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < exp; ++i) {
        if (r > cap / base) return cap + 1;
        r *= base;
    }
    return r;
}

std::map<std::tuple<fp_t, std::uint32_t, std::uint32_t>, TowerPtr>& registry() {
    static std::map<std::tuple<fp_t, std::uint32_t, std::uint32_t>, TowerPtr> reg;
    return reg;
}
std::mutex& registry_mutex() {
    static std::mutex mu;
    return mu;
}

}  // namespace

TowerPtr build_tower(fp_t p, std::uint32_t e, std::uint32_t m, std::uint64_t budget) {
    if (!is_prime(p)) throw UserError("p must be prime");
    if (e == 0 || m == 0) throw UserError("extension degrees must be positive");
    std::uint64_t size = checked_pow(p, e * m, budget);
    if (size > budget) throw BudgetError("field size budget exceeded");

    {
        std::lock_guard<std::mutex> lk(registry_mutex());
        auto it = registry().find({p, e, m});
        if (it != registry().end()) return it->second;
    }

    auto tw = std::shared_ptr<FieldTower>(new FieldTower());
    tw->p = p;
    tw->e = e;
    tw->m = m;
    tw->deg = e * m;
    tw->size = size;
    tw->q = checked_pow(p, e, budget);
    int D = int(tw->deg);
    tw->modulus = canonical_modulus(p, D);

    // p-power Frobenius matrix: column i holds coords of (x^i)^p = (x^p)^i.
    fpvec xp = fp_powmod(fpvec{0, 1}, p, tw->modulus, p);
    fpvec frob_p(size_t(D) * size_t(D), 0);
    fpvec pw{1};
    for (int i = 0; i < D; ++i) {
        for (int r = 0; r < D; ++r)
            frob_p[size_t(r * D + i)] = r < int(pw.size()) ? pw[size_t(r)] : 0;
        pw = fp_mulmod(pw, xp, tw->modulus, p);
    }
    tw->frob_q = frob_p;
    for (std::uint32_t i = 1; i < e; ++i)
        tw->frob_q = fpmat_mul(tw->frob_q, frob_p, D, p);
    tw->frob_q_pow.resize(m);
    tw->frob_q_pow[0].assign(size_t(D) * size_t(D), 0);
    for (int i = 0; i < D; ++i) tw->frob_q_pow[0][size_t(i * D + i)] = 1;
    for (std::uint32_t j = 1; j < m; ++j)
        tw->frob_q_pow[j] = fpmat_mul(tw->frob_q_pow[j - 1], tw->frob_q, D, p);

    if (m > 1) tw->fq_tower = build_tower(p, e, 1, budget);

    // Subfield generator.
    if (m == 1) {
        tw->qgen.assign(size_t(D), 0);
        if (D > 1) tw->qgen[1] = 1;  // for D == 1, x reduces to 0 mod x
    } else if (e == 1) {
        tw->qgen.assign(size_t(D), 0);  // F_p sits inside as constants
    } else {
        // Lexicographically smallest root of the canonical degree-e modulus.
        fpvec g = canonical_modulus(p, int(e));
        bool found = false;
        std::vector<fp_t> digits(size_t(D), 0);
        for (std::uint64_t idx = 0; idx < tw->size && !found; ++idx) {
            // digits hold the candidate's coords; digits[0] is the constant
            // coordinate and the most significant lex position
            fpvec cand(digits.begin(), digits.end());
            // Horner evaluation of g at cand
            fpvec acc;
            for (int i = int(e); i >= 0; --i) {
                acc = fp_mulmod(acc, cand, tw->modulus, p);
                if (g[size_t(i)] != 0) {
                    if (acc.empty()) acc.resize(1, 0);
                    acc[0] = fp_t((acc[0] + g[size_t(i)]) % p);
                }
            }
            if (fp_deg(acc) < 0) {
                cand.resize(size_t(D), 0);
                tw->qgen = cand;
                found = true;
            }
            int i = D - 1;
            while (i >= 0 && ++digits[size_t(i)] == p) digits[size_t(i--)] = 0;
        }
        if (!found) throw TheoryViolation("subfield generator not found");
    }

    tw->qgen_pow.resize(e);
    {
        fpvec pw2{1};
        pw2.resize(size_t(D), 0);
        for (std::uint32_t j = 0; j < e; ++j) {
            tw->qgen_pow[j] = pw2;
            pw2 = fp_mulmod(pw2, tw->qgen, tw->modulus, p);
            pw2.resize(size_t(D), 0);
        }
    }

    // Basis matrix of {x^s * qgen^j : s < m, j < e} and its inverse, used to
    // decompose elements over F_q.
    {
        fpvec bas(size_t(D) * size_t(D), 0);
        fpvec xs{1};
        for (std::uint32_t s = 0; s < m; ++s) {
            for (std::uint32_t j = 0; j < e; ++j) {
                fpvec col = fp_mulmod(xs, tw->qgen_pow[j], tw->modulus, p);
                col.resize(size_t(D), 0);
                for (int r = 0; r < D; ++r)
                    bas[size_t(r * D + int(s * e + j))] = col[size_t(r)];
            }
            xs = fp_mulmod(xs, fpvec{0, 1}, tw->modulus, p);
        }
        tw->fq_decomp = fpmat_inv(bas, D, p);
    }

    std::lock_guard<std::mutex> lk(registry_mutex());
    auto [it, inserted] = registry().emplace(std::make_tuple(p, e, m), tw);
    return it->second;
}

// ---------------------------------------------------------------------------
// FFElem

FFElem::FFElem(const FieldTower* tw, std::vector<fp_t> c) : tw_(tw), c_(std::move(c)) {
    c_.resize(tw->deg, 0);
}

bool FFElem::is_zero() const {
    for (fp_t x : c_)
        if (x) return false;
    return true;
}

bool FFElem::is_one() const {
    if (c_.empty() || c_[0] != 1) return false;
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i]) return false;
    return true;
}

FFElem FFElem::operator+(const FFElem& o) const {
    if (tw_ != o.tw_) throw TowerMismatch();
    std::vector<fp_t> r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r[i] = fp_t((c_[i] + o.c_[i]) % tw_->p);
    return FFElem(tw_, std::move(r));
}

FFElem FFElem::operator-(const FFElem& o) const {
    if (tw_ != o.tw_) throw TowerMismatch();
    std::vector<fp_t> r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i)
        r[i] = fp_t((c_[i] + tw_->p - o.c_[i]) % tw_->p);
    return FFElem(tw_, std::move(r));
}

FFElem FFElem::operator-() const {
    std::vector<fp_t> r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r[i] = fp_t((tw_->p - c_[i]) % tw_->p);
    return FFElem(tw_, std::move(r));
}

FFElem FFElem::operator*(const FFElem& o) const {
    if (tw_ != o.tw_) throw TowerMismatch();
    fpvec r = fp_mulmod(c_, o.c_, tw_->modulus, tw_->p);
    r.resize(tw_->deg, 0);
    return FFElem(tw_, std::move(r));
}

bool FFElem::operator==(const FFElem& o) const {
    return tw_ == o.tw_ && c_ == o.c_;
}

FFElem ff_zero(const FieldTower* tw) { return FFElem(tw, {}); }

FFElem ff_one(const FieldTower* tw) { return FFElem(tw, {1}); }

FFElem ff_gen(const FieldTower* tw) {
    if (tw->deg == 1) return ff_zero(tw);
    return FFElem(tw, {0, 1});
}

FFElem ff_make(const FieldTower* tw, const std::vector<fp_t>& coords) {
    if (coords.size() > tw->deg) throw UserError("coordinate vector too long");
    std::vector<fp_t> c(coords);
    for (auto& x : c) x %= tw->p;
    return FFElem(tw, std::move(c));
}

FFElem ff_mul_scalar(const FFElem& a, fp_t c) {
    c %= a.tower()->p;
    std::vector<fp_t> r(a.coords());
    for (auto& x : r) x = fp_t(std::uint64_t(x) * c % a.tower()->p);
    return FFElem(a.tower(), std::move(r));
}

FFElem ff_inv(const FFElem& a) {
    if (a.is_zero()) throw MathError("inverse of zero");
    const FieldTower* tw = a.tower();
    auto [g, u] = fp_xgcd_mod(a.coords(), tw->modulus, tw->p);
    if (fp_deg(g) != 0) throw MathError("non-invertible element");
    fp_t s = fp_inv_scalar(g[0], tw->p);
    fpvec r = u;
    for (auto& x : r) x = fp_t(std::uint64_t(x) * s % tw->p);
    r = fp_rem(std::move(r), tw->modulus, tw->p);
    r.resize(tw->deg, 0);
    return FFElem(tw, std::move(r));
}

FFElem ff_pow(const FFElem& a, std::int64_t n) {
    const FieldTower* tw = a.tower();
    FFElem base = a;
    if (n < 0) {
        base = ff_inv(a);
        n = -n;
    }
    FFElem r = ff_one(tw);
    std::uint64_t nn = std::uint64_t(n);
    while (nn) {
        if (nn & 1) r = r * base;
        base = base * base;
        nn >>= 1;
    }
    return r;
}

FFElem frobenius_q(const FFElem& a) {
    const FieldTower* tw = a.tower();
    return FFElem(tw, fpmat_apply(tw->frob_q, a.coords(), int(tw->deg), tw->p));
}

FFElem frobenius_pow(const FFElem& a, std::int64_t j) {
    const FieldTower* tw = a.tower();
    std::int64_t jm = j % std::int64_t(tw->m);
    if (jm < 0) jm += tw->m;
    if (jm == 0) return a;
    return FFElem(tw, fpmat_apply(tw->frob_q_pow[size_t(jm)], a.coords(),
                                  int(tw->deg), tw->p));
}

bool lex_less(const FFElem& a, const FFElem& b) {
    if (a.tower() != b.tower()) throw TowerMismatch();
    return a.coords() < b.coords();
}

std::uint64_t elem_index(const FFElem& a) {
    const FieldTower* tw = a.tower();
    std::uint64_t idx = 0;
    for (fp_t c : a.coords()) idx = idx * tw->p + c;
    return idx;
}

FFElem elem_from_index(const FieldTower* tw, std::uint64_t idx) {
    std::vector<fp_t> c(tw->deg, 0);
    for (int i = int(tw->deg) - 1; i >= 0; --i) {
        c[size_t(i)] = fp_t(idx % tw->p);
        idx /= tw->p;
    }
    return FFElem(tw, std::move(c));
}

FFElem embed_from_fq(const FieldTower* tw, const FFElem& c) {
    if (c.tower() != tw->fq()) throw TowerMismatch();
    if (tw->fq() == tw) return c;
    FFElem acc = ff_zero(tw);
    for (std::uint32_t j = 0; j < tw->e; ++j) {
        fp_t cj = c.coords()[j];
        if (cj) acc = acc + ff_mul_scalar(FFElem(tw, tw->qgen_pow[j]), cj);
    }
    return acc;
}

std::vector<FFElem> fq_coords(const FFElem& a) {
    const FieldTower* tw = a.tower();
    const FieldTower* fq = tw->fq();
    fpvec y = fpmat_apply(tw->fq_decomp, a.coords(), int(tw->deg), tw->p);
    std::vector<FFElem> out;
    out.reserve(tw->m);
    for (std::uint32_t s = 0; s < tw->m; ++s) {
        std::vector<fp_t> c(tw->e);
        for (std::uint32_t j = 0; j < tw->e; ++j) c[j] = y[size_t(s * tw->e + j)];
        out.push_back(FFElem(fq, std::move(c)));
    }
    return out;
}

std::optional<FFElem> to_fq(const FFElem& a) {
    std::vector<FFElem> co = fq_coords(a);
    for (size_t s = 1; s < co.size(); ++s)
        if (!co[s].is_zero()) return std::nullopt;
    return co[0];
}

FFElem from_fq_coords(const FieldTower* tw, const std::vector<FFElem>& coords) {
    if (coords.size() != tw->m) throw UserError("wrong number of coordinates");
    FFElem acc = ff_zero(tw);
    FFElem xs = ff_one(tw);
    FFElem x = ff_gen(tw);
    for (std::uint32_t s = 0; s < tw->m; ++s) {
        acc = acc + xs * embed_from_fq(tw, coords[s]);
        if (s + 1 < tw->m) xs = xs * x;
    }
    return acc;
}

FFElem norm_to_fq(const FFElem& a) {
    FFElem prod = a;
    for (std::uint32_t j = 1; j < a.tower()->m; ++j)
        prod = prod * frobenius_pow(a, j);
    auto r = to_fq(prod);
    if (!r) throw TheoryViolation("norm landed outside the base field");
    return *r;
}

FFElem unit_group_generator(const FieldTower* tw) {
    std::uint64_t n = tw->size - 1;
    std::vector<std::uint64_t> prime_divs;
    std::uint64_t nn = n;
    for (std::uint64_t l = 2; l * l <= nn; ++l)
        if (nn % l == 0) {
            prime_divs.push_back(l);
            while (nn % l == 0) nn /= l;
        }
    if (nn > 1) prime_divs.push_back(nn);
    for (std::uint64_t idx = 1; idx < tw->size; ++idx) {
        FFElem cand = elem_from_index(tw, idx);
        bool ok = true;
        for (std::uint64_t l : prime_divs)
            if (ff_pow(cand, std::int64_t(n / l)).is_one()) { ok = false; break; }
        if (ok) return cand;
    }
    throw TheoryViolation("unit group generator not found");
}

std::string to_string(const FFElem& a) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < a.coords().size(); ++i) {
        if (i) os << ",";
        os << a.coords()[i];
    }
    os << "]";
    return os.str();
}

}  // namespace dmt
