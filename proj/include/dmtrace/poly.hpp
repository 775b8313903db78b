/* Copyright (C) 2026 The dmtrace authors.
 * This program is licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#ifndef DMTRACE_POLY_HPP
#define DMTRACE_POLY_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dmtrace/ffield.hpp"

namespace dmt {

/// Dense univariate polynomial in T over a FieldTower. Coefficients are
/// stored low to high with no trailing zeros (the zero polynomial has an
/// empty coefficient vector).
class Poly {
  public:
    Poly() : tw_(nullptr) {}
    explicit Poly(const FieldTower* tw) : tw_(tw) {}
    Poly(const FieldTower* tw, std::vector<FFElem> coeffs);

    const FieldTower* tower() const { return tw_; }
    const std::vector<FFElem>& coeffs() const { return c_; }
    int degree() const { return int(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }
    FFElem coeff(int i) const;  // 0 beyond the stored range
    FFElem leading() const;     // throws MathError on zero
    bool is_monic() const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    bool operator==(const Poly& o) const { return tw_ == o.tw_ && c_ == o.c_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

  private:
    const FieldTower* tw_;
    std::vector<FFElem> c_;
    void normalize();
};

Poly poly_zero(const FieldTower* tw);
Poly poly_one(const FieldTower* tw);
Poly poly_T(const FieldTower* tw);
Poly poly_const(const FFElem& a);
Poly poly_scale(const FFElem& s, const Poly& f);

/// Quotient and remainder; the divisor's leading coefficient is inverted, so
/// this works over any tower (all towers are fields).
std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b);
Poly poly_rem(const Poly& a, const Poly& b);
/// Exact division; throws TheoryViolation if the remainder is nonzero.
Poly poly_div_exact(const Poly& a, const Poly& b);
Poly poly_monic(const Poly& a);
Poly poly_gcd(const Poly& a, const Poly& b);  // monic, deterministic
Poly poly_pow(const Poly& a, std::uint32_t n);
Poly poly_derivative(const Poly& a);

FFElem poly_eval(const Poly& f, const FFElem& at);
/// Coefficientwise q-power Frobenius iterate.
Poly poly_frobenius(const Poly& f, std::int64_t j);
/// True when every coefficient is fixed by the q-power Frobenius.
bool poly_is_frobenius_invariant(const Poly& f);

/// Coefficientwise embedding of a polynomial over F_q into a larger tower
/// with the same (p, e).
Poly embed_poly(const Poly& f, const FieldTower* target);
/// Coefficientwise descent to the (p, e, 1) tower; throws TheoryViolation if
/// some coefficient lies outside F_q.
Poly poly_to_fq(const Poly& f);

/// Rabin irreducibility test over the coefficient tower.
bool poly_is_irreducible(const Poly& f);

/// All roots of f in the target tower, sorted in the canonical element order.
/// f's coefficients are embedded first; exhaustive scan, so the target size
/// must fit the budget.
std::vector<FFElem> roots_in_tower(const Poly& f, const FieldTower* target,
                                   std::uint64_t budget = kDefaultFieldBudget);

/// Minimal polynomial of a over F_q: the monic product over the distinct
/// Frobenius conjugates, descended to the (p, e, 1) tower.
Poly min_poly_over_fq(const FFElem& a);

/// Rendering; F_q coefficients print as integers via c_0 + c_1 p + ... .
/// Examples: "T^2+2*T+1", "0", "T".
std::string format_poly(const Poly& f);
/// Parser for the same grammar ('+', '-', coefficients, 'T', 'T^k'); integer
/// coefficients are reduced mod q and expanded in base p to elements of the
/// coefficient tower.
Poly parse_poly(const std::string& text, const FieldTower* tw);

}  // namespace dmt

#endif
