/* Copyright (C) 2026 The dmtrace authors.
 * This program is licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#ifndef DMTRACE_SKEWPOLY_HPP
#define DMTRACE_SKEWPOLY_HPP

#include <utility>
#include <vector>

#include "dmtrace/ffield.hpp"

namespace dmt {

/// Twisted polynomial in tau over a FieldTower k, with the commutation rule
/// tau * c = c^q * tau. Multiplication is noncommutative; coefficients are
/// stored low to high with no trailing zeros.
class SkewPoly {
  public:
    SkewPoly() : tw_(nullptr) {}
    explicit SkewPoly(const FieldTower* tw) : tw_(tw) {}
    SkewPoly(const FieldTower* tw, std::vector<FFElem> coeffs);

    const FieldTower* tower() const { return tw_; }
    const std::vector<FFElem>& coeffs() const { return c_; }
    int degree() const { return int(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    FFElem coeff(int i) const;

    SkewPoly operator+(const SkewPoly& o) const;
    SkewPoly operator-(const SkewPoly& o) const;
    SkewPoly operator-() const;
    SkewPoly operator*(const SkewPoly& o) const;
    bool operator==(const SkewPoly& o) const { return tw_ == o.tw_ && c_ == o.c_; }
    bool operator!=(const SkewPoly& o) const { return !(*this == o); }

  private:
    const FieldTower* tw_;
    std::vector<FFElem> c_;
    void normalize();
};

SkewPoly skew_zero(const FieldTower* tw);
SkewPoly skew_one(const FieldTower* tw);
SkewPoly skew_tau(const FieldTower* tw);
SkewPoly skew_const(const FFElem& a);
SkewPoly skew_pow(const SkewPoly& a, std::uint32_t n);

/// Right division: a = q * b + r with deg r < deg b. Throws MathError when b
/// is zero.
std::pair<SkewPoly, SkewPoly> right_divmod(const SkewPoly& a, const SkewPoly& b);

/// Evaluates the additive operator sum_i c_i v^(q^i) at v.
FFElem skew_apply(const SkewPoly& f, const FFElem& v);

}  // namespace dmt

#endif
