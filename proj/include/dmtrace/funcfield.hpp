/* Copyright (C) 2026 The dmtrace authors.
 * This program is licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#ifndef DMTRACE_FUNCFIELD_HPP
#define DMTRACE_FUNCFIELD_HPP

#include <optional>
#include <string>
#include <vector>

#include "dmtrace/poly.hpp"

namespace dmt {

/// Rational function num/den over a FieldTower, kept in canonical form:
/// gcd(num, den) = 1 and den monic. Operators implement arithmetic in the
/// fraction field; elements of T-polynomial quotient rings are represented
/// with den = 1 and reduced through CoeffRing.
class RatF {
  public:
    RatF() = default;
    explicit RatF(const Poly& num);
    RatF(const Poly& num, const Poly& den);  // throws MathError if den = 0

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    const FieldTower* tower() const { return num_.tower(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_poly() const { return den_.degree() == 0; }

    RatF operator+(const RatF& o) const;
    RatF operator-(const RatF& o) const;
    RatF operator-() const;
    RatF operator*(const RatF& o) const;
    RatF operator/(const RatF& o) const;  // throws MathError on zero divisor
    bool operator==(const RatF& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RatF& o) const { return !(*this == o); }

  private:
    Poly num_, den_;
    void reduce();
};

RatF rf_zero(const FieldTower* tw);
RatF rf_one(const FieldTower* tw);
RatF rf_T(const FieldTower* tw);
RatF rf_inv(const RatF& a);
RatF rf_pow(const RatF& a, std::int64_t n);
/// Multiplication by an integer scalar (reduced mod p).
RatF rf_scale_int(const RatF& a, std::int64_t n);

/// Degree of a at the place at infinity of F_q(T): deg num - deg den, or
/// nullopt for the zero function. The size |a|_infty is q to this exponent.
std::optional<int> infty_size_exponent(const RatF& a);

/// K = F_q(T) elements are RatF values over a (p, e, 1) tower.
using KElem = RatF;

enum class RingKind {
    BaseField,      // B = F_q (constants)
    Quotient,       // B = F_q[T]/(f) for a monic nonconstant f
    RationalField,  // B = F_q(T)
};

/// An arithmetic coefficient ring B, or its scalar extension to a larger
/// tower k (the ring k[T]/(f), k, or k(T)). Elements are RatF values over
/// `tower`; the ring supplies reduction, inversion, and Frobenius descent.
class CoeffRing {
  public:
    CoeffRing() = default;
    static CoeffRing base_field(TowerPtr tower);
    static CoeffRing quotient(TowerPtr tower, const Poly& modulus);
    static CoeffRing rational_field(TowerPtr tower);

    RingKind kind() const { return kind_; }
    const FieldTower* tower() const { return tower_.get(); }
    TowerPtr tower_ptr() const { return tower_; }
    const Poly& modulus() const { return modulus_; }

    /// The same ring with coefficients extended to the given tower, or
    /// restricted back down to F_q.
    CoeffRing extended_to(TowerPtr target) const;
    CoeffRing base_ring() const;

    /// Length of B as a module over itself times F_q: deg f for quotients,
    /// 1 for the base field. Undefined (throws) for the rational field.
    int length_over_fq() const;

    RatF zero() const;
    RatF one() const;
    /// Canonical form of an arbitrary polynomial/fraction in this ring.
    RatF reduce(const RatF& a) const;
    RatF add(const RatF& a, const RatF& b) const;
    RatF sub(const RatF& a, const RatF& b) const;
    RatF neg(const RatF& a) const;
    RatF mul(const RatF& a, const RatF& b) const;
    RatF inv(const RatF& a) const;  // throws MathError for non-units
    bool is_unit(const RatF& a) const;
    bool is_nilpotent(const RatF& a) const;
    bool eq(const RatF& a, const RatF& b) const;

    /// Coefficientwise q-power Frobenius (semilinear over B).
    RatF frobenius(const RatF& a, std::int64_t j = 1) const;
    bool is_frobenius_invariant(const RatF& a) const;
    /// Descent of a Frobenius-invariant element to the base ring over F_q;
    /// throws TheoryViolation when coefficients fail to lie in F_q.
    RatF map_down(const RatF& a) const;
    /// Scalar extension of an element of the base ring into this ring.
    RatF embed(const RatF& a) const;

  private:
    RingKind kind_ = RingKind::BaseField;
    TowerPtr tower_;
    Poly modulus_;
};

/// Truncated power series in t with coefficients in a CoeffRing; keeps
/// coefficients of t^0 through t^order inclusive.
inline constexpr int kDefaultSeriesOrder = 24;

class TruncSeries {
  public:
    TruncSeries() = default;
    TruncSeries(const CoeffRing& ring, int order);
    TruncSeries(const CoeffRing& ring, int order, std::vector<RatF> coeffs);

    const CoeffRing& ring() const { return ring_; }
    int order() const { return order_; }
    const RatF& coeff(int i) const;
    void set_coeff(int i, const RatF& v);

    TruncSeries operator+(const TruncSeries& o) const;
    TruncSeries operator-(const TruncSeries& o) const;
    TruncSeries operator*(const TruncSeries& o) const;
    bool operator==(const TruncSeries& o) const;
    bool operator!=(const TruncSeries& o) const { return !(*this == o); }

  private:
    CoeffRing ring_;
    int order_ = 0;
    std::vector<RatF> c_;
};

/// Multiplicative inverse; requires an invertible constant term.
TruncSeries series_inverse(const TruncSeries& a);
TruncSeries series_derivative(const TruncSeries& a);

/// t * dlog of a polynomial in t given by its coefficient list (constant term
/// must be a unit): t L'(t) / L(t) truncated at t^order.
TruncSeries series_dlog(const CoeffRing& ring, const std::vector<RatF>& poly_in_t,
                        int order);
/// Same for a truncated series with unit constant term.
TruncSeries series_dlog_series(const TruncSeries& L);

/// Structural equality of coefficient rings (kind, tower, modulus).
bool ring_eq(const CoeffRing& a, const CoeffRing& b);

std::string format_ratf(const RatF& a);

}  // namespace dmt

#endif
