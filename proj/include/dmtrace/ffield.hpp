/* Copyright (C) 2026 The dmtrace authors.
 * This program is licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#ifndef DMTRACE_FFIELD_HPP
#define DMTRACE_FFIELD_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dmtrace/errors.hpp"

namespace dmt {

using fp_t = std::uint32_t;

/// Exhaustive scans (root finding, element enumeration, class searches) refuse
/// to run on fields larger than this unless the caller raises the limit.
inline constexpr std::uint64_t kDefaultFieldBudget = std::uint64_t(1) << 20;

class FieldTower;
using TowerPtr = std::shared_ptr<const FieldTower>;

/// F_{q^m} with q = p^e, realized as F_p[x]/(modulus) with deg modulus = e*m.
///
/// The modulus is the lexicographically smallest monic irreducible of its
/// degree over F_p, comparing coefficient vectors (c_0, c_1, ...) position by
/// position starting at the constant term, with 0 < 1 < ... < p-1. This makes
/// every tower, and hence every serialized element, reproducible from
/// (p, e, m) alone. Instances are interned: build_tower returns the same
/// object for the same parameters, so element operations may compare tower
/// identity by pointer.
class FieldTower {
  public:
    fp_t p;
    std::uint32_t e;  // q = p^e
    std::uint32_t m;  // field is F_{q^m}
    std::uint32_t deg;  // e*m, degree of modulus over F_p
    std::uint64_t size;  // p^(e*m)
    std::uint64_t q;     // p^e
    std::vector<fp_t> modulus;  // length deg+1, monic

    // Distinguished generator of the F_q subfield: for m == 1 the class of x,
    // otherwise the lexicographically smallest root in this field of the
    // canonical degree-e modulus over F_p. Its powers 1, g, ..., g^{e-1} span
    // F_q over F_p, matching the basis of the (p, e, 1) tower, so subfield
    // coordinates transfer verbatim between the two towers.
    std::vector<fp_t> qgen;

    /// The (p, e, 1) tower representing F_q itself; null when this already is
    /// that tower.
    TowerPtr fq_tower;

    // Precomputed data (row-major deg x deg matrices over F_p).
    std::vector<fp_t> frob_q;                // x -> x^q as F_p-linear map
    std::vector<std::vector<fp_t>> frob_q_pow;  // frob_q^j for 0 <= j < m
    std::vector<std::vector<fp_t>> qgen_pow;    // coords of qgen^j, j < e
    std::vector<fp_t> fq_decomp;  // inverse of the basis matrix {x^s qgen^j}

    const FieldTower* fq() const { return fq_tower ? fq_tower.get() : this; }

    FieldTower(const FieldTower&) = delete;
    FieldTower& operator=(const FieldTower&) = delete;

  private:
    FieldTower() = default;
    friend TowerPtr build_tower(fp_t, std::uint32_t, std::uint32_t, std::uint64_t);
};

/// Returns the interned tower for F_{(p^e)^m}. Throws UserError for invalid
/// parameters and BudgetError when p^(e*m) exceeds the budget.
TowerPtr build_tower(fp_t p, std::uint32_t e, std::uint32_t m,
                     std::uint64_t budget = kDefaultFieldBudget);

/// Element of a FieldTower: coordinate vector of length tower->deg over F_p
/// in the basis 1, x, ..., x^{deg-1}.
class FFElem {
  public:
    FFElem() : tw_(nullptr) {}
    FFElem(const FieldTower* tw, std::vector<fp_t> c);

    const FieldTower* tower() const { return tw_; }
    const std::vector<fp_t>& coords() const { return c_; }

    bool is_zero() const;
    bool is_one() const;

    FFElem operator+(const FFElem& o) const;
    FFElem operator-(const FFElem& o) const;
    FFElem operator-() const;
    FFElem operator*(const FFElem& o) const;
    bool operator==(const FFElem& o) const;
    bool operator!=(const FFElem& o) const { return !(*this == o); }

  private:
    const FieldTower* tw_;
    std::vector<fp_t> c_;
    friend FFElem ff_mul_scalar(const FFElem&, fp_t);
};

FFElem ff_zero(const FieldTower* tw);
FFElem ff_one(const FieldTower* tw);
/// The class of x (a generator of the tower as an F_p-algebra).
FFElem ff_gen(const FieldTower* tw);
/// Element with the given F_p coordinate vector (length <= deg, zero-padded).
FFElem ff_make(const FieldTower* tw, const std::vector<fp_t>& coords);
/// c * a for c in F_p.
FFElem ff_mul_scalar(const FFElem& a, fp_t c);

FFElem ff_inv(const FFElem& a);  // throws MathError on zero
FFElem ff_pow(const FFElem& a, std::int64_t n);

/// q-power Frobenius sigma(a) = a^q and its iterates / inverse.
FFElem frobenius_q(const FFElem& a);
FFElem frobenius_pow(const FFElem& a, std::int64_t j);  // sigma^j, any j

/// Canonical total order: lexicographic on coordinate vectors, constant
/// coordinate most significant.
bool lex_less(const FFElem& a, const FFElem& b);

/// Index of an element in the canonical enumeration order (lex order); the
/// inverse of elem_from_index. Indices run over [0, tower->size).
std::uint64_t elem_index(const FFElem& a);
FFElem elem_from_index(const FieldTower* tw, std::uint64_t idx);

/// Embedding F_q -> F_{q^m}: takes an element of the (p, e, 1) tower.
FFElem embed_from_fq(const FieldTower* tw, const FFElem& c);
/// Partial inverse of embed_from_fq; nullopt when a is outside F_q.
std::optional<FFElem> to_fq(const FFElem& a);
/// Coordinates of a over F_q in the basis 1, x, ..., x^{m-1}; entries live in
/// the (p, e, 1) tower.
std::vector<FFElem> fq_coords(const FFElem& a);
FFElem from_fq_coords(const FieldTower* tw, const std::vector<FFElem>& coords);

/// Norm from F_{q^m} down to F_q (product of Frobenius conjugates); result in
/// the (p, e, 1) tower.
FFElem norm_to_fq(const FFElem& a);

/// Multiplicative order logarithm helpers used by class enumeration: a fixed
/// generator of the unit group, deterministic for the tower.
FFElem unit_group_generator(const FieldTower* tw);

std::string to_string(const FFElem& a);

}  // namespace dmt

#endif
