/* Copyright (C) 2026 The dmtrace authors.
 * This program is licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#ifndef DMTRACE_TAUMOD_HPP
#define DMTRACE_TAUMOD_HPP

#include <utility>
#include <vector>

#include "dmtrace/funcfield.hpp"

namespace dmt {

/// Matrix with entries in a CoeffRing (or its extension to a tower).
/// Entries are kept in the ring's canonical form.
class RingMatrix {
  public:
    RingMatrix() = default;
    RingMatrix(const CoeffRing& ring, int rows, int cols);  // zero matrix
    RingMatrix(const CoeffRing& ring, int rows, int cols, std::vector<RatF> entries);

    static RingMatrix identity(const CoeffRing& ring, int n);

    const CoeffRing& ring() const { return ring_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    /// Side length; throws unless square.
    int size() const;
    const RatF& at(int i, int j) const;
    void set(int i, int j, const RatF& v);

    RingMatrix operator+(const RingMatrix& o) const;
    RingMatrix operator-(const RingMatrix& o) const;
    RingMatrix operator*(const RingMatrix& o) const;
    bool operator==(const RingMatrix& o) const;
    bool operator!=(const RingMatrix& o) const { return !(*this == o); }

    RingMatrix scale(const RatF& s) const;
    /// Entrywise q-power Frobenius iterate.
    RingMatrix frobenius(std::int64_t j) const;
    RatF trace() const;
    bool is_zero() const;

  private:
    CoeffRing ring_;
    int rows_ = 0, cols_ = 0;
    std::vector<RatF> a_;
};

/// The matrix of the n-fold composite of v -> M sigma(v), accumulated as
/// M M^(sigma) ... M^(sigma^(n-1)); n = 0 gives the identity.
RingMatrix twisted_power(const RingMatrix& M, int n);

/// Coefficients of det(1 - t*A), low to high (length size+1, leading entry
/// may vanish over a non-domain). Division-free, valid over any of the
/// supported rings.
std::vector<RatF> char_series_coeffs(const RingMatrix& A);
RatF ring_det(const RingMatrix& A);

/// A finitely generated module over R = k tensor B carrying a map tau with
/// tau(v) = matrix * sigma(v), where sigma is the q-power Frobenius on
/// k-coordinates and fixes B. Columns of the matrix are the tau-images of the
/// generators. Generator j may carry an annihilator ann[j] (a monic divisor
/// of the quotient modulus, given over F_q), making the underlying module
/// R/(ann_1) + ... + R/(ann_r); an empty annihilator list means free. Traces,
/// characteristic series and l-series require a free underlying module;
/// nilpotence, flatness and perfection accept annihilators.
class TauModule {
  public:
    TauModule() = default;

    /// B is given over F_q (a (p, e, 1) tower); the matrix must live over the
    /// extension of B to k. Validates annihilator compatibility
    /// (ann_i | entry(i,j) * ann_j for all i, j).
    static TauModule make(TowerPtr k, const CoeffRing& coeff_ring,
                          const RingMatrix& matrix,
                          std::vector<Poly> annihilators = {});

    const FieldTower* tower() const { return k_.get(); }
    TowerPtr tower_ptr() const { return k_; }
    /// B, over F_q.
    const CoeffRing& coeff_ring() const { return base_; }
    /// R = k tensor B.
    const CoeffRing& ext_ring() const { return ext_; }
    int rank() const { return matrix_.size(); }
    const RingMatrix& matrix() const { return matrix_; }
    const std::vector<Poly>& annihilators() const { return ann_; }
    bool is_free() const { return ann_.empty(); }

  private:
    TowerPtr k_;
    CoeffRing base_, ext_;
    RingMatrix matrix_;
    std::vector<Poly> ann_;
};

RingMatrix tau_power_matrix(const TauModule& M, int n);

/// True iff some tau power vanishes; decided at the stabilization bound
/// n0 = rank * m * length(B).
bool is_nilpotent(const TauModule& M);

struct SubmoduleResult {
    TauModule module;      // free, with the induced tau
    RingMatrix inclusion;  // columns: generators inside the ambient module
};

/// The direct summand on which tau is bijective (image of tau^n0 with the
/// induced map). Throws TheoryViolation when that summand is not free over
/// k tensor B; use is_flat_point to detect this case first.
SubmoduleResult perfection_with_inclusion(const TauModule& M);
TauModule perfection(const TauModule& M);

/// Whether the summand on which tau is bijective is projective over k tensor
/// B (equivalently flat over B), checked through elementary divisors.
bool is_flat_point(const TauModule& M);

/// Trace over k tensor B of tau^n restricted to the bijective summand,
/// descended to B. Requires m | n and a free underlying module.
RatF trace_tau_n(const TauModule& M, int n);

/// Characteristic series det_B(1 - t tau) of the bijective summand, computed
/// through restriction of scalars to B, truncated at t^N. Also recomputes the
/// same polynomial as det over k tensor B of (1 - t^m tau^m) and asserts the
/// two agree.
TruncSeries det_char_B(const TauModule& M, int N);
/// Untruncated coefficient list of det_B(1 - t tau), low to high.
std::vector<RatF> det_char_B_coeffs(const TauModule& M);

/// l-series of a finite family of points: the t^n coefficient is
/// sum of d_x * trace_tau_n(M_x, n) over points with d_x | n. Asserts the
/// result equals t dlog of the product of the inverse characteristic series.
TruncSeries l_series_points(const std::vector<std::pair<int, TauModule>>& points,
                            int N);

/// A finite group given by its multiplication table, with an optional
/// automorphism used as a Frobenius twist on the group.
struct FiniteGroupData {
    int order = 0;
    std::vector<std::vector<int>> mult;  // mult[g][h]
    int identity = 0;
    std::vector<int> inverse;
    std::vector<int> twist;  // automorphism; identity permutation if untwisted

    /// Validates the table as a group and the twist as an automorphism.
    static FiniteGroupData make(std::vector<std::vector<int>> mult,
                                std::vector<int> twist = {});
    bool is_twisted() const;
};

/// Orbits of g -> x g sigma^n(x^{-1}); each class carries a representative
/// and the size of its stabilizer.
struct TwistedClass {
    int rep;
    int stab_size;
};
std::vector<TwistedClass> twisted_conjugacy_classes(const FiniteGroupData& G,
                                                    int n);

/// A group acting on a TauModule through R-linear matrices rho[g],
/// compatible with tau: matrix * rho(g)^(sigma) = rho(sigma_G(g)) * matrix.
/// For an untwisted group this is the usual commutation with tau.
struct GroupActionModule {
    TauModule module;
    std::vector<RingMatrix> rho;
};

/// Validates the homomorphism property, invertibility, and compatibility
/// with tau; requires gcd(|G|, p) = 1.
void validate_group_action(const FiniteGroupData& G, const GroupActionModule& act);

/// l-series of the quotient by G over the base point: the t^n coefficient
/// (for m | n) is d * sum over sigma^n-twisted classes of
/// trace(tau^n rho(g)) / #Stab(g), with 1/#Stab taken in B.
TruncSeries bg_l_series(const FiniteGroupData& G, const GroupActionModule& act,
                        int N);

/// The submodule of G-invariants with the induced tau, computed from the
/// averaging idempotent. Throws TheoryViolation if the invariants are not
/// free over k tensor B.
SubmoduleResult invariants_with_inclusion(const FiniteGroupData& G,
                                          const GroupActionModule& act);
TauModule invariants_module(const FiniteGroupData& G, const GroupActionModule& act);

}  // namespace dmt

#endif
