/* Copyright (C) 2026 The dmtrace authors.
 * This program is licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#ifndef DMTRACE_DRINFELD_HPP
#define DMTRACE_DRINFELD_HPP

#include <vector>

#include "dmtrace/ffield.hpp"
#include "dmtrace/poly.hpp"
#include "dmtrace/skewpoly.hpp"
#include "dmtrace/taumod.hpp"

namespace dmt {

/// Rank-2 Drinfeld F_q[T]-module over k = F_{q^m}, given by
/// phi_T = theta + g tau + delta tau^2 with delta != 0. The characteristic
/// P is the minimal polynomial of theta over F_q; deg P must divide m.
struct DrinfeldModule {
    TowerPtr tower;  // k = F_{q^m}
    FFElem theta;
    FFElem g;
    FFElem delta;
    Poly charP;  // over the (p, e, 1) tower, monic irreducible of degree d | m
};

/// Validates the data and computes the characteristic. Throws UserError when
/// delta = 0 or when deg P does not divide m.
DrinfeldModule make_drinfeld(TowerPtr tower, const FFElem& theta,
                             const FFElem& g, const FFElem& delta);

/// Image of a (a polynomial over F_q) under the ring homomorphism sending T
/// to phi_T. Degree in tau is 2 deg a; the constant coefficient is a(theta).
SkewPoly phi_of(const DrinfeldModule& dm, const Poly& a);

/// Matrix of tau on the motive k{tau}, a rank-2 module over k[T] with T
/// acting by right multiplication by phi_T, in the basis (1, tau). Columns
/// are tau-images: tau . 1 = tau and
/// tau . tau = delta^{-1}(T - theta) . 1 - g delta^{-1} . tau, so the matrix
/// is ((0, delta^{-1}(T - theta)), (1, -g delta^{-1})). Entries live in the
/// rational function ring over k.
RingMatrix motive_matrix(const DrinfeldModule& dm);

/// Characteristic polynomial X^2 - a X + b of the Frobenius pi = tau^m:
/// a, b in F_q[T] with deg a <= m/2 and b = mu P^{m/d} for a unit mu.
struct CharPoly {
    Poly a;  // over the (p, e, 1) tower
    Poly b;
    int m = 0;
};

/// Computes the Frobenius characteristic polynomial from the twisted m-th
/// power of the motive matrix, descends the coefficients to F_q[T], enforces
/// the degree and b = mu P^{m/d} shape, and confirms the identity
/// pi^2 - phi_a pi + phi_b = 0 in k{tau}. Any failure is a TheoryViolation.
CharPoly frobenius_charpoly(const DrinfeldModule& dm);

/// Whether tau^{2m} - phi_a tau^m + phi_b is the zero skew polynomial.
bool verify_charpoly(const DrinfeldModule& dm, const CharPoly& cp);

/// #{c in k^x : c^{q-1} g = g and c^{q^2-1} delta = delta}, the automorphism
/// group order; always congruent to -1 mod p.
int aut_order(const DrinfeldModule& dm);

struct ClassEntry {
    FFElem g;
    FFElem delta;
    int aut = 0;         // stabilizer size = #Aut
    CharPoly cp;
    bool supersingular = false;  // a = 0 mod P; reported, never branched on
};

/// Isomorphism classes of rank-2 modules over k with a fixed theta; entries
/// are sorted by their lex-minimal representative.
struct ClassList {
    TowerPtr tower;
    FFElem theta;
    std::vector<ClassEntry> entries;
};

/// Class enumeration scans all q^m (q^m - 1) parameter pairs, so it uses a
/// much smaller default budget on the base-field size q^m than other
/// exhaustive scans.
inline constexpr std::uint64_t kDefaultEnumBudget = 729;

/// Orbit representatives of {(g, delta) : delta != 0} under the twisted
/// scaling c . (g, delta) = (c^{q-1} g, c^{q^2-1} delta), c in k^x. Each
/// entry carries the stabilizer size and its Frobenius charpoly. Asserts the
/// mass formula sum 1/#Aut = q^m in exact rational arithmetic. Throws
/// BudgetError when q^m exceeds the budget.
ClassList enumerate_classes(TowerPtr tower, const FFElem& theta,
                            std::uint64_t budget = kDefaultEnumBudget);
/// Plain-loop reference implementation with identical output; the parallel
/// version is checked against it in tests and benchmarks.
ClassList enumerate_classes_serial(TowerPtr tower, const FFElem& theta,
                                   std::uint64_t budget = kDefaultEnumBudget);

/// Lex-smallest root of P (monic irreducible over F_q) inside the given
/// tower. Throws UserError when P has no root there.
FFElem canonical_theta(const Poly& P, const TowerPtr& tower);

/// The weight-k type-l fiber module: rank k-1 over F_q(T), with tau acting
/// through Sym^{k-2} of the motive matrix times det^{l-k+1}. The determinant
/// delta = -delta^{-1}(T - theta) is invertible in k(T), so tau is bijective
/// and the module is its own bijective summand.
TauModule fiber_crystal(const DrinfeldModule& dm, int k, int l);

/// Trace of tau^m on fiber_crystal(dm, k, l), descended to F_q(T). Equals
/// s_{k-2} b^{l-k+1} where s_j is the power-sum sequence of the Frobenius
/// charpoly; the recurrence path lives in the hecke module and the two are
/// cross-checked there.
KElem sym_det_trace(const DrinfeldModule& dm, int k, int l);

}  // namespace dmt

#endif
