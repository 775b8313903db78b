/* Copyright (C) 2026 The dmtrace authors.
 * This program is licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#include "dmtrace/taumod.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

namespace dmt {

// ---------------------------------------------------------------------------
// RingMatrix

RingMatrix::RingMatrix(const CoeffRing& ring, int rows, int cols)
    : ring_(ring), rows_(rows), cols_(cols),
      a_(size_t(rows) * size_t(cols), ring.zero()) {
    if (rows < 0 || cols < 0) throw UserError("negative matrix dimension");
}

RingMatrix::RingMatrix(const CoeffRing& ring, int rows, int cols,
                       std::vector<RatF> entries)
    : RingMatrix(ring, rows, cols) {
    if (entries.size() != a_.size()) throw UserError("matrix entry count mismatch");
    for (size_t i = 0; i < entries.size(); ++i) a_[i] = ring_.reduce(entries[i]);
}

RingMatrix RingMatrix::identity(const CoeffRing& ring, int n) {
    RingMatrix r(ring, n, n);
    for (int i = 0; i < n; ++i) r.set(i, i, ring.one());
    return r;
}

int RingMatrix::size() const {
    if (rows_ != cols_) throw UserError("matrix is not square");
    return rows_;
}

const RatF& RingMatrix::at(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
        throw UserError("matrix index out of range");
    return a_[size_t(i) * size_t(cols_) + size_t(j)];
}

void RingMatrix::set(int i, int j, const RatF& v) {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
        throw UserError("matrix index out of range");
    a_[size_t(i) * size_t(cols_) + size_t(j)] = ring_.reduce(v);
}

RingMatrix RingMatrix::operator+(const RingMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw UserError("matrix shape mismatch");
    RingMatrix r(ring_, rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = ring_.add(a_[i], o.a_[i]);
    return r;
}

RingMatrix RingMatrix::operator-(const RingMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw UserError("matrix shape mismatch");
    RingMatrix r(ring_, rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = ring_.sub(a_[i], o.a_[i]);
    return r;
}

RingMatrix RingMatrix::operator*(const RingMatrix& o) const {
    if (cols_ != o.rows_) throw UserError("matrix shape mismatch");
    RingMatrix r(ring_, rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int l = 0; l < cols_; ++l) {
            const RatF& x = at(i, l);
            if (x.is_zero()) continue;
            for (int j = 0; j < o.cols_; ++j) {
                if (o.at(l, j).is_zero()) continue;
                r.set(i, j, ring_.add(r.at(i, j), ring_.mul(x, o.at(l, j))));
            }
        }
    return r;
}

bool RingMatrix::operator==(const RingMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (size_t i = 0; i < a_.size(); ++i)
        if (!ring_.eq(a_[i], o.a_[i])) return false;
    return true;
}

RingMatrix RingMatrix::scale(const RatF& s) const {
    RingMatrix r(ring_, rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = ring_.mul(a_[i], s);
    return r;
}

RingMatrix RingMatrix::frobenius(std::int64_t j) const {
    RingMatrix r(ring_, rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = ring_.frobenius(a_[i], j);
    return r;
}

RatF RingMatrix::trace() const {
    RatF t = ring_.zero();
    for (int i = 0; i < size(); ++i) t = ring_.add(t, at(i, i));
    return t;
}

bool RingMatrix::is_zero() const {
    for (const RatF& x : a_)
        if (!x.is_zero()) return false;
    return true;
}

RingMatrix twisted_power(const RingMatrix& M, int n) {
    int r = M.size();
    if (n < 0) throw UserError("negative twisted power");
    RingMatrix acc = RingMatrix::identity(M.ring(), r);
    // acc_(i+1) = M * acc_i^(sigma), so acc_n = M M^(sigma) ... M^(sigma^(n-1))
    for (int i = 0; i < n; ++i) acc = M * acc.frobenius(1);
    return acc;
}

std::vector<RatF> char_series_coeffs(const RingMatrix& A) {
    const CoeffRing& ring = A.ring();
    int n = A.size();
    std::vector<RatF> C{ring.one()};
    if (n == 0) return C;
    C.push_back(ring.neg(A.at(0, 0)));
    for (int r = 2; r <= n; ++r) {
        // Toeplitz column: t_0 = 1, t_1 = -a_(r-1,r-1), t_k = -R A^(k-2) S
        // with R the last row, S the last column, A the leading block.
        std::vector<RatF> t(size_t(r + 1), ring.zero());
        t[0] = ring.one();
        t[1] = ring.neg(A.at(r - 1, r - 1));
        std::vector<RatF> w(size_t(r - 1));
        for (int i = 0; i < r - 1; ++i) w[size_t(i)] = A.at(i, r - 1);
        for (int k = 2; k <= r; ++k) {
            RatF dot = ring.zero();
            for (int i = 0; i < r - 1; ++i)
                dot = ring.add(dot, ring.mul(A.at(r - 1, i), w[size_t(i)]));
            t[size_t(k)] = ring.neg(dot);
            if (k < r) {
                std::vector<RatF> w2(size_t(r - 1), ring.zero());
                for (int i = 0; i < r - 1; ++i)
                    for (int j = 0; j < r - 1; ++j)
                        w2[size_t(i)] = ring.add(
                            w2[size_t(i)], ring.mul(A.at(i, j), w[size_t(j)]));
                w = std::move(w2);
            }
        }
        std::vector<RatF> C2(size_t(r + 1), ring.zero());
        for (int i = 0; i <= r; ++i)
            for (int j = 0; j < int(C.size()); ++j) {
                int k = i - j;
                if (k < 0 || k > r) continue;
                C2[size_t(i)] = ring.add(C2[size_t(i)],
                                         ring.mul(t[size_t(k)], C[size_t(j)]));
            }
        C = std::move(C2);
    }
    return C;
}

RatF ring_det(const RingMatrix& A) {
    std::vector<RatF> c = char_series_coeffs(A);
    RatF d = c.back();
    if (A.size() % 2 == 1) d = A.ring().neg(d);
    return d;
}

// ---------------------------------------------------------------------------
// Dense matrices over the tower k (internal)

namespace {

struct FFMatrix {
    const FieldTower* tw = nullptr;
    int rows = 0, cols = 0;
    std::vector<FFElem> a;

    FFMatrix() = default;
    FFMatrix(const FieldTower* t, int r, int c)
        : tw(t), rows(r), cols(c), a(size_t(r) * size_t(c), ff_zero(t)) {}

    const FFElem& at(int i, int j) const { return a[size_t(i) * size_t(cols) + size_t(j)]; }
    FFElem& at(int i, int j) { return a[size_t(i) * size_t(cols) + size_t(j)]; }

    static FFMatrix identity(const FieldTower* t, int n) {
        FFMatrix m(t, n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = ff_one(t);
        return m;
    }

    FFMatrix mul(const FFMatrix& o) const {
        FFMatrix r(tw, rows, o.cols);
        for (int i = 0; i < rows; ++i)
            for (int l = 0; l < cols; ++l) {
                const FFElem& x = at(i, l);
                if (x.is_zero()) continue;
                for (int j = 0; j < o.cols; ++j) {
                    if (o.at(l, j).is_zero()) continue;
                    r.at(i, j) = r.at(i, j) + x * o.at(l, j);
                }
            }
        return r;
    }

    FFMatrix frob(std::int64_t j) const {
        FFMatrix r(tw, rows, cols);
        for (size_t i = 0; i < a.size(); ++i) r.a[i] = frobenius_pow(a[i], j);
        return r;
    }

    std::vector<FFElem> apply(const std::vector<FFElem>& v) const {
        std::vector<FFElem> r(size_t(rows), ff_zero(tw));
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                if (!at(i, j).is_zero() && !v[size_t(j)].is_zero())
                    r[size_t(i)] = r[size_t(i)] + at(i, j) * v[size_t(j)];
        return r;
    }

    bool operator==(const FFMatrix& o) const {
        return rows == o.rows && cols == o.cols && a == o.a;
    }

    bool is_zero() const {
        for (const FFElem& x : a)
            if (!x.is_zero()) return false;
        return true;
    }
};

FFMatrix concat_cols(const FFMatrix& a, const FFMatrix& b) {
    FFMatrix r(a.tw, a.rows, a.cols + b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int j = 0; j < a.cols; ++j) r.at(i, j) = a.at(i, j);
        for (int j = 0; j < b.cols; ++j) r.at(i, a.cols + j) = b.at(i, j);
    }
    return r;
}

// Row-reduce in place; returns pivot column indices.
std::vector<int> rref_inplace(FFMatrix& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols && row < m.rows; ++col) {
        int piv = -1;
        for (int i = row; i < m.rows; ++i)
            if (!m.at(i, col).is_zero()) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != row)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(row, j));
        FFElem s = ff_inv(m.at(row, col));
        for (int j = 0; j < m.cols; ++j) m.at(row, j) = m.at(row, j) * s;
        for (int i = 0; i < m.rows; ++i) {
            if (i == row) continue;
            FFElem c = m.at(i, col);
            if (c.is_zero()) continue;
            for (int j = 0; j < m.cols; ++j)
                m.at(i, j) = m.at(i, j) - c * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

int ff_rank(const FFMatrix& m) {
    FFMatrix c = m;
    return int(rref_inplace(c).size());
}

// Columns of m indexed by the pivot columns of its reduced form.
FFMatrix column_space_basis(const FFMatrix& m) {
    FFMatrix c = m;
    std::vector<int> piv = rref_inplace(c);
    FFMatrix r(m.tw, m.rows, int(piv.size()));
    for (int j = 0; j < int(piv.size()); ++j)
        for (int i = 0; i < m.rows; ++i) r.at(i, j) = m.at(i, piv[size_t(j)]);
    return r;
}

FFMatrix kernel_basis(const FFMatrix& m) {
    FFMatrix c = m;
    std::vector<int> piv = rref_inplace(c);
    std::vector<bool> is_piv(size_t(m.cols), false);
    for (int p : piv) is_piv[size_t(p)] = true;
    std::vector<int> free_cols;
    for (int j = 0; j < m.cols; ++j)
        if (!is_piv[size_t(j)]) free_cols.push_back(j);
    FFMatrix r(m.tw, m.cols, int(free_cols.size()));
    for (int idx = 0; idx < int(free_cols.size()); ++idx) {
        int fc = free_cols[size_t(idx)];
        r.at(fc, idx) = ff_one(m.tw);
        for (int t = 0; t < int(piv.size()); ++t)
            r.at(piv[size_t(t)], idx) = -c.at(t, fc);
    }
    return r;
}

FFMatrix ff_inverse(const FFMatrix& m) {
    if (m.rows != m.cols) throw UserError("inverse of non-square matrix");
    FFMatrix aug = concat_cols(m, FFMatrix::identity(m.tw, m.rows));
    std::vector<int> piv = rref_inplace(aug);
    if (int(piv.size()) != m.rows) throw MathError("singular matrix over k");
    FFMatrix r(m.tw, m.rows, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.rows; ++j) r.at(i, j) = aug.at(i, m.cols + j);
    return r;
}

// One exact solution of A x = b, or nullopt when inconsistent; free
// variables are set to zero.
std::optional<std::vector<FFElem>> ff_solve(const FFMatrix& A,
                                            const std::vector<FFElem>& b) {
    FFMatrix rhs(A.tw, A.rows, 1);
    for (int i = 0; i < A.rows; ++i) rhs.at(i, 0) = b[size_t(i)];
    FFMatrix aug = concat_cols(A, rhs);
    std::vector<int> piv = rref_inplace(aug);
    for (int p : piv)
        if (p == A.cols) return std::nullopt;
    std::vector<FFElem> x(size_t(A.cols), ff_zero(A.tw));
    for (int t = 0; t < int(piv.size()); ++t)
        x[size_t(piv[size_t(t)])] = aug.at(t, A.cols);
    return x;
}

// ---------------------------------------------------------------------------
// Flattening a module over R = k tensor B to a k-vector space

struct Flat {
    const TauModule* M = nullptr;
    const FieldTower* k = nullptr;
    int len = 0;                 // length of B over F_q
    std::vector<int> dims, offs; // per-generator block dimension and offset
    int D = 0;                   // total k-dimension
    std::vector<Poly> eff;       // per-generator annihilator over k; zero over a base field
    FFMatrix tau;                // matrix of tau in the flat basis
};

// Canonical representative of an entry in row i, reduced modulo that
// generator's annihilator.
Poly row_rep(const Flat& fl, int i, const RatF& entry) {
    if (!entry.is_poly()) throw UserError("non-polynomial entry in finite module");
    if (fl.eff[size_t(i)].is_zero()) return entry.num();
    return poly_rem(entry.num(), fl.eff[size_t(i)]);
}

std::vector<FFElem> flatten_rvec(const Flat& fl, const std::vector<RatF>& v) {
    std::vector<FFElem> out(size_t(fl.D), ff_zero(fl.k));
    for (int i = 0; i < int(v.size()); ++i) {
        Poly rep = row_rep(fl, i, v[size_t(i)]);
        if (rep.degree() >= fl.dims[size_t(i)])
            throw TheoryViolation("flattened entry exceeds its block");
        for (int u = 0; u <= rep.degree(); ++u)
            out[size_t(fl.offs[size_t(i)] + u)] = rep.coeff(u);
    }
    return out;
}

std::vector<RatF> unflatten(const Flat& fl, const std::vector<FFElem>& v) {
    std::vector<RatF> out;
    out.reserve(size_t(fl.M->rank()));
    for (int j = 0; j < fl.M->rank(); ++j) {
        std::vector<FFElem> c(v.begin() + fl.offs[size_t(j)],
                              v.begin() + fl.offs[size_t(j)] + fl.dims[size_t(j)]);
        out.push_back(RatF(Poly(fl.k, std::move(c))));
    }
    return out;
}

// k-matrix of the multiplication action of a matrix over R.
FFMatrix flatten_map(const Flat& fl, const RingMatrix& psi) {
    const CoeffRing& R = fl.M->ext_ring();
    FFMatrix out(fl.k, fl.D, fl.D);
    RatF t = rf_T(fl.k);
    for (int j = 0; j < psi.cols(); ++j) {
        std::vector<RatF> col(size_t(psi.rows()));
        for (int i = 0; i < psi.rows(); ++i) col[size_t(i)] = psi.at(i, j);
        for (int u = 0; u < fl.dims[size_t(j)]; ++u) {
            std::vector<FFElem> fc = flatten_rvec(fl, col);
            for (int r = 0; r < fl.D; ++r) out.at(r, fl.offs[size_t(j)] + u) = fc[size_t(r)];
            if (u + 1 < fl.dims[size_t(j)])
                for (int i = 0; i < psi.rows(); ++i)
                    col[size_t(i)] = R.mul(col[size_t(i)], t);
        }
    }
    return out;
}

Flat make_flat(const TauModule& M) {
    const CoeffRing& B = M.coeff_ring();
    if (B.kind() == RingKind::RationalField)
        throw UserError("operation requires a finite-length coefficient ring");
    Flat fl;
    fl.M = &M;
    fl.k = M.tower();
    fl.len = B.length_over_fq();
    Poly fk = B.kind() == RingKind::Quotient ? embed_poly(B.modulus(), fl.k)
                                             : poly_zero(fl.k);
    for (int j = 0; j < M.rank(); ++j) {
        Poly e = fk;
        if (!M.annihilators().empty()) e = embed_poly(M.annihilators()[size_t(j)], fl.k);
        fl.offs.push_back(fl.D);
        fl.dims.push_back(e.is_zero() ? 1 : e.degree());
        fl.eff.push_back(e);
        fl.D += fl.dims.back();
    }
    fl.tau = flatten_map(fl, M.matrix());
    return fl;
}

// In the flat basis tau acts as v -> tau_matrix * sigma(v) with sigma the
// coordinatewise q-power Frobenius, so composites accumulate as
// acc_(n+1) = tau_matrix * acc_n^(sigma).
FFMatrix flat_twisted_step(const FFMatrix& acc, const FFMatrix& tau) {
    return tau.mul(acc.frob(1));
}

// Projector onto the summand where tau is bijective, as a k-linear (and in
// fact R-linear) idempotent on the flat space. The exponent n0 is a multiple
// of m, so tau^n0 is an ordinary linear map and its image and kernel give
// the decomposition.
struct FittingData {
    int n0 = 0;
    FFMatrix pi;
};

FittingData fitting_projector(const Flat& fl) {
    const TauModule& M = *fl.M;
    int m = int(M.tower()->m);
    FittingData fd;
    fd.n0 = std::max(1, M.rank() * m * fl.len);
    if (fl.D == 0) {
        fd.pi = FFMatrix(fl.k, 0, 0);
        return fd;
    }
    FFMatrix acc = fl.tau;
    for (int i = 1; i < fd.n0; ++i) acc = flat_twisted_step(acc, fl.tau);
    FFMatrix next = acc;
    for (int i = 0; i < m; ++i) next = flat_twisted_step(next, fl.tau);
    if (ff_rank(acc) != ff_rank(next) ||
        ff_rank(concat_cols(acc, next)) != ff_rank(acc))
        throw TheoryViolation("image of tau powers failed to stabilize");
    FFMatrix U = column_space_basis(acc);
    FFMatrix W = kernel_basis(acc);
    FFMatrix C = concat_cols(U, W);
    if (C.cols != fl.D) throw TheoryViolation("fitting decomposition is not direct");
    FFMatrix Cinv = ff_inverse(C);
    FFMatrix top(fl.k, U.cols, fl.D);
    for (int i = 0; i < U.cols; ++i)
        for (int j = 0; j < fl.D; ++j) top.at(i, j) = Cinv.at(i, j);
    fd.pi = U.mul(top);
    if (!(fd.pi.mul(fd.pi) == fd.pi))
        throw TheoryViolation("fitting projector is not idempotent");
    if (!(fd.pi.mul(acc) == acc))
        throw TheoryViolation("fitting projector does not fix the stable image");
    if (!(fl.tau.mul(fd.pi.frob(1)) == fd.pi.mul(fl.tau)))
        throw TheoryViolation("fitting projector does not commute with tau");
    return fd;
}

// R-matrix of a k-linear map that is expected to be R-linear; verified by
// re-flattening.
RingMatrix readoff_R(const Flat& fl, const FFMatrix& psi) {
    int r = fl.M->rank();
    RingMatrix out(fl.M->ext_ring(), r, r);
    for (int j = 0; j < r; ++j) {
        if (fl.dims[size_t(j)] == 0) continue;
        std::vector<FFElem> e(size_t(fl.D), ff_zero(fl.k));
        e[size_t(fl.offs[size_t(j)])] = ff_one(fl.k);
        std::vector<RatF> col = unflatten(fl, psi.apply(e));
        for (int i = 0; i < r; ++i) out.set(i, j, col[size_t(i)]);
    }
    if (!(flatten_map(fl, out) == psi))
        throw TheoryViolation("map is not linear over the coefficient ring");
    return out;
}

RatF descend_to_base(const TauModule& M, const RatF& x) {
    const CoeffRing& R = M.ext_ring();
    if (!R.is_frobenius_invariant(x))
        throw TheoryViolation("trace is not Frobenius invariant");
    return M.coeff_ring().reduce(R.map_down(x));
}

// Reduced row echelon pair (reduced matrix, pivot columns) over a field ring.
std::pair<RingMatrix, std::vector<int>> ring_rref(const RingMatrix& A) {
    const CoeffRing& R = A.ring();
    RingMatrix c = A;
    std::vector<int> piv;
    int row = 0;
    for (int col = 0; col < c.cols() && row < c.rows(); ++col) {
        int pv = -1;
        for (int i = row; i < c.rows(); ++i)
            if (!c.at(i, col).is_zero()) { pv = i; break; }
        if (pv < 0) continue;
        if (pv != row)
            for (int j = 0; j < c.cols(); ++j) {
                RatF t = c.at(pv, j);
                c.set(pv, j, c.at(row, j));
                c.set(row, j, t);
            }
        RatF s = R.inv(c.at(row, col));
        for (int j = 0; j < c.cols(); ++j) c.set(row, j, R.mul(c.at(row, j), s));
        for (int i = 0; i < c.rows(); ++i) {
            if (i == row) continue;
            RatF f = c.at(i, col);
            if (f.is_zero()) continue;
            for (int j = 0; j < c.cols(); ++j)
                c.set(i, j, R.sub(c.at(i, j), R.mul(f, c.at(row, j))));
        }
        piv.push_back(col);
        ++row;
    }
    return {c, piv};
}

// Fitting projector over a field coefficient ring, used for the rational
// function field where flattening is unavailable. The exponent is a multiple
// of m, so the twisted power is an honest linear map.
RingMatrix field_fitting_projector(const TauModule& M) {
    const CoeffRing& R = M.ext_ring();
    int r = M.rank();
    int m = int(M.tower()->m);
    int s = std::max(1, r) * m;
    RingMatrix Ms = twisted_power(M.matrix(), s);
    RingMatrix Mnext = twisted_power(M.matrix(), s + m);
    auto [red, piv] = ring_rref(Ms);
    auto pivnext = ring_rref(Mnext).second;
    RingMatrix both(R, r, 2 * r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            both.set(i, j, Ms.at(i, j));
            both.set(i, r + j, Mnext.at(i, j));
        }
    if (piv.size() != pivnext.size() ||
        ring_rref(both).second.size() != piv.size())
        throw TheoryViolation("image of tau powers failed to stabilize");
    int rk = int(piv.size());
    RingMatrix C(R, r, r);
    for (int j = 0; j < rk; ++j)
        for (int i = 0; i < r; ++i) C.set(i, j, Ms.at(i, piv[size_t(j)]));
    std::vector<bool> isp(size_t(r), false);
    for (int p : piv) isp[size_t(p)] = true;
    int idx = rk;
    for (int fc = 0; fc < r; ++fc) {
        if (isp[size_t(fc)]) continue;
        C.set(fc, idx, R.one());
        for (int t2 = 0; t2 < rk; ++t2)
            C.set(piv[size_t(t2)], idx, R.neg(red.at(t2, fc)));
        ++idx;
    }
    if (idx != r) throw TheoryViolation("fitting decomposition is not direct");
    RingMatrix aug(R, r, 2 * r);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) aug.set(i, j, C.at(i, j));
        aug.set(i, r + i, R.one());
    }
    auto [augred, augpiv] = ring_rref(aug);
    if (int(augpiv.size()) != r) throw TheoryViolation("fitting basis is singular");
    RingMatrix Utop(R, rk, r);
    for (int i = 0; i < rk; ++i)
        for (int j = 0; j < r; ++j) Utop.set(i, j, augred.at(i, r + j));
    RingMatrix U(R, r, rk);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < rk; ++j) U.set(i, j, C.at(i, j));
    RingMatrix pi = U * Utop;
    if (!(pi * pi == pi))
        throw TheoryViolation("fitting projector is not idempotent");
    if (!(M.matrix() * pi.frobenius(1) == pi * M.matrix()))
        throw TheoryViolation("fitting projector does not commute with tau");
    return pi;
}

}  // namespace

// ---------------------------------------------------------------------------
// TauModule

TauModule TauModule::make(TowerPtr k, const CoeffRing& coeff_ring,
                          const RingMatrix& matrix, std::vector<Poly> annihilators) {
    if (!k) throw UserError("null tower");
    if (coeff_ring.tower() != k->fq())
        throw UserError("coefficient ring must be given over F_q");
    TauModule M;
    M.k_ = k;
    M.base_ = coeff_ring;
    M.ext_ = coeff_ring.extended_to(k);
    if (!ring_eq(matrix.ring(), M.ext_))
        throw UserError("matrix ring must be the coefficient ring extended to k");
    if (matrix.rows() != matrix.cols()) throw UserError("tau matrix must be square");
    M.matrix_ = matrix;
    if (!annihilators.empty()) {
        if (coeff_ring.kind() != RingKind::Quotient)
            throw UserError("annihilators require a quotient coefficient ring");
        if (int(annihilators.size()) != matrix.rows())
            throw UserError("one annihilator per generator required");
        const Poly& f = coeff_ring.modulus();
        for (Poly& d : annihilators) {
            if (d.tower() != coeff_ring.tower())
                throw UserError("annihilators must be given over F_q");
            if (d.is_zero()) { d = f; continue; }
            if (!d.is_monic()) throw UserError("annihilators must be monic");
            if (!poly_rem(f, d).is_zero())
                throw UserError("annihilator must divide the quotient modulus");
        }
        for (int i = 0; i < matrix.rows(); ++i) {
            Poly di = embed_poly(annihilators[size_t(i)], k.get());
            for (int j = 0; j < matrix.cols(); ++j) {
                Poly dj = embed_poly(annihilators[size_t(j)], k.get());
                if (!poly_rem(matrix.at(i, j).num() * dj, di).is_zero())
                    throw UserError("tau is not well defined on the quotients");
            }
        }
        M.ann_ = std::move(annihilators);
    }
    return M;
}

RingMatrix tau_power_matrix(const TauModule& M, int n) {
    return twisted_power(M.matrix(), n);
}

bool is_nilpotent(const TauModule& M) {
    if (M.rank() == 0) return true;
    int m = int(M.tower()->m);
    if (M.coeff_ring().kind() == RingKind::RationalField)
        return twisted_power(M.matrix(), M.rank() * m).is_zero();
    Flat fl = make_flat(M);
    if (fl.D == 0) return true;
    int n0 = M.rank() * m * fl.len;
    FFMatrix acc = fl.tau;
    for (int i = 1; i < n0; ++i) acc = flat_twisted_step(acc, fl.tau);
    return acc.is_zero();
}

RatF trace_tau_n(const TauModule& M, int n) {
    if (n < 1) throw UserError("trace exponent must be positive");
    int m = int(M.tower()->m);
    if (n % m != 0) throw UserError("trace exponent must be a multiple of m");
    if (!M.is_free()) throw UserError("trace requires a free underlying module");
    const CoeffRing& B = M.coeff_ring();
    if (M.rank() == 0) return B.zero();
    if (B.kind() == RingKind::RationalField) {
        RingMatrix Mn = twisted_power(M.matrix(), n);
        RatF tr = M.ext_ring().is_unit(ring_det(M.matrix()))
                      ? Mn.trace()
                      : (Mn * field_fitting_projector(M)).trace();
        return descend_to_base(M, tr);
    }
    Flat fl = make_flat(M);
    FittingData fd = fitting_projector(fl);
    FFMatrix acc = fl.tau;
    for (int i = 1; i < n; ++i) acc = flat_twisted_step(acc, fl.tau);
    RingMatrix Tn = readoff_R(fl, acc.mul(fd.pi));
    return descend_to_base(M, Tn.trace());
}

std::vector<RatF> det_char_B_coeffs(const TauModule& M) {
    const CoeffRing& B = M.coeff_ring();
    if (B.kind() == RingKind::RationalField)
        throw UserError("characteristic series requires a finite-length ring");
    if (!M.is_free())
        throw UserError("characteristic series requires a free underlying module");
    int r = M.rank();
    int m = int(M.tower()->m);
    if (r == 0) return {B.one()};
    Flat fl = make_flat(M);
    FittingData fd = fitting_projector(fl);
    const FieldTower* k = M.tower();

    // Restriction of scalars to B with basis x^s e_j (s < m, j < r): block
    // ((i,s'),(j,s)) holds the x^s' component of tau(pi(x^s e_j)).
    int nB = m * r;
    RingMatrix PsiB(B, nB, nB);
    FFElem x = ff_gen(k);
    for (int j = 0; j < r; ++j) {
        FFElem xs = ff_one(k);
        for (int s = 0; s < m; ++s) {
            std::vector<FFElem> v(size_t(fl.D), ff_zero(k));
            v[size_t(fl.offs[size_t(j)])] = xs;
            std::vector<FFElem> w = fd.pi.apply(v);
            for (FFElem& c : w) c = frobenius_q(c);
            w = fl.tau.apply(w);
            std::vector<RatF> img = unflatten(fl, w);
            for (int i = 0; i < r; ++i) {
                if (!img[size_t(i)].is_poly())
                    throw TheoryViolation("non-polynomial restriction entry");
                const Poly& rep = img[size_t(i)].num();
                std::vector<std::vector<FFElem>> parts{size_t(m), std::vector<FFElem>{}};
                for (int u = 0; u <= rep.degree(); ++u) {
                    std::vector<FFElem> co = fq_coords(rep.coeff(u));
                    for (int s2 = 0; s2 < m; ++s2)
                        parts[size_t(s2)].push_back(co[size_t(s2)]);
                }
                for (int s2 = 0; s2 < m; ++s2) {
                    Poly comp(B.tower(), parts[size_t(s2)]);
                    if (!comp.is_zero())
                        PsiB.set(i * m + s2, j * m + s, RatF(comp));
                }
            }
            xs = xs * x;
        }
    }
    std::vector<RatF> out = char_series_coeffs(PsiB);

    // Cross-check: the same series via det over k tensor B of 1 - t^m tau^m
    // restricted to the bijective summand.
    FFMatrix accm = fl.tau;
    for (int i = 1; i < m; ++i) accm = flat_twisted_step(accm, fl.tau);
    RingMatrix Tm = readoff_R(fl, accm.mul(fd.pi));
    std::vector<RatF> cR = char_series_coeffs(Tm);
    std::vector<RatF> expanded(size_t(m) * (cR.size() - 1) + 1, B.zero());
    for (size_t i = 0; i < cR.size(); ++i)
        expanded[i * size_t(m)] = descend_to_base(M, cR[i]);
    size_t width = std::max(out.size(), expanded.size());
    for (size_t i = 0; i < width; ++i) {
        RatF a = i < out.size() ? out[i] : B.zero();
        RatF b = i < expanded.size() ? expanded[i] : B.zero();
        if (!B.eq(a, b))
            throw TheoryViolation(
                "scalar-restriction determinant disagrees with the twisted power determinant");
    }
    return out;
}

TruncSeries det_char_B(const TauModule& M, int N) {
    return TruncSeries(M.coeff_ring(), N, det_char_B_coeffs(M));
}

TruncSeries l_series_points(const std::vector<std::pair<int, TauModule>>& points,
                            int N) {
    if (points.empty()) throw UserError("empty point list");
    const CoeffRing& B = points.front().second.coeff_ring();
    for (const auto& [d, M] : points) {
        if (!ring_eq(M.coeff_ring(), B)) throw UserError("coefficient ring mismatch");
        if (d != int(M.tower()->m))
            throw UserError("point degree must match its residue field");
    }
    TruncSeries l(B, N);
    for (const auto& [d, M] : points) {
        if (M.rank() == 0) continue;
        Flat fl = make_flat(M);
        FittingData fd = fitting_projector(fl);
        FFMatrix acc = FFMatrix::identity(fl.k, fl.D);
        for (int n = 1; n <= N; ++n) {
            acc = flat_twisted_step(acc, fl.tau);
            if (n % d != 0) continue;
            RingMatrix Tn = readoff_R(fl, acc.mul(fd.pi));
            RatF tr = descend_to_base(M, Tn.trace());
            l.set_coeff(n, B.add(l.coeff(n), rf_scale_int(tr, d)));
        }
    }
    TruncSeries prod_inv(B, N);
    prod_inv.set_coeff(0, B.one());
    for (const auto& [d, M] : points) {
        (void)d;
        prod_inv = prod_inv * series_inverse(det_char_B(M, N));
    }
    if (!(series_dlog_series(prod_inv) == l))
        throw TheoryViolation("l-series disagrees with dlog of the L-function");
    return l;
}

// ---------------------------------------------------------------------------
// Smith normal form over k[T] (internal)

namespace {

struct SnfResult {
    std::vector<Poly> diag;                // monic or zero, divisibility chain
    std::vector<std::vector<Poly>> uinv;   // inverse of the row transform
};

// U A V = D; only U^{-1} is tracked, column operations need no bookkeeping.
SnfResult smith_form(std::vector<std::vector<Poly>> A, const FieldTower* k) {
    int rows = int(A.size());
    int cols = rows ? int(A[0].size()) : 0;
    SnfResult res;
    res.uinv.assign(size_t(rows), std::vector<Poly>(size_t(rows), poly_zero(k)));
    for (int i = 0; i < rows; ++i) res.uinv[size_t(i)][size_t(i)] = poly_one(k);

    auto row_sub = [&](int i, int j, const Poly& q) {
        // row_i -= q row_j; uinv column j += q column i
        for (int c = 0; c < cols; ++c)
            A[size_t(i)][size_t(c)] = A[size_t(i)][size_t(c)] - q * A[size_t(j)][size_t(c)];
        for (int rr = 0; rr < rows; ++rr)
            res.uinv[size_t(rr)][size_t(j)] =
                res.uinv[size_t(rr)][size_t(j)] + q * res.uinv[size_t(rr)][size_t(i)];
    };
    auto row_swap = [&](int i, int j) {
        std::swap(A[size_t(i)], A[size_t(j)]);
        for (int rr = 0; rr < rows; ++rr)
            std::swap(res.uinv[size_t(rr)][size_t(i)], res.uinv[size_t(rr)][size_t(j)]);
    };
    auto row_add = [&](int i, int j) {
        // row_i += row_j; uinv column j -= column i
        for (int c = 0; c < cols; ++c)
            A[size_t(i)][size_t(c)] = A[size_t(i)][size_t(c)] + A[size_t(j)][size_t(c)];
        for (int rr = 0; rr < rows; ++rr)
            res.uinv[size_t(rr)][size_t(j)] =
                res.uinv[size_t(rr)][size_t(j)] - res.uinv[size_t(rr)][size_t(i)];
    };
    auto col_sub = [&](int j, int jc, const Poly& q) {
        for (int rr = 0; rr < rows; ++rr)
            A[size_t(rr)][size_t(j)] = A[size_t(rr)][size_t(j)] - q * A[size_t(rr)][size_t(jc)];
    };
    auto col_swap = [&](int j, int jc) {
        for (int rr = 0; rr < rows; ++rr)
            std::swap(A[size_t(rr)][size_t(j)], A[size_t(rr)][size_t(jc)]);
    };
    auto row_make_monic = [&](int i) {
        FFElem c = A[size_t(i)][size_t(i)].leading();
        FFElem s = ff_inv(c);
        for (int cc = 0; cc < cols; ++cc)
            A[size_t(i)][size_t(cc)] = poly_scale(s, A[size_t(i)][size_t(cc)]);
        for (int rr = 0; rr < rows; ++rr)
            res.uinv[size_t(rr)][size_t(i)] = poly_scale(c, res.uinv[size_t(rr)][size_t(i)]);
    };

    int steps = std::min(rows, cols);
    for (int t = 0; t < steps; ++t) {
        for (;;) {
            int bi = -1, bj = -1, bd = -1;
            for (int i = t; i < rows; ++i)
                for (int j = t; j < cols; ++j) {
                    int d = A[size_t(i)][size_t(j)].degree();
                    if (d >= 0 && (bd < 0 || d < bd)) { bi = i; bj = j; bd = d; }
                }
            if (bi < 0) break;
            if (bi != t) row_swap(t, bi);
            if (bj != t) col_swap(t, bj);
            bool clean = true;
            for (int i = t + 1; i < rows; ++i) {
                if (A[size_t(i)][size_t(t)].is_zero()) continue;
                auto [q, rem] = poly_divmod(A[size_t(i)][size_t(t)], A[size_t(t)][size_t(t)]);
                row_sub(i, t, q);
                if (!rem.is_zero()) clean = false;
            }
            for (int j = t + 1; j < cols; ++j) {
                if (A[size_t(t)][size_t(j)].is_zero()) continue;
                auto [q, rem] = poly_divmod(A[size_t(t)][size_t(j)], A[size_t(t)][size_t(t)]);
                col_sub(j, t, q);
                if (!rem.is_zero()) clean = false;
            }
            if (!clean) continue;
            bool divides = true;
            for (int i = t + 1; i < rows && divides; ++i)
                for (int j = t + 1; j < cols && divides; ++j)
                    if (!poly_rem(A[size_t(i)][size_t(j)], A[size_t(t)][size_t(t)]).is_zero()) {
                        row_add(t, i);
                        divides = false;
                    }
            if (divides) break;
        }
        if (!A[size_t(t)][size_t(t)].is_zero()) row_make_monic(t);
    }
    for (int i = 0; i < steps; ++i) res.diag.push_back(A[size_t(i)][size_t(i)]);
    return res;
}

// Elementary divisors of the image of an idempotent on the underlying module,
// presented as the cokernel of [1 - eps | annihilator relations] over k[T].
struct ImagePresentation {
    std::vector<Poly> divisors;
    SnfResult snf;
    Poly fk;
};

ImagePresentation image_presentation(const Flat& fl, const RingMatrix& epsR) {
    const TauModule& M = *fl.M;
    const FieldTower* k = M.tower();
    if (M.coeff_ring().kind() != RingKind::Quotient)
        throw UserError("presentation requires a quotient coefficient ring");
    Poly fk = embed_poly(M.coeff_ring().modulus(), k);
    int r = M.rank();
    const CoeffRing& R = M.ext_ring();
    RingMatrix one_minus = RingMatrix::identity(R, r) - epsR;
    std::vector<std::vector<Poly>> A(size_t(r), std::vector<Poly>(size_t(2 * r), poly_zero(k)));
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) A[size_t(i)][size_t(j)] = one_minus.at(i, j).num();
        A[size_t(i)][size_t(r + i)] = fl.eff[size_t(i)];
    }
    ImagePresentation pres;
    pres.fk = fk;
    pres.snf = smith_form(std::move(A), k);
    for (const Poly& d : pres.snf.diag) {
        if (d.is_zero())
            throw TheoryViolation("unexpected free part in a finite-length module");
        if (d.degree() > 0 && !poly_rem(fk, d).is_zero())
            throw TheoryViolation("elementary divisor does not divide the modulus");
        pres.divisors.push_back(d);
    }
    return pres;
}

// Generators of im(eps) as a free module; valid when every elementary divisor
// is a unit or the full modulus.
std::vector<std::vector<RatF>> free_generators(const Flat& fl, const RingMatrix& epsR,
                                               const ImagePresentation& pres) {
    const TauModule& M = *fl.M;
    const CoeffRing& R = M.ext_ring();
    int r = M.rank();
    std::vector<std::vector<RatF>> gens;
    for (int i = 0; i < int(pres.divisors.size()); ++i) {
        const Poly& d = pres.divisors[size_t(i)];
        if (d.degree() == 0) continue;
        if (!(d == pres.fk))
            throw TheoryViolation("summand is not free over the coefficient ring");
        std::vector<RatF> g(size_t(r), R.zero());
        for (int row = 0; row < r; ++row)
            for (int l = 0; l < r; ++l)
                g[size_t(row)] = R.add(
                    g[size_t(row)],
                    R.mul(epsR.at(row, l),
                          R.reduce(RatF(pres.snf.uinv[size_t(l)][size_t(i)]))));
        gens.push_back(std::move(g));
    }
    return gens;
}

// Solve G X = target over R through the flat k-structure; the columns of G
// generate a free submodule. Throws when a target column is outside the span.
RingMatrix solve_in_span(const Flat& fl, const std::vector<std::vector<RatF>>& gens,
                         const RingMatrix& target) {
    const TauModule& M = *fl.M;
    const CoeffRing& R = M.ext_ring();
    const FieldTower* k = M.tower();
    int len = fl.len;
    int ng = int(gens.size());
    FFMatrix S(k, fl.D, ng * len);
    RatF t = rf_T(k);
    for (int i = 0; i < ng; ++i) {
        std::vector<RatF> cur = gens[size_t(i)];
        for (int u = 0; u < len; ++u) {
            std::vector<FFElem> fc = flatten_rvec(fl, cur);
            for (int rr = 0; rr < fl.D; ++rr) S.at(rr, i * len + u) = fc[size_t(rr)];
            if (u + 1 < len)
                for (auto& cc : cur) cc = R.mul(cc, t);
        }
    }
    RingMatrix X(R, ng, target.cols());
    for (int j = 0; j < target.cols(); ++j) {
        std::vector<RatF> col(size_t(target.rows()));
        for (int i = 0; i < target.rows(); ++i) col[size_t(i)] = target.at(i, j);
        auto sol = ff_solve(S, flatten_rvec(fl, col));
        if (!sol) throw TheoryViolation("target vector escapes the submodule");
        for (int i = 0; i < ng; ++i) {
            std::vector<FFElem> coeffs(sol->begin() + i * len,
                                       sol->begin() + (i + 1) * len);
            X.set(i, j, RatF(Poly(k, std::move(coeffs))));
        }
    }
    return X;
}

// Submodule cut out by an idempotent commuting with tau, as a free TauModule
// with its inclusion.
SubmoduleResult submodule_from_idempotent(const TauModule& M, const RingMatrix& epsR) {
    const CoeffRing& B = M.coeff_ring();
    const CoeffRing& R = M.ext_ring();
    if (B.kind() == RingKind::RationalField)
        throw UserError("submodule extraction requires a finite-length ring");
    Flat fl = make_flat(M);
    std::vector<std::vector<RatF>> gens;
    if (B.kind() == RingKind::BaseField) {
        FFMatrix E = flatten_map(fl, epsR);
        FFMatrix U = column_space_basis(E);
        for (int j = 0; j < U.cols; ++j) {
            std::vector<FFElem> col(size_t(fl.D));
            for (int i = 0; i < fl.D; ++i) col[size_t(i)] = U.at(i, j);
            gens.push_back(unflatten(fl, col));
        }
    } else {
        ImagePresentation pres = image_presentation(fl, epsR);
        gens = free_generators(fl, epsR, pres);
    }
    RingMatrix G(R, M.rank(), int(gens.size()));
    for (int j = 0; j < int(gens.size()); ++j)
        for (int i = 0; i < M.rank(); ++i) G.set(i, j, gens[size_t(j)][size_t(i)]);
    RingMatrix target = M.matrix() * G.frobenius(1);
    RingMatrix N = solve_in_span(fl, gens, target);
    if (!(G * N == target))
        throw TheoryViolation("induced tau does not reproduce the ambient action");
    // the idempotent's image must lie in the span of the generators
    (void)solve_in_span(fl, gens, epsR);
    SubmoduleResult out;
    out.module = TauModule::make(M.tower_ptr(), B, N);
    out.inclusion = G;
    return out;
}

}  // namespace

SubmoduleResult perfection_with_inclusion(const TauModule& M) {
    const CoeffRing& B = M.coeff_ring();
    const CoeffRing& R = M.ext_ring();
    if (B.kind() == RingKind::RationalField) {
        if (!R.is_unit(ring_det(M.matrix())))
            throw UserError(
                "perfection over the rational function field requires invertible tau");
        SubmoduleResult out;
        out.module = M;
        out.inclusion = RingMatrix::identity(R, M.rank());
        return out;
    }
    Flat fl = make_flat(M);
    FittingData fd = fitting_projector(fl);
    RingMatrix piR = readoff_R(fl, fd.pi);
    return submodule_from_idempotent(M, piR);
}

TauModule perfection(const TauModule& M) { return perfection_with_inclusion(M).module; }

bool is_flat_point(const TauModule& M) {
    const CoeffRing& B = M.coeff_ring();
    if (B.kind() == RingKind::RationalField)
        throw UserError("flatness test requires a finite-length ring");
    if (B.kind() == RingKind::BaseField) return true;
    Flat fl = make_flat(M);
    FittingData fd = fitting_projector(fl);
    RingMatrix piR = readoff_R(fl, fd.pi);
    ImagePresentation pres = image_presentation(fl, piR);
    for (const Poly& d : pres.divisors) {
        if (d.degree() == 0) continue;
        Poly cof = poly_div_exact(pres.fk, d);
        if (poly_gcd(d, cof).degree() != 0) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Finite groups and the classifying-stack series

FiniteGroupData FiniteGroupData::make(std::vector<std::vector<int>> mult,
                                      std::vector<int> twist) {
    FiniteGroupData G;
    G.order = int(mult.size());
    if (G.order == 0) throw UserError("empty group");
    for (const auto& row : mult) {
        if (int(row.size()) != G.order) throw UserError("multiplication table not square");
        for (int v : row)
            if (v < 0 || v >= G.order) throw UserError("table entry out of range");
    }
    G.mult = std::move(mult);
    int id = -1;
    for (int e = 0; e < G.order; ++e) {
        bool ok = true;
        for (int h = 0; h < G.order && ok; ++h)
            ok = G.mult[size_t(e)][size_t(h)] == h && G.mult[size_t(h)][size_t(e)] == h;
        if (ok) { id = e; break; }
    }
    if (id < 0) throw UserError("no identity element");
    G.identity = id;
    G.inverse.assign(size_t(G.order), -1);
    for (int g = 0; g < G.order; ++g) {
        for (int h = 0; h < G.order; ++h)
            if (G.mult[size_t(g)][size_t(h)] == id && G.mult[size_t(h)][size_t(g)] == id) {
                G.inverse[size_t(g)] = h;
                break;
            }
        if (G.inverse[size_t(g)] < 0) throw UserError("element without inverse");
    }
    for (int a = 0; a < G.order; ++a)
        for (int b = 0; b < G.order; ++b)
            for (int c = 0; c < G.order; ++c)
                if (G.mult[size_t(G.mult[size_t(a)][size_t(b)])][size_t(c)] !=
                    G.mult[size_t(a)][size_t(G.mult[size_t(b)][size_t(c)])])
                    throw UserError("multiplication table is not associative");
    if (twist.empty()) {
        G.twist.resize(size_t(G.order));
        std::iota(G.twist.begin(), G.twist.end(), 0);
    } else {
        if (int(twist.size()) != G.order) throw UserError("twist size mismatch");
        std::vector<bool> seen(size_t(G.order), false);
        for (int v : twist) {
            if (v < 0 || v >= G.order || seen[size_t(v)])
                throw UserError("twist is not a permutation");
            seen[size_t(v)] = true;
        }
        for (int a = 0; a < G.order; ++a)
            for (int b = 0; b < G.order; ++b)
                if (twist[size_t(G.mult[size_t(a)][size_t(b)])] !=
                    G.mult[size_t(twist[size_t(a)])][size_t(twist[size_t(b)])])
                    throw UserError("twist is not an automorphism");
        G.twist = std::move(twist);
    }
    return G;
}

bool FiniteGroupData::is_twisted() const {
    for (int g = 0; g < order; ++g)
        if (twist[size_t(g)] != g) return true;
    return false;
}

std::vector<TwistedClass> twisted_conjugacy_classes(const FiniteGroupData& G, int n) {
    std::vector<int> tw(size_t(G.order));
    std::iota(tw.begin(), tw.end(), 0);
    for (int i = 0; i < n; ++i)
        for (int g = 0; g < G.order; ++g) tw[size_t(g)] = G.twist[size_t(tw[size_t(g)])];
    std::vector<bool> visited(size_t(G.order), false);
    std::vector<TwistedClass> classes;
    for (int g = 0; g < G.order; ++g) {
        if (visited[size_t(g)]) continue;
        int orbit = 0;
        for (int x = 0; x < G.order; ++x) {
            int y = G.mult[size_t(G.mult[size_t(x)][size_t(g)])]
                          [size_t(tw[size_t(G.inverse[size_t(x)])])];
            if (!visited[size_t(y)]) {
                visited[size_t(y)] = true;
                ++orbit;
            }
        }
        classes.push_back({g, G.order / orbit});
    }
    return classes;
}

void validate_group_action(const FiniteGroupData& G, const GroupActionModule& act) {
    const TauModule& M = act.module;
    const CoeffRing& R = M.ext_ring();
    if (!M.is_free()) throw UserError("group actions require a free module");
    if (M.coeff_ring().kind() == RingKind::RationalField)
        throw UserError("group actions require a finite-length ring");
    if (int(act.rho.size()) != G.order)
        throw UserError("one matrix per group element required");
    if (G.order % int(M.tower()->p) == 0)
        throw UserError("group order is divisible by the characteristic");
    for (const RingMatrix& rg : act.rho) {
        if (!ring_eq(rg.ring(), R) || rg.rows() != M.rank() || rg.cols() != M.rank())
            throw UserError("action matrix has the wrong shape or ring");
        if (!R.is_unit(ring_det(rg))) throw UserError("action matrix is not invertible");
    }
    if (!(act.rho[size_t(G.identity)] == RingMatrix::identity(R, M.rank())))
        throw UserError("identity element must act trivially");
    for (int g = 0; g < G.order; ++g)
        for (int h = 0; h < G.order; ++h)
            if (!(act.rho[size_t(g)] * act.rho[size_t(h)] ==
                  act.rho[size_t(G.mult[size_t(g)][size_t(h)])]))
                throw UserError("action is not a homomorphism");
    for (int g = 0; g < G.order; ++g)
        if (!(M.matrix() * act.rho[size_t(g)].frobenius(1) ==
              act.rho[size_t(G.twist[size_t(g)])] * M.matrix()))
            throw UserError("action does not commute with tau");
}

namespace {

RatF int_inverse_in(const CoeffRing& ring, int n) {
    fp_t p = ring.tower()->p;
    fp_t np = fp_t(((n % int(p)) + int(p)) % int(p));
    if (np == 0) throw UserError("integer not invertible in characteristic p");
    fp_t inv = 1, base = np;
    for (fp_t e = p - 2; e; e >>= 1) {
        if (e & 1) inv = fp_t(std::uint64_t(inv) * base % p);
        base = fp_t(std::uint64_t(base) * base % p);
    }
    return ring.reduce(RatF(poly_const(ff_mul_scalar(ff_one(ring.tower()), inv))));
}

}  // namespace

TruncSeries bg_l_series(const FiniteGroupData& G, const GroupActionModule& act, int N) {
    validate_group_action(G, act);
    const TauModule& M = act.module;
    const CoeffRing& B = M.coeff_ring();
    int d = int(M.tower()->m);
    TruncSeries out(B, N);
    if (M.rank() == 0) return out;
    Flat fl = make_flat(M);
    FittingData fd = fitting_projector(fl);
    std::vector<FFMatrix> rho_flat;
    rho_flat.reserve(size_t(G.order));
    for (const RingMatrix& rg : act.rho) rho_flat.push_back(flatten_map(fl, rg));
    FFMatrix acc = FFMatrix::identity(fl.k, fl.D);
    for (int n = 1; n <= N; ++n) {
        acc = flat_twisted_step(acc, fl.tau);
        if (n % d != 0) continue;
        std::vector<TwistedClass> classes = twisted_conjugacy_classes(G, n);
        RatF coeff = B.zero();
        for (const TwistedClass& cl : classes) {
            FFMatrix psi = acc.mul(rho_flat[size_t(cl.rep)]).mul(fd.pi);
            RingMatrix Tn = readoff_R(fl, psi);
            RatF tr = descend_to_base(M, Tn.trace());
            coeff = B.add(coeff, B.mul(tr, int_inverse_in(B, cl.stab_size)));
        }
        out.set_coeff(n, rf_scale_int(coeff, d));
    }
    return out;
}

SubmoduleResult invariants_with_inclusion(const FiniteGroupData& G,
                                          const GroupActionModule& act) {
    validate_group_action(G, act);
    const TauModule& M = act.module;
    const CoeffRing& R = M.ext_ring();
    RingMatrix sum(R, M.rank(), M.rank());
    for (const RingMatrix& rg : act.rho) sum = sum + rg;
    RingMatrix eps = sum.scale(int_inverse_in(R, G.order));
    if (!(eps * eps == eps))
        throw TheoryViolation("averaging operator is not idempotent");
    return submodule_from_idempotent(M, eps);
}

TauModule invariants_module(const FiniteGroupData& G, const GroupActionModule& act) {
    return invariants_with_inclusion(G, act).module;
}

}  // namespace dmt
