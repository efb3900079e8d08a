#pragma once

#include <algorithm>
#include <utility>

#include "acyc/numeric.hpp"

namespace acyc {

// Dense integer matrices, row-major. Sized for the small systems that come up
// here (class-group relations, unit lattices); nothing is tuned for large n.
using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;

inline IntMat identity_mat(size_t n) {
    IntMat I(n, IntVec(n, 0));
    for (size_t i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

inline IntVec mat_apply(const IntMat& M, const IntVec& x) {
    IntVec y(M.size(), 0);
    for (size_t i = 0; i < M.size(); ++i)
        for (size_t j = 0; j < x.size(); ++j) y[i] += M[i][j] * x[j];
    return y;
}

inline IntMat mat_mul(const IntMat& A, const IntMat& B) {
    size_t n = A.size(), m = B[0].size(), k = B.size();
    IntMat C(n, IntVec(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < k; ++t) {
            if (A[i][t] == 0) continue;
            for (size_t j = 0; j < m; ++j) C[i][j] += A[i][t] * B[t][j];
        }
    return C;
}

// Row-style Hermite normal form of the lattice spanned by the rows of M.
// Returns the reduced nonzero rows: pivots positive, strictly increasing
// pivot columns, entries above each pivot reduced into [0, pivot).
inline IntMat hnf_rows(IntMat M) {
    size_t rows = M.size();
    if (rows == 0) return M;
    size_t cols = M[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        // eliminate below row r in column c via euclidean steps
        size_t piv = r;
        while (true) {
            size_t nz = rows;
            for (size_t i = r; i < rows; ++i)
                if (M[i][c] != 0) {
                    if (nz == rows || cmpabs(M[i][c], M[nz][c]) < 0) nz = i;
                }
            if (nz == rows) break;  // column is zero from r on
            std::swap(M[r], M[nz]);
            bool clean = true;
            for (size_t i = r + 1; i < rows; ++i) {
                if (M[i][c] == 0) continue;
                Int q = M[i][c] / M[r][c];  // truncated is fine, loop repeats
                if (q != 0)
                    for (size_t j = c; j < cols; ++j) M[i][j] -= q * M[r][j];
                if (M[i][c] != 0) clean = false;
            }
            if (clean) break;
        }
        piv = r;
        if (M[piv][c] == 0) continue;
        if (M[piv][c] < 0)
            for (size_t j = c; j < cols; ++j) M[piv][j] = -M[piv][j];
        for (size_t i = 0; i < r; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), M[i][c].get_mpz_t(), M[piv][c].get_mpz_t());
            if (q != 0)
                for (size_t j = 0; j < cols; ++j) M[i][j] -= q * M[piv][j];
        }
        ++r;
    }
    M.resize(r);
    return M;
}

// Determinant of the full-rank HNF lattice (product of pivots); 0 if rank-deficient.
inline Int hnf_det(const IntMat& H, size_t n) {
    if (H.size() < n) return 0;
    Int d = 1;
    size_t c = 0;
    for (size_t i = 0; i < H.size(); ++i) {
        while (c < n && H[i][c] == 0) ++c;
        if (c == n) return 0;
        d *= H[i][c];
    }
    return d;
}

// Is x in the lattice spanned by the HNF rows?
inline bool hnf_contains(const IntMat& H, IntVec x) {
    size_t cols = x.size();
    size_t row = 0;
    for (size_t c = 0; c < cols; ++c) {
        if (row < H.size()) {
            size_t pc = 0;
            while (pc < cols && H[row][pc] == 0) ++pc;
            if (pc == c) {
                if (x[c] % H[row][c] != 0) return false;
                Int q = divexact(x[c], H[row][c]);
                for (size_t j = c; j < cols; ++j) x[j] -= q * H[row][j];
                ++row;
                continue;
            }
        }
        if (x[c] != 0) return false;
    }
    return true;
}

// Smith normal form. Returns diagonal entries d (nonnegative, d[i] | d[i+1])
// padded to min(rows, cols); optionally the unimodular transforms with
// U * M * V = diag(d).
struct SmithForm {
    std::vector<Int> diag;
    IntMat U;  // rows x rows
    IntMat V;  // cols x cols
};

inline SmithForm smith_form(IntMat M, bool want_transforms = true) {
    size_t rows = M.size();
    size_t cols = rows ? M[0].size() : 0;
    SmithForm S;
    if (want_transforms) {
        S.U = identity_mat(rows);
        S.V = identity_mat(cols);
    }
    size_t t = 0;
    auto row_sub = [&](size_t i, size_t k, const Int& q) {
        for (size_t j = 0; j < cols; ++j) M[i][j] -= q * M[k][j];
        if (want_transforms)
            for (size_t j = 0; j < rows; ++j) S.U[i][j] -= q * S.U[k][j];
    };
    auto col_sub = [&](size_t j, size_t k, const Int& q) {
        for (size_t i = 0; i < rows; ++i) M[i][j] -= q * M[i][k];
        if (want_transforms)
            for (size_t i = 0; i < cols; ++i) S.V[i][j] -= q * S.V[i][k];
    };
    while (t < rows && t < cols) {
        // find smallest nonzero pivot in the remaining block
        size_t pi = rows, pj = cols;
        for (size_t i = t; i < rows; ++i)
            for (size_t j = t; j < cols; ++j)
                if (M[i][j] != 0 &&
                    (pi == rows || cmpabs(M[i][j], M[pi][pj]) < 0)) {
                    pi = i;
                    pj = j;
                }
        if (pi == rows) break;
        std::swap(M[t], M[pi]);
        if (want_transforms) std::swap(S.U[t], S.U[pi]);
        for (size_t i = 0; i < rows; ++i) std::swap(M[i][t], M[i][pj]);
        if (want_transforms)
            for (size_t i = 0; i < cols; ++i) std::swap(S.V[i][t], S.V[i][pj]);
        bool dirty = false;
        for (size_t i = t + 1; i < rows; ++i) {
            if (M[i][t] == 0) continue;
            Int q = M[i][t] / M[t][t];
            row_sub(i, t, q);
            if (M[i][t] != 0) dirty = true;
        }
        for (size_t j = t + 1; j < cols; ++j) {
            if (M[t][j] == 0) continue;
            Int q = M[t][j] / M[t][t];
            col_sub(j, t, q);
            if (M[t][j] != 0) dirty = true;
        }
        if (dirty) continue;
        // enforce divisibility of the rest by the pivot
        bool bad = false;
        for (size_t i = t + 1; i < rows && !bad; ++i)
            for (size_t j = t + 1; j < cols && !bad; ++j)
                if (M[i][j] % M[t][t] != 0) {
                    row_sub(t, i, Int(-1));  // add row i to row t
                    bad = true;
                }
        if (bad) continue;
        if (M[t][t] < 0) {
            for (size_t j = 0; j < cols; ++j) M[t][j] = -M[t][j];
            if (want_transforms)
                for (size_t j = 0; j < rows; ++j) S.U[t][j] = -S.U[t][j];
        }
        ++t;
    }
    for (size_t i = 0; i < std::min(rows, cols); ++i)
        S.diag.push_back(i < t ? M[i][i] : Int(0));
    return S;
}

// Determinant by fraction-free Bareiss elimination.
inline Int det_bareiss(IntMat M) {
    size_t n = M.size();
    if (n == 0) return 1;
    Int sign = 1, prev = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (M[k][k] == 0) {
            size_t s = k + 1;
            while (s < n && M[s][k] == 0) ++s;
            if (s == n) return 0;
            std::swap(M[k], M[s]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j)
                M[i][j] = divexact(M[i][j] * M[k][k] - M[i][k] * M[k][j], prev);
        prev = M[k][k];
    }
    return sign * M[n - 1][n - 1];
}

// Inverse of a unimodular integer matrix via cofactors (small n).
inline IntMat unimodular_inverse(const IntMat& V) {
    size_t n = V.size();
    Int det = det_bareiss(V);
    assert(det == 1 || det == -1);
    IntMat inv(n, IntVec(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            IntMat minor;
            for (size_t a = 0; a < n; ++a) {
                if (a == j) continue;
                IntVec row;
                for (size_t b = 0; b < n; ++b)
                    if (b != i) row.push_back(V[a][b]);
                minor.push_back(row);
            }
            Int cof = n == 1 ? Int(1) : det_bareiss(minor);
            if ((i + j) % 2) cof = -cof;
            inv[i][j] = det == 1 ? cof : -cof;
        }
    return inv;
}

// Nullspace basis of M over F_p (p prime); vectors with entries in [0, p).
inline IntMat kernel_mod_p(IntMat M, const Int& p) {
    size_t rows = M.size();
    size_t cols = rows ? M[0].size() : 0;
    for (auto& r : M)
        for (auto& x : r) x = mod(x, p);
    std::vector<long> pivot_of_col(cols, -1);
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t s = r;
        while (s < rows && M[s][c] == 0) ++s;
        if (s == rows) continue;
        std::swap(M[r], M[s]);
        Int inv = inv_mod(M[r][c], p);
        for (size_t j = c; j < cols; ++j) M[r][j] = mod(M[r][j] * inv, p);
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || M[i][c] == 0) continue;
            Int f = M[i][c];
            for (size_t j = c; j < cols; ++j)
                M[i][j] = mod(M[i][j] - f * M[r][j], p);
        }
        pivot_of_col[c] = long(r);
        ++r;
    }
    IntMat ker;
    for (size_t c = 0; c < cols; ++c) {
        if (pivot_of_col[c] != -1) continue;
        IntVec v(cols, 0);
        v[c] = 1;
        for (size_t j = 0; j < cols; ++j)
            if (pivot_of_col[j] != -1)
                v[j] = mod(-M[size_t(pivot_of_col[j])][c], p);
        ker.push_back(v);
    }
    return ker;
}

}  // namespace acyc
