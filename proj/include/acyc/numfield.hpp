#pragma once

#include <map>
#include <random>
#include <functional>
#include <unordered_map>

#include "acyc/linalg.hpp"
#include "acyc/numeric.hpp"

namespace acyc {

using QVec = std::vector<Rat>;
using QMat = std::vector<QVec>;

// A commutative Q-algebra of finite dimension given by a multiplication
// table on a fixed basis e_0..e_{n-1} with e_0 = 1. Number fields enter as
// Q[x]/(f) on the power basis or as tensor products of such.
struct AlgebraQ {
    size_t n = 0;
    std::vector<std::vector<QVec>> table;  // table[i][j] = coords of e_i e_j

    QVec zero() const { return QVec(n, Rat(0)); }
    QVec one() const {
        QVec v = zero();
        v[0] = 1;
        return v;
    }
    QVec basis(size_t i) const {
        QVec v = zero();
        v[i] = 1;
        return v;
    }

    QVec mul(const QVec& a, const QVec& b) const {
        QVec out = zero();
        for (size_t i = 0; i < n; ++i) {
            if (a[i] == 0) continue;
            for (size_t j = 0; j < n; ++j) {
                if (b[j] == 0) continue;
                Rat c = a[i] * b[j];
                const QVec& t = table[i][j];
                for (size_t k = 0; k < n; ++k)
                    if (t[k] != 0) out[k] += c * t[k];
            }
        }
        return out;
    }

    QVec add(const QVec& a, const QVec& b) const {
        QVec out(n);
        for (size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
        return out;
    }
    QVec scale(const QVec& a, const Rat& c) const {
        QVec out(n);
        for (size_t i = 0; i < n; ++i) out[i] = a[i] * c;
        return out;
    }

    QVec pow(const QVec& a, Int e) const {
        QVec acc = one(), base = a;
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) acc = mul(acc, base);
            base = mul(base, base);
            e >>= 1;
        }
        return acc;
    }

    // matrix of multiplication by a on the e-basis (columns = images)
    QMat mult_matrix(const QVec& a) const {
        QMat M(n, QVec(n, Rat(0)));
        for (size_t j = 0; j < n; ++j) {
            QVec col = mul(a, basis(j));
            for (size_t i = 0; i < n; ++i) M[i][j] = col[i];
        }
        return M;
    }

    Rat trace(const QVec& a) const {
        Rat t = 0;
        for (size_t j = 0; j < n; ++j) t += mul(a, basis(j))[j];
        return t;
    }

    Rat norm(const QVec& a) const {
        QMat M = mult_matrix(a);
        // clear denominators, Bareiss, divide back
        Int den = 1;
        for (auto& row : M)
            for (auto& x : row) den = lcm(den, x.get_den());
        IntMat Z(n, IntVec(n));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) Z[i][j] = Int(M[i][j] * den);
        Rat d(det_bareiss(Z));
        Rat scale(1);
        for (size_t i = 0; i < n; ++i) scale *= den;
        return d / scale;
    }

    // solve a * x = b; throws if a is not invertible
    QVec solve_mul(const QVec& a, const QVec& b) const {
        QMat M = mult_matrix(a);
        // Gaussian elimination over Q on [M | b]
        QMat A = M;
        QVec rhs = b;
        size_t nn = n;
        std::vector<size_t> perm(nn);
        for (size_t c = 0, r = 0; c < nn && r < nn; ++c) {
            size_t piv = r;
            while (piv < nn && A[piv][c] == 0) ++piv;
            if (piv == nn) throw arithmetic_error("solve_mul: singular");
            std::swap(A[piv], A[r]);
            std::swap(rhs[piv], rhs[r]);
            Rat inv = Rat(1) / A[r][c];
            for (size_t j = c; j < nn; ++j) A[r][j] *= inv;
            rhs[r] *= inv;
            for (size_t i = 0; i < nn; ++i) {
                if (i == r || A[i][c] == 0) continue;
                Rat f = A[i][c];
                for (size_t j = c; j < nn; ++j) A[i][j] -= f * A[r][j];
                rhs[i] -= f * rhs[r];
            }
            ++r;
        }
        return rhs;
    }
    QVec inverse(const QVec& a) const { return solve_mul(a, one()); }
};

// Q[x]/(f) for monic integral f, power basis.
inline AlgebraQ power_basis_algebra(const std::vector<Int>& f) {
    // f = monic, coefficients f[0] + f[1] x + ... + f[n] x^n, f[n] = 1
    size_t n = f.size() - 1;
    assert(f[n] == 1);
    // powers x^n .. x^(2n-2) reduced
    std::vector<QVec> powers(2 * n - 1, QVec(n, Rat(0)));
    for (size_t i = 0; i < n; ++i) powers[i][i] = 1;
    for (size_t k = n; k <= 2 * n - 2; ++k) {
        // x^k = x * x^(k-1), reduce using x^n = -(f[0] + ... + f[n-1]x^(n-1))
        QVec prev = powers[k - 1];
        QVec cur(n, Rat(0));
        Rat top = prev[n - 1];
        for (size_t i = n - 1; i > 0; --i) cur[i] = prev[i - 1];
        cur[0] = 0;
        if (top != 0)
            for (size_t i = 0; i < n; ++i) cur[i] -= top * Rat(f[i]);
        powers[k] = cur;
    }
    AlgebraQ A;
    A.n = n;
    A.table.assign(n, std::vector<QVec>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) A.table[i][j] = powers[i + j];
    return A;
}

// tensor product algebra: basis e_{i,j} = a_i (x) b_j, index i*nb + j
inline AlgebraQ tensor_algebra(const AlgebraQ& A, const AlgebraQ& B) {
    AlgebraQ T;
    size_t na = A.n, nb = B.n;
    T.n = na * nb;
    T.table.assign(T.n, std::vector<QVec>(T.n, QVec(T.n, Rat(0))));
    for (size_t i1 = 0; i1 < na; ++i1)
        for (size_t j1 = 0; j1 < nb; ++j1)
            for (size_t i2 = 0; i2 < na; ++i2)
                for (size_t j2 = 0; j2 < nb; ++j2) {
                    const QVec& pa = A.table[i1][i2];
                    const QVec& pb = B.table[j1][j2];
                    QVec& out = T.table[i1 * nb + j1][i2 * nb + j2];
                    for (size_t k1 = 0; k1 < na; ++k1) {
                        if (pa[k1] == 0) continue;
                        for (size_t k2 = 0; k2 < nb; ++k2)
                            if (pb[k2] != 0) out[k1 * nb + k2] = pa[k1] * pb[k2];
                    }
                }
    return T;
}

// An order in the algebra: lattice with basis rows/den over the e-basis,
// containing 1 and closed under multiplication.
struct OrderLat {
    Int den = 1;
    IntMat rows;  // n x n, full rank, HNF-normalised

    QVec element(const AlgebraQ& A, size_t i) const {
        QVec v(A.n);
        for (size_t k = 0; k < A.n; ++k) v[k] = Rat(rows[i][k], den);
        return v;
    }
};

namespace nf {

// coordinates of v over the order basis; integral iff v in the order
inline bool order_coords(const AlgebraQ& A, const OrderLat& O, const QVec& v, IntVec* out) {
    // solve x * rows = v * den over Q with back substitution (rows in HNF,
    // pivot columns increasing)
    size_t n = A.n;
    QVec target(n);
    for (size_t k = 0; k < n; ++k) target[k] = v[k] * O.den;
    IntVec coords(n, 0);
    // HNF rows: row i has pivot at column p_i (increasing). back-substitute
    // from the last row upward
    std::vector<size_t> pivot(n);
    for (size_t i = 0; i < n; ++i) {
        size_t c = 0;
        while (c < n && O.rows[i][c] == 0) ++c;
        pivot[i] = c;
    }
    for (size_t ii = 0; ii < n; ++ii) {
        size_t c = pivot[ii];
        Rat t = target[c] / O.rows[ii][c];
        if (t.get_den() != 1) return false;
        coords[ii] = Int(t.get_num());
        for (size_t k = 0; k < n; ++k) target[k] -= Rat(coords[ii]) * O.rows[ii][k];
    }
    for (size_t k = 0; k < n; ++k)
        if (target[k] != 0) return false;
    if (out) *out = coords;
    return true;
}

inline bool order_contains(const AlgebraQ& A, const OrderLat& O, const QVec& v) {
    return order_coords(A, O, v, nullptr);
}

// integral structure constants of the order: w_i w_j over the w-basis
inline std::vector<IntMat> order_mult_table(const AlgebraQ& A, const OrderLat& O) {
    size_t n = A.n;
    std::vector<IntMat> M(n, IntMat(n, IntVec(n, 0)));
    for (size_t i = 0; i < n; ++i) {
        QVec wi = O.element(A, i);
        for (size_t j = i; j < n; ++j) {
            QVec p = A.mul(wi, O.element(A, j));
            IntVec c;
            if (!order_coords(A, O, p, &c))
                throw arithmetic_error("order_mult_table: order not multiplicatively closed");
            M[i][j] = c;
            M[j][i] = c;
        }
    }
    return M;
}

inline Int order_disc(const AlgebraQ& A, const OrderLat& O) {
    size_t n = A.n;
    QMat T(n, QVec(n));
    std::vector<QVec> w(n);
    for (size_t i = 0; i < n; ++i) w[i] = O.element(A, i);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j) {
            Rat t = A.trace(A.mul(w[i], w[j]));
            T[i][j] = t;
            T[j][i] = t;
        }
    Int den = 1;
    for (auto& row : T)
        for (auto& x : row) den = lcm(den, x.get_den());
    IntMat Z(n, IntVec(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) Z[i][j] = Int(T[i][j] * den);
    Int d = det_bareiss(Z);
    Rat result = Rat(d);
    for (size_t i = 0; i < n; ++i) result /= den;
    if (result.get_den() != 1) throw arithmetic_error("order_disc: non-integral discriminant");
    return Int(result.get_num());
}

// normalise lattice rows to HNF with minimal denominator
inline OrderLat normalize_order(const AlgebraQ& A, Int den, IntMat rows) {
    IntMat H = hnf_rows(std::move(rows));
    if (H.size() != A.n) throw arithmetic_error("normalize_order: rank deficient");
    Int g = den;
    for (auto& r : H)
        for (auto& x : r) g = gcd(g, x);
    if (g > 1) {
        den = divexact(den, g);
        for (auto& r : H)
            for (auto& x : r) x = divexact(x, g);
    }
    OrderLat O;
    O.den = den;
    O.rows = std::move(H);
    return O;
}

// ------- small F_p polynomial helpers (root extraction, degree <= n) -------

// polynomials as coefficient vectors, low degree first, over F_p
inline IntVec fp_poly_mulmod(const IntVec& a, const IntVec& b, const IntVec& g, const Int& p) {
    size_t dg = g.size() - 1;  // g monic of degree dg
    IntVec prod(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) prod[i + j] = mod(prod[i + j] + a[i] * b[j], p);
    }
    if (prod.size() > dg) {
        for (size_t d = prod.size(); d-- > dg;) {
            if (prod[d] == 0) continue;
            Int c = prod[d];
            prod[d] = 0;
            for (size_t k = 0; k < dg; ++k)
                prod[d - dg + k] = mod(prod[d - dg + k] - c * g[k], p);
        }
    }
    prod.resize(dg, Int(0));
    return prod;
}

inline IntVec fp_poly_powmod(IntVec base, Int e, const IntVec& g, const Int& p) {
    size_t dg = g.size() - 1;
    IntVec acc(dg, 0);
    acc[0] = 1;
    base.resize(std::max(base.size(), size_t(1)));
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) acc = fp_poly_mulmod(acc, base, g, p);
        base = fp_poly_mulmod(base, base, g, p);
        e >>= 1;
    }
    return acc;
}

inline IntVec fp_poly_gcd(IntVec a, IntVec b, const Int& p) {
    auto deg = [](const IntVec& f) {
        long d = long(f.size()) - 1;
        while (d >= 0 && f[size_t(d)] == 0) --d;
        return d;
    };
    while (deg(b) >= 0) {
        long da = deg(a), db = deg(b);
        if (da < db) {
            std::swap(a, b);
            continue;
        }
        Int inv = inv_mod(b[size_t(db)], p);
        Int c = mod(a[size_t(da)] * inv, p);
        for (long i = 0; i <= db; ++i)
            a[size_t(da - db + i)] = mod(a[size_t(da - db + i)] - c * b[size_t(i)], p);
        // note: repeats until degree drops
    }
    long da = deg(a);
    IntVec out(size_t(da + 1));
    for (long i = 0; i <= da; ++i) out[size_t(i)] = a[size_t(i)];
    if (da >= 0) {
        Int inv = inv_mod(out[size_t(da)], p);
        for (auto& x : out) x = mod(x * inv, p);
    }
    return out;
}

// all roots in F_p of a polynomial that splits into distinct linear factors
inline std::vector<Int> fp_poly_roots(IntVec g, const Int& p, unsigned seed = 77) {
    auto deg = [](const IntVec& f) {
        long d = long(f.size()) - 1;
        while (d >= 0 && f[size_t(d)] == 0) --d;
        return d;
    };
    std::vector<Int> roots;
    std::mt19937_64 rng(seed);
    std::function<void(IntVec)> split = [&](IntVec f) {
        long d = deg(f);
        if (d <= 0) return;
        // normalize monic
        Int inv = inv_mod(f[size_t(d)], p);
        f.resize(size_t(d + 1));
        for (auto& x : f) x = mod(x * inv, p);
        if (d == 1) {
            roots.push_back(mod(-f[0], p));
            return;
        }
        if (p == 2) {
            // tiny field: test both values
            for (Int lam = 0; lam < 2; ++lam) {
                Int v = 0, pw = 1;
                for (auto& c : f) {
                    v = mod(v + c * pw, p);
                    pw = mod(pw * lam, p);
                }
                if (v == 0) roots.push_back(lam);
            }
            return;
        }
        while (true) {
            Int r = Int((unsigned long)(rng() % 1000000007ULL));
            // h = (x + r)^((p-1)/2) - 1 mod f
            IntVec xr{mod(r, p), Int(1)};
            IntVec h = fp_poly_powmod(xr, (p - 1) / 2, f, p);
            h[0] = mod(h[0] - 1, p);
            IntVec g1 = fp_poly_gcd(f, h, p);
            long d1 = deg(g1);
            if (d1 > 0 && d1 < d) {
                // f / g1 by synthetic division
                IntVec quo(size_t(d - d1 + 1), 0);
                IntVec rem = f;
                for (long i = d; i >= d1; --i) {
                    Int c = rem[size_t(i)];
                    if (c != 0) {
                        quo[size_t(i - d1)] = c;
                        for (long k = 0; k <= d1; ++k)
                            rem[size_t(i - d1 + k)] = mod(rem[size_t(i - d1 + k)] - c * g1[size_t(k)], p);
                    }
                }
                split(g1);
                split(quo);
                return;
            }
        }
    };
    split(std::move(g));
    return roots;
}

// multiplication of order-coordinate vectors mod p via the integral table
inline IntVec mulv_mod(const std::vector<IntMat>& mult, const IntVec& a, const IntVec& b,
                       const Int& p) {
    size_t n = a.size();
    IntVec out(n, 0);
    for (size_t i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        for (size_t k = 0; k < n; ++k) {
            if (b[k] == 0) continue;
            Int c = mod(a[i] * b[k], p);
            if (c == 0) continue;
            for (size_t t = 0; t < n; ++t) out[t] += c * mult[i][k][t];
        }
    }
    for (auto& x : out) x = mod(x, p);
    return out;
}

inline IntVec one_coords(const AlgebraQ& A, const OrderLat& O) {
    IntVec c;
    if (!order_coords(A, O, A.one(), &c)) throw arithmetic_error("order does not contain 1");
    return c;
}

// basis (coordinate vectors mod p) of the radical of O/pO: kernel of the
// p^e-power map, p^e >= n
inline IntMat p_radical(const AlgebraQ& A, const OrderLat& O, const std::vector<IntMat>& mult,
                        const Int& p) {
    size_t n = A.n;
    long e = 1;
    Int pe = p;
    while (pe < Int((long)n)) {
        pe *= p;
        ++e;
    }
    IntVec onec = one_coords(A, O);
    auto pow_vec = [&](IntVec x, Int ex) {
        IntVec acc = onec;
        for (auto& t : acc) t = mod(t, p);
        while (ex > 0) {
            if (mpz_odd_p(ex.get_mpz_t())) acc = mulv_mod(mult, acc, x, p);
            x = mulv_mod(mult, x, x, p);
            ex >>= 1;
        }
        return acc;
    };
    IntMat F(n, IntVec(n, 0));
    for (size_t j = 0; j < n; ++j) {
        IntVec ej(n, 0);
        ej[j] = 1;
        IntVec img = pow_vec(ej, pe);
        for (size_t i = 0; i < n; ++i) F[i][j] = img[i];
    }
    return kernel_mod_p(F, p);
}

// one round of the multiplier-ring refinement at p; returns true if O grew.
// O' = (1/p) { y in O : y * I_p <= p I_p }, I_p the p-radical ideal.
inline bool p_enlarge_once(const AlgebraQ& A, OrderLat& O, const Int& p) {
    size_t n = A.n;
    auto mult = order_mult_table(A, O);
    IntMat rad = p_radical(A, O, mult, p);
    // I_p lattice over order coords: radical lifts + p * identity
    IntMat ip_rows = rad;
    for (size_t i = 0; i < n; ++i) {
        IntVec r(n, 0);
        r[i] = p;
        ip_rows.push_back(r);
    }
    IntMat Ip = hnf_rows(ip_rows);
    // quotient I_p / p I_p: coordinates via the HNF basis of I_p
    // condition on y (order coords): for each radical generator g, the
    // I_p-coordinates of y*g must vanish mod p
    IntMat big;  // columns: n unknowns; rows: conditions
    std::vector<IntVec> gens = Ip;  // n generators of I_p
    for (auto& g : gens) {
        // map: y -> coords of y*g in I_p basis, mod p. Build column by column.
        IntMat cond(n, IntVec(n, 0));
        for (size_t j = 0; j < n; ++j) {
            IntVec ej(n, 0);
            ej[j] = 1;
            // y = e_j: product over order coords (exact, not mod p)
            IntVec prod(n, 0);
            for (size_t i = 0; i < n; ++i) {
                if (ej[i] == 0) continue;
                for (size_t k = 0; k < n; ++k) {
                    if (g[k] == 0) continue;
                    for (size_t t = 0; t < n; ++t) prod[t] += ej[i] * g[k] * mult[i][k][t];
                }
            }
            // coords of prod over the HNF basis Ip (exact division)
            IntVec c(n, 0);
            IntVec rem = prod;
            std::vector<size_t> pivot(n);
            for (size_t i = 0; i < n; ++i) {
                size_t cc = 0;
                while (cc < n && Ip[i][cc] == 0) ++cc;
                pivot[i] = cc;
            }
            for (size_t ii = 0; ii < n; ++ii) {
                size_t cc = pivot[ii];
                if (rem[cc] % Ip[ii][cc] != 0)
                    throw arithmetic_error("p_enlarge: product not in radical ideal");
                Int q = divexact(rem[cc], Ip[ii][cc]);
                c[ii] = q;
                for (size_t k = 0; k < n; ++k) rem[k] -= q * Ip[ii][k];
            }
            for (size_t i = 0; i < n; ++i) cond[i][j] = mod(c[i], p);
        }
        for (auto& row : cond) big.push_back(row);
    }
    IntMat ker = kernel_mod_p(big, p);
    // candidate new basis: (kernel lifts)/p together with O
    bool grew = false;
    IntMat rows;
    for (size_t i = 0; i < n; ++i) {
        IntVec r(n);
        // w_i in e-basis, scaled by p: p * O stays p*rows
        for (size_t k = 0; k < n; ++k) r[k] = O.rows[i][k] * p;
        rows.push_back(r);
    }
    for (auto& y : ker) {
        // y over order coords -> e-basis (times den), NOT divided by p yet
        IntVec r(n, 0);
        for (size_t i = 0; i < n; ++i)
            for (size_t k = 0; k < n; ++k) r[k] += y[i] * O.rows[i][k];
        rows.push_back(r);
        // y/p in O would mean y = 0 mod p; kernel vectors are mod-p reduced
    }
    OrderLat bigger = normalize_order(A, O.den * p, rows);
    // did it grow? compare discriminants (index change)
    if (!(bigger.den == O.den && bigger.rows == O.rows)) {
        // verify containment O <= bigger
        grew = true;
        O = bigger;
    }
    return grew;
}

inline OrderLat p_maximal_order(const AlgebraQ& A, OrderLat O, const Int& p) {
    while (p_enlarge_once(A, O, p)) {
    }
    return O;
}

// maximal order from a starting order, maximalising at the given primes
inline OrderLat maximal_order(const AlgebraQ& A, OrderLat O, const std::vector<Int>& primes) {
    for (auto& p : primes) O = p_maximal_order(A, O, p);
    return O;
}

// ---------------- ideals of the maximal order ----------------

// Ideals are full-rank lattices in ORDER coordinates, HNF rows; the order is
// carried separately. Integrality and O-stability are the caller's contract.
struct NFIdeal {
    IntMat rows;  // n x n HNF over the order basis

    Int norm() const {
        Int d = 1;
        size_t c = 0;
        for (size_t i = 0; i < rows.size(); ++i) {
            while (c < rows[0].size() && rows[i][c] == 0) ++c;
            d *= rows[i][c];
        }
        return d;
    }
    bool operator==(const NFIdeal& o) const { return rows == o.rows; }
};

inline NFIdeal ideal_from_rows(IntMat rows) {
    NFIdeal I;
    I.rows = hnf_rows(std::move(rows));
    if (I.rows.size() != I.rows[0].size()) throw arithmetic_error("ideal_from_rows: not full rank");
    return I;
}

inline NFIdeal ideal_whole(size_t n) {
    NFIdeal I;
    I.rows = identity_mat(n);
    return I;
}

inline bool ideal_contains_vec(const NFIdeal& I, const IntVec& x) { return hnf_contains(I.rows, x); }

inline NFIdeal ideal_mul(const std::vector<IntMat>& mult, const NFIdeal& I, const NFIdeal& J) {
    size_t n = I.rows.size();
    IntMat rows;
    for (auto& a : I.rows)
        for (auto& b : J.rows) {
            IntVec prod(n, 0);
            for (size_t i = 0; i < n; ++i) {
                if (a[i] == 0) continue;
                for (size_t k = 0; k < n; ++k) {
                    if (b[k] == 0) continue;
                    Int c = a[i] * b[k];
                    for (size_t t = 0; t < n; ++t) prod[t] += c * mult[i][k][t];
                }
            }
            rows.push_back(prod);
        }
    return ideal_from_rows(std::move(rows));
}

// principal ideal generated by an order element (order coords)
inline NFIdeal ideal_principal(const std::vector<IntMat>& mult, const IntVec& g) {
    size_t n = g.size();
    IntMat rows;
    for (size_t j = 0; j < n; ++j) {
        IntVec prod(n, 0);
        for (size_t i = 0; i < n; ++i) {
            if (g[i] == 0) continue;
            for (size_t t = 0; t < n; ++t) prod[t] += g[i] * mult[i][j][t];
        }
        rows.push_back(prod);
    }
    return ideal_from_rows(std::move(rows));
}

// ---------------- prime decomposition ----------------

struct NFPrime {
    Int p;
    long e = 1, f = 1;
    NFIdeal ideal;        // the maximal ideal as a lattice over the order basis
    std::vector<NFIdeal> power_cache;  // ideal^k, lazily extended

    Int norm() const { return pow(p, (unsigned long)f); }
};

// All primes above p in the maximal order, by radical splitting of O/pO.
inline std::vector<NFPrime> primes_above(const AlgebraQ& A, const OrderLat& O,
                                         const std::vector<IntMat>& mult, const Int& p) {
    size_t n = A.n;
    IntVec onec = one_coords(A, O);

    // component = lattice L (HNF rows over order coords) with pO + rad <= L,
    // representing the kernel of O -> (component algebra)
    struct Comp {
        IntMat L;
    };
    IntMat rad = p_radical(A, O, mult, p);
    IntMat base = rad;
    for (size_t i = 0; i < n; ++i) {
        IntVec r(n, 0);
        r[i] = p;
        base.push_back(r);
    }
    std::vector<Comp> todo{Comp{hnf_rows(base)}};
    std::vector<IntMat> finished;

    auto quotient_basis = [&](const IntMat& L) {
        // representatives of a basis of O/L over F_p: columns not pivotal... use
        // the standard: e_j for j not a pivot column of L with pivot value 1
        // general case: collect e_j whose reduction is independent
        std::vector<IntVec> reps;
        IntMat probe;  // rows: current chosen reps reduced... simple approach:
        // O/L is an F_p-vector space of dim = n - (number of pivots with entry
        // not divisible by p...) -- since pO <= L, L has elementary divisors
        // 1 or p; reps = e_j for pivot entries equal to p
        for (size_t i = 0; i < L.size(); ++i) {
            size_t c = 0;
            while (c < n && L[i][c] == 0) ++c;
            if (L[i][c] == p) {
                IntVec e(n, 0);
                e[c] = 1;
                reps.push_back(e);
            }
        }
        return reps;
    };

    auto reduce_mod_L = [&](const IntMat& L, IntVec x) {
        // reduce x modulo the lattice L (HNF, full rank)
        std::vector<size_t> pivot(L.size());
        for (size_t i = 0; i < L.size(); ++i) {
            size_t c = 0;
            while (c < n && L[i][c] == 0) ++c;
            pivot[i] = c;
        }
        for (size_t ii = 0; ii < L.size(); ++ii) {
            size_t c = pivot[ii];
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), x[c].get_mpz_t(), L[ii][c].get_mpz_t());
            if (q != 0)
                for (size_t k = 0; k < n; ++k) x[k] -= q * L[ii][k];
        }
        return x;
    };

    while (!todo.empty()) {
        Comp C = todo.back();
        todo.pop_back();
        auto reps = quotient_basis(C.L);
        size_t m = reps.size();
        if (m == 0) continue;  // trivial component
        // multiplication on the quotient basis
        auto qmul = [&](const IntVec& a, const IntVec& b) {
            IntVec prod(n, 0);
            for (size_t i = 0; i < n; ++i) {
                if (a[i] == 0) continue;
                for (size_t k = 0; k < n; ++k) {
                    if (b[k] == 0) continue;
                    Int c = a[i] * b[k];
                    for (size_t t = 0; t < n; ++t) prod[t] += c * mult[i][k][t];
                }
            }
            return reduce_mod_L(C.L, prod);
        };
        // coordinates of x over reps (each rep is a unit vector e_c with
        // pivot p): coordinate = x[c] mod p after reduction
        std::vector<size_t> rep_cols(m);
        for (size_t t = 0; t < m; ++t) {
            size_t c = 0;
            while (reps[t][c] == 0) ++c;
            rep_cols[t] = c;
        }
        auto qcoords = [&](const IntVec& xred) {
            IntVec v(m);
            for (size_t t = 0; t < m; ++t) v[t] = mod(xred[rep_cols[t]], p);
            return v;
        };
        // frobenius-fixed subalgebra: kernel of (x -> x^p) - id on the quotient
        IntMat FM(m, IntVec(m, 0));
        for (size_t j = 0; j < m; ++j) {
            // reps[j]^p
            IntVec acc = reduce_mod_L(C.L, onec);
            IntVec basepow = reps[j];
            Int ex = p;
            while (ex > 0) {
                if (mpz_odd_p(ex.get_mpz_t())) acc = qmul(acc, basepow);
                basepow = qmul(basepow, basepow);
                ex >>= 1;
            }
            IntVec v = qcoords(acc);
            for (size_t i = 0; i < m; ++i) FM[i][j] = v[i];
            FM[j][j] -= 1;
        }
        IntMat fix = kernel_mod_p(FM, p);
        if (fix.size() <= 1) {
            finished.push_back(C.L);
            continue;
        }
        // pick a non-scalar fixed element alpha and split by its eigenvalues
        IntVec alpha_q;
        for (auto& v : fix) {
            // scalar iff v is proportional to coords of 1
            IntVec onered = qcoords(reduce_mod_L(C.L, onec));
            bool scalar = true;
            // find lambda with v = lambda * onered (both mod p)
            Int lam = 0;
            for (size_t t = 0; t < m; ++t)
                if (onered[t] != 0) {
                    lam = mod(v[t] * inv_mod(onered[t], p), p);
                    break;
                }
            for (size_t t = 0; t < m; ++t)
                if (mod(v[t] - lam * onered[t], p) != 0) scalar = false;
            if (!scalar) {
                alpha_q = v;
                break;
            }
        }
        if (alpha_q.empty()) throw arithmetic_error("primes_above: no splitting element");
        // alpha as an order vector
        IntVec alpha(n, 0);
        for (size_t t = 0; t < m; ++t)
            for (size_t k = 0; k < n; ++k) alpha[k] += alpha_q[t] * reps[t][k];
        // eigenvalues of alpha: roots of its minimal polynomial over F_p,
        // which splits into distinct linear factors in the fixed algebra
        std::vector<Int> lambdas;
        {
            // powers of alpha in quotient coordinates, find first dependency
            std::vector<IntVec> powers;  // quotient coords
            IntVec cur = qcoords(reduce_mod_L(C.L, onec));
            powers.push_back(cur);
            IntVec alpha_red = reduce_mod_L(C.L, alpha);
            IntVec curfull = reduce_mod_L(C.L, onec);
            for (size_t d = 1; d <= m; ++d) {
                curfull = qmul(curfull, alpha_red);
                powers.push_back(qcoords(curfull));
                // solve c_0 p_0 + ... + c_{d-1} p_{d-1} = p_d over F_p
                IntMat sys(m, IntVec(d + 1, 0));
                for (size_t i = 0; i < m; ++i) {
                    for (size_t jj = 0; jj < d; ++jj) sys[i][jj] = powers[jj][i];
                    sys[i][d] = mod(-powers[d][i], p);
                }
                // kernel with last coordinate 1 gives the dependency
                IntMat ker2 = kernel_mod_p(sys, p);
                IntVec sol;
                for (auto& v : ker2)
                    if (v[d] != 0) {
                        Int inv = inv_mod(v[d], p);
                        sol.assign(d + 1, 0);
                        for (size_t t = 0; t <= d; ++t) sol[t] = mod(v[t] * inv, p);
                        break;
                    }
                if (!sol.empty()) {
                    // minimal polynomial: x^d - sum c_j x^j
                    IntVec minpoly(d + 1, 0);
                    minpoly[d] = 1;
                    for (size_t jj = 0; jj < d; ++jj) minpoly[jj] = mod(-sol[jj], p);
                    lambdas = fp_poly_roots(minpoly, p);
                    break;
                }
            }
        }
        if (lambdas.size() < 2) throw arithmetic_error("primes_above: splitting element has one eigenvalue");
        for (const Int& lam : lambdas) {
            // ideal (alpha - lam) + L: if proper and nontrivial, recurse
            IntVec shifted = alpha;
            // subtract lam * 1
            for (size_t k = 0; k < n; ++k) shifted[k] -= lam * onec[k];
            // generate: shifted * reps + L
            IntMat rows = C.L;
            for (auto& rvec : reps) {
                IntVec prod(n, 0);
                for (size_t i = 0; i < n; ++i) {
                    if (shifted[i] == 0) continue;
                    for (size_t k = 0; k < n; ++k) {
                        if (rvec[k] == 0) continue;
                        Int c = shifted[i] * rvec[k];
                        for (size_t t = 0; t < n; ++t) prod[t] += c * mult[i][k][t];
                    }
                }
                rows.push_back(reduce_mod_L(C.L, prod));
            }
            IntMat L2 = hnf_rows(rows);
            // proper? the quotient must be smaller than the current one but
            // nonzero
            Int det_old = hnf_det(C.L, n), det_new = hnf_det(L2, n);
            if (det_new == det_old) continue;          // nothing new
            if (det_new == 1) continue;                // collapsed entirely
            todo.push_back(Comp{L2});
        }
    }

    std::vector<NFPrime> out;
    for (auto& L : finished) {
        NFPrime P;
        P.p = p;
        P.ideal.rows = L;
        Int nrm = hnf_det(L, n);
        P.f = valuation(nrm, p);
        out.push_back(P);
    }
    // ramification indices: v_P(pO) via powers
    // pO as ideal lattice
    for (auto& P : out) {
        IntVec pvec(n, 0);
        NFIdeal pO;
        IntMat rows;
        for (size_t i = 0; i < n; ++i) {
            IntVec r(n, 0);
            r[i] = p;
            rows.push_back(r);
        }
        pO.rows = hnf_rows(rows);
        // v = max k with pO <= P^k
        NFIdeal Pk = P.ideal;
        long v = 0;
        while (true) {
            bool cont = true;
            for (auto& row : pO.rows)
                if (!ideal_contains_vec(Pk, row)) {
                    cont = false;
                    break;
                }
            if (!cont) break;
            ++v;
            Pk = ideal_mul(mult, Pk, P.ideal);
            if (v > long(n)) throw arithmetic_error("primes_above: ramification runaway");
        }
        P.e = v;
    }
    // sanity: sum e*f = n
    long total = 0;
    for (auto& P : out) total += P.e * P.f;
    if (total != long(n)) throw arithmetic_error("primes_above: sum e*f mismatch");
    return out;
}

// valuation of a nonzero order element at P (requires p | N(x) handling by
// the caller for efficiency; correct regardless)
inline long prime_valuation(const std::vector<IntMat>& mult, NFPrime& P, const IntVec& x) {
    if (P.power_cache.empty()) P.power_cache.push_back(P.ideal);
    long v = 0;
    while (true) {
        if (v >= long(P.power_cache.size()))
            P.power_cache.push_back(ideal_mul(mult, P.power_cache.back(), P.ideal));
        if (!ideal_contains_vec(P.power_cache[size_t(v)], x)) return v;
        ++v;
        if (v > 20000) throw arithmetic_error("prime_valuation: runaway");
    }
}

// valuation of an ideal at P
inline long prime_valuation_ideal(const std::vector<IntMat>& mult, NFPrime& P, const NFIdeal& I) {
    long v = -1;
    for (auto& row : I.rows) {
        long w = prime_valuation(mult, P, row);
        v = v < 0 ? w : std::min(v, w);
        if (v == 0) break;
    }
    return v;
}

}  // namespace nf

}  // namespace acyc
