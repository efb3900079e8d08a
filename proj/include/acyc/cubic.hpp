#pragma once

#include "acyc/embed.hpp"
#include "acyc/numfield.hpp"

namespace acyc {

// monic integral cubic x^3 + c2 x^2 + c1 x + c0
struct CubicPoly {
    Int c2 = 0, c1 = 0, c0 = 0;

    Int disc() const {
        return 18 * c2 * c1 * c0 - 4 * c2 * c2 * c2 * c0 + c2 * c2 * c1 * c1 - 4 * c1 * c1 * c1 -
               27 * c0 * c0;
    }
    std::vector<Int> coeff_vector() const { return {c0, c1, c2, Int(1)}; }
    Int eval(const Int& x) const { return ((x + c2) * x + c1) * x + c0; }
    bool operator==(const CubicPoly& o) const { return c2 == o.c2 && c1 == o.c1 && c0 == o.c0; }
    std::string str() const {
        auto term = [](const Int& c, const std::string& mono) -> std::string {
            if (c == 0) return "";
            std::string s = c > 0 ? "+" : "-";
            Int a = abs(c);
            if (a != 1 || mono.empty()) s += a.get_str();
            if (a != 1 && !mono.empty()) s += "*";
            return s + mono;
        };
        std::string s = "x^3" + term(c2, "x^2") + term(c1, "x") + term(c0, "");
        return s;
    }
};

// integer roots of a monic cubic, by exact bisection on sign changes
inline std::vector<Int> integer_roots(const CubicPoly& f) {
    std::vector<Int> roots;
    Int B = 2;
    for (const Int& c : {f.c0, f.c1, f.c2})
        if (cmpabs(c, B) > 0) B = abs(c);
    B += 2;
    // partition by the critical points: scan sign changes over a few ranges
    // exact approach: any integer root r divides c0 only if c0 != 0; instead
    // bisect f on [-B, B] which has at most 3 real roots
    auto scan = [&](Int lo, Int hi) {
        // recursively bisect while a sign change or a small interval remains
        std::vector<std::pair<Int, Int>> stack{{lo, hi}};
        while (!stack.empty()) {
            auto [a, b] = stack.back();
            stack.pop_back();
            Int fa = f.eval(a), fb = f.eval(b);
            if (fa == 0) roots.push_back(a);
            if (b - a <= 1) {
                if (fb == 0 && b != a) roots.push_back(b);
                continue;
            }
            Int m = (a + b) / 2;
            Int fm = f.eval(m);
            // keep halves that can contain a root: sign change or zero
            bool left = (fa <= 0 && fm >= 0) || (fa >= 0 && fm <= 0);
            bool right = (fm <= 0 && fb >= 0) || (fm >= 0 && fb <= 0);
            // a cubic can have a root without sign change only at tangency;
            // tangent integer roots are caught because fm == 0 there
            if (left) stack.push_back({a, m});
            if (right) stack.push_back({m, b});
        }
    };
    // split at approximate critical points to expose all sign changes
    std::vector<Int> marks{-B, B};
    // critical points of x^3+c2x^2+c1x+c0: roots of 3x^2 + 2c2 x + c1
    Int disc_crit = 4 * f.c2 * f.c2 - 12 * f.c1;
    if (disc_crit > 0) {
        Int s = isqrt(disc_crit);
        for (const Int& num : {Int(-2 * f.c2 - s), Int(-2 * f.c2 + s)}) {
            Int x0;
            mpz_fdiv_q(x0.get_mpz_t(), num.get_mpz_t(), Int(6).get_mpz_t());
            for (Int d = -1; d <= 2; ++d)
                if (x0 + d > -B && x0 + d < B) marks.push_back(x0 + d);
        }
    }
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
    for (size_t i = 0; i + 1 < marks.size(); ++i) scan(marks[i], marks[i + 1]);
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

inline bool cubic_irreducible(const CubicPoly& f) { return integer_roots(f).empty(); }

// roots mod q (counts 0, 1 or 3 for irreducible-over-Q cubics away from disc)
inline long cubic_roots_mod(const CubicPoly& f, const Int& q) {
    long cnt = 0;
    for (Int x = 0; x < q; ++x)
        if (mod(f.eval(x), q) == 0) ++cnt;
    return cnt;
}

// number of roots of f in F_q, as deg gcd(x^q - x, f)
inline long cubic_root_count_mod(const CubicPoly& f, const Int& q) {
    if (q < 300) return cubic_roots_mod(f, q);
    IntVec g{mod(f.c0, q), mod(f.c1, q), mod(f.c2, q), Int(1)};
    IntVec x{Int(0), Int(1)};
    IntVec xq = nf::fp_poly_powmod(x, q, g, q);
    IntVec diff = xq;
    if (diff.size() < 2) diff.resize(2, Int(0));
    diff[1] = mod(diff[1] - 1, q);
    IntVec gc = nf::fp_poly_gcd(g, diff, q);
    long deg = long(gc.size()) - 1;
    while (deg >= 0 && gc[size_t(deg)] == 0) --deg;
    return std::max(deg, 0L);
}

inline bool cubic_irreducible_mod(const CubicPoly& f, const Int& q) {
    return cubic_root_count_mod(f, q) == 0;
}

// the order Z[theta] for a monic cubic
inline OrderLat equation_order(const AlgebraQ& A) {
    OrderLat O;
    O.den = 1;
    O.rows = identity_mat(A.n);
    return O;
}

// 3-valuation of the field discriminant: maximalise Z[theta] at 3 only
inline long field_disc_v3(const CubicPoly& f) {
    if (!cubic_irreducible(f)) throw arithmetic_error("field_disc_v3: reducible cubic");
    AlgebraQ A = power_basis_algebra(f.coeff_vector());
    OrderLat O = nf::p_maximal_order(A, equation_order(A), Int(3));
    Int d = nf::order_disc(A, O);
    return d % 3 == 0 ? valuation(d, Int(3)) : 0;
}

// full field discriminant (requires factoring the polynomial discriminant;
// intended for reduced polynomials)
inline Int field_disc(const CubicPoly& f) {
    if (!cubic_irreducible(f)) throw arithmetic_error("field_disc: reducible cubic");
    AlgebraQ A = power_basis_algebra(f.coeff_vector());
    OrderLat O = equation_order(A);
    for (auto& [p, e] : factor(f.disc()))
        if (e >= 2) O = nf::p_maximal_order(A, O, p);
    return nf::order_disc(A, O);
}

// embeddings of the cubic field: one real root and a complex pair when
// disc < 0; up to three real roots otherwise
struct CubicEmbeddings {
    mp_bitcnt_t prec;
    std::vector<Flt> real;   // real roots
    std::vector<Cplx> cplx;  // one per conjugate pair
};

inline CubicEmbeddings cubic_embeddings(const CubicPoly& f, mp_bitcnt_t prec) {
    CubicEmbeddings E;
    E.prec = prec;
    auto roots = real_roots_monic(f.coeff_vector(), prec);
    if (f.disc() < 0) {
        // exactly one real root; deflate to the quadratic
        if (roots.empty()) throw arithmetic_error("cubic_embeddings: no real root found");
        Flt r = roots[0];
        // x^2 + (c2 + r) x + (c1 + r(c2 + r))
        Flt b = Flt(f.c2, prec) + r;
        Flt c = Flt(f.c1, prec) + r * b;
        Flt disc = b * b - 4 * c;
        Flt im = flt_sqrt(-disc) / 2;
        E.real = {r};
        E.cplx = {Cplx(-b / 2, im)};
    } else {
        E.real = roots;
    }
    return E;
}

namespace detail {

// Enlarge the order by (theta^2 + e theta - 2 e^2)/y when that element is
// integral -- the double-root index pattern of x^3 - 3a x - t at the primes
// of the sqrt coefficient y. Works with composite y, no factorisation;
// integrality is verified exactly through the minimal polynomial.
inline bool enlarge_at_sqrt_part(const AlgebraQ& A, OrderLat& O, const CubicPoly& f, Int y) {
    if (y <= 1) return false;
    Int a = divexact(-f.c1, Int(3));
    if (f.c2 != 0) return false;  // pattern specific to the depressed form
    // strip factors shared with 2a (handled by the explicit prime routine)
    while (true) {
        Int g = gcd(y, 2 * a);
        if (g == 1) break;
        while (y % g == 0) y = divexact(y, g);
        if (y == 1) return false;
    }
    Int e = mod(-f.c0 * inv_mod(mod(2 * a, y), y), y);
    QVec v = A.zero();
    v[0] = Rat(mod(-2 * e * e, y), y);
    v[1] = Rat(e, y);
    v[2] = Rat(1, y);
    // minimal polynomial of v: v^3 + x2 v^2 + x1 v + x0 = 0
    QVec v2 = A.mul(v, v), v3 = A.mul(v2, v);
    QMat M(3, QVec(3));
    QVec rhs(3);
    for (size_t t = 0; t < 3; ++t) {
        M[t][0] = t == 0 ? 1 : 0;
        M[t][1] = v[t];
        M[t][2] = v2[t];
        rhs[t] = -v3[t];
    }
    for (size_t c = 0, r = 0; c < 3 && r < 3; ++c) {
        size_t piv = r;
        while (piv < 3 && M[piv][c] == 0) ++piv;
        if (piv == 3) return false;
        std::swap(M[piv], M[r]);
        std::swap(rhs[piv], rhs[r]);
        Rat iv = Rat(1) / M[r][c];
        for (size_t j = 0; j < 3; ++j) M[r][j] *= iv;
        rhs[r] *= iv;
        for (size_t i = 0; i < 3; ++i) {
            if (i == r) continue;
            Rat fc = M[i][c];
            if (fc == 0) continue;
            for (size_t j = 0; j < 3; ++j) M[i][j] -= fc * M[r][j];
            rhs[i] -= fc * rhs[r];
        }
        ++r;
    }
    for (size_t i = 0; i < 3; ++i)
        if (rhs[i].get_den() != 1) return false;  // not an algebraic integer
    // join v to the order
    Int den = lcm(O.den, y);
    IntMat rows;
    for (size_t i = 0; i < 3; ++i) {
        IntVec row(3);
        Int scale = divexact(den, O.den);
        for (size_t j = 0; j < 3; ++j) row[j] = O.rows[i][j] * scale;
        rows.push_back(row);
    }
    IntVec vr(3);
    for (size_t j = 0; j < 3; ++j) vr[j] = Int(v[j] * den);
    rows.push_back(vr);
    OrderLat bigger = nf::normalize_order(A, den, rows);
    if (bigger.den == O.den && bigger.rows == O.rows) return false;
    O = bigger;
    return true;
}

}  // namespace detail

// Small defining polynomial for the same field: LLL on the T2 lattice of an
// order that is maximal at 3 and at the square primes of disc(f). When the
// square part is known structurally (the sqrt coefficient of a radical),
// callers pass it to avoid factoring the discriminant blind; an unfactored
// cofactor is handled by the composite double-root enlargement and only
// degrades the reduction quality when even that fails.
inline CubicPoly cubic_reduce(const CubicPoly& f, const Int* known_square_part = nullptr) {
    if (!cubic_irreducible(f)) throw arithmetic_error("cubic_reduce: reducible cubic");
    AlgebraQ A = power_basis_algebra(f.coeff_vector());
    OrderLat O = equation_order(A);
    PartialFactor F = known_square_part ? factor_partial(*known_square_part, 24)
                                        : factor_partial(f.disc(), 24);
    O = nf::p_maximal_order(A, O, Int(2));
    O = nf::p_maximal_order(A, O, Int(3));
    for (auto& [p, e] : F.primes)
        if (p > 3 && (known_square_part || e >= 2)) O = nf::p_maximal_order(A, O, p);
    if (known_square_part) {
        Int y = *known_square_part;
        for (auto& [p, e] : F.primes) {
            (void)e;
            while (y % p == 0) y = divexact(y, p);
        }
        for (int round = 0; round < 4; ++round)
            if (!detail::enlarge_at_sqrt_part(A, O, f, y)) break;
    }

    // precision: coefficient size plus slack
    size_t bits = 64;
    for (const Int& c : {f.c0, f.c1, f.c2})
        bits = std::max(bits, mpz_sizeinbase(c.get_mpz_t(), 2));
    mp_bitcnt_t prec = mp_bitcnt_t(2 * bits + 192);
    auto E = cubic_embeddings(f, prec);

    // embedding rows of the order basis
    Flt sqrt2 = flt_sqrt(Flt(2, prec));
    auto embed_real = [&](const QVec& v, const Flt& th) {
        Flt acc(0, prec);
        Flt pw(1, prec);
        for (size_t i = 0; i < 3; ++i) {
            acc += flt_of(v[i], prec) * pw;
            pw *= th;
        }
        return acc;
    };
    auto embed_cplx = [&](const QVec& v, const Cplx& th) {
        Cplx acc(Flt(0, prec), Flt(0, prec));
        Cplx pw(Flt(1, prec), Flt(0, prec));
        for (size_t i = 0; i < 3; ++i) {
            acc = acc + pw * flt_of(v[i], prec);
            pw = pw * th;
        }
        return acc;
    };
    std::vector<std::vector<Flt>> rows;
    for (size_t i = 0; i < 3; ++i) {
        QVec w = O.element(A, i);
        std::vector<Flt> row;
        if (E.cplx.size() == 1) {
            row.push_back(embed_real(w, E.real[0]));
            Cplx z = embed_cplx(w, E.cplx[0]);
            row.push_back(sqrt2 * z.re);
            row.push_back(sqrt2 * z.im);
        } else {
            for (auto& th : E.real) row.push_back(embed_real(w, th));
        }
        rows.push_back(row);
    }
    auto L = lll_reduce(rows);

    // candidates: small combinations of the reduced basis
    CubicPoly best = f;
    Int best_height = 0;
    for (const Int& c : {f.c0, f.c1, f.c2})
        if (cmpabs(c, best_height) > 0) best_height = abs(c);
    for (long a = -2; a <= 2; ++a)
        for (long b = -2; b <= 2; ++b)
            for (long c = -2; c <= 2; ++c) {
                if (a == 0 && b == 0 && c == 0) continue;
                // element = sum of LLL-combination of order basis
                QVec v = A.zero();
                for (size_t i = 0; i < 3; ++i) {
                    Int coef = a * L.U[0][i] + b * L.U[1][i] + c * L.U[2][i];
                    if (coef == 0) continue;
                    QVec w = O.element(A, i);
                    for (size_t t = 0; t < 3; ++t) v[t] += Rat(coef) * w[t];
                }
                // minimal polynomial: kernel of [1, v, v^2, v^3]
                QVec v2 = A.mul(v, v);
                QVec v3 = A.mul(v2, v);
                // solve v3 + x2 v2 + x1 v + x0 = 0
                QMat M(3, QVec(3));
                QVec rhs(3);
                for (size_t t = 0; t < 3; ++t) {
                    M[t][0] = t == 0 ? 1 : 0;
                    M[t][1] = v[t];
                    M[t][2] = v2[t];
                    rhs[t] = -v3[t];
                }
                // gaussian solve
                QVec sol(3);
                {
                    QMat Ag = M;
                    QVec bg = rhs;
                    bool ok = true;
                    for (size_t ccol = 0, r = 0; ccol < 3 && r < 3; ++ccol) {
                        size_t piv = r;
                        while (piv < 3 && Ag[piv][ccol] == 0) ++piv;
                        if (piv == 3) {
                            ok = false;
                            break;
                        }
                        std::swap(Ag[piv], Ag[r]);
                        std::swap(bg[piv], bg[r]);
                        Rat iv = Rat(1) / Ag[r][ccol];
                        for (size_t j = 0; j < 3; ++j) Ag[r][j] *= iv;
                        bg[r] *= iv;
                        for (size_t i2 = 0; i2 < 3; ++i2) {
                            if (i2 == r) continue;
                            Rat fct = Ag[i2][ccol];
                            if (fct == 0) continue;
                            for (size_t j = 0; j < 3; ++j) Ag[i2][j] -= fct * Ag[r][j];
                            bg[i2] -= fct * bg[r];
                        }
                        ++r;
                    }
                    if (!ok) continue;  // v generates a subfield (rational)
                    sol = bg;
                }
                if (sol[0].get_den() != 1 || sol[1].get_den() != 1 || sol[2].get_den() != 1)
                    continue;  // not an algebraic integer: shouldn't happen
                CubicPoly cand{Int(sol[2].get_num()), Int(sol[1].get_num()), Int(sol[0].get_num())};
                if (!cubic_irreducible(cand)) continue;
                Int h = 0;
                for (const Int& cc : {cand.c0, cand.c1, cand.c2})
                    if (cmpabs(cc, h) > 0) h = abs(cc);
                if (h < best_height) {
                    best = cand;
                    best_height = h;
                }
            }
    return best;
}

// root of g in the field Q[x]/(f): numeric solve + exact verification
inline std::optional<QVec> cubic_root_in_field(const CubicPoly& f, const CubicPoly& g,
                                               mp_bitcnt_t prec = 512) {
    AlgebraQ A = power_basis_algebra(f.coeff_vector());
    auto Ef = cubic_embeddings(f, prec);
    auto Eg = cubic_embeddings(g, prec);
    if (Ef.cplx.size() != Eg.cplx.size()) return std::nullopt;
    if (Ef.cplx.empty()) return std::nullopt;  // totally real handled elsewhere
    // solve c0 + c1 th + c2 th^2 = rho over the real and complex embeddings
    const Flt& thr = Ef.real[0];
    const Cplx& thc = Ef.cplx[0];
    const Flt& rhor = Eg.real[0];
    for (int sign = 0; sign < 2; ++sign) {
        Cplx rhoc = Eg.cplx[0];
        if (sign) rhoc.im = -rhoc.im;
        // 3x3 real system
        std::vector<std::vector<Flt>> M{
            {Flt(1, prec), thr, thr * thr},
            {Flt(1, prec), thc.re, thc.re * thc.re - thc.im * thc.im},
            {Flt(0, prec), thc.im, 2 * thc.re * thc.im}};
        std::vector<Flt> rhs{rhor, rhoc.re, rhoc.im};
        // gaussian elimination
        bool ok = true;
        for (size_t c = 0, r = 0; c < 3 && r < 3; ++c) {
            size_t piv = r;
            Flt bestv(0, prec);
            for (size_t i = r; i < 3; ++i)
                if (flt_abs(M[i][c]) > bestv) {
                    bestv = flt_abs(M[i][c]);
                    piv = i;
                }
            if (bestv == 0) {
                ok = false;
                break;
            }
            std::swap(M[piv], M[r]);
            std::swap(rhs[piv], rhs[r]);
            Flt iv = Flt(1, prec) / M[r][c];
            for (size_t j = 0; j < 3; ++j) M[r][j] *= iv;
            rhs[r] *= iv;
            for (size_t i = 0; i < 3; ++i) {
                if (i == r) continue;
                Flt fct = M[i][c];
                for (size_t j = 0; j < 3; ++j) M[i][j] -= fct * M[r][j];
                rhs[i] -= fct * rhs[r];
            }
            ++r;
        }
        if (!ok) continue;
        // rationalize with a denominator bound from the index
        Int max_den = abs(f.disc());
        QVec cand(3);
        bool good = true;
        for (size_t i = 0; i < 3; ++i) {
            auto q = rat_from_flt(rhs[i], max_den);
            if (!q) {
                good = false;
                break;
            }
            cand[i] = *q;
        }
        if (!good) continue;
        // exact verification: g(cand) == 0 in A
        QVec val = A.zero();
        QVec pw = A.one();
        std::vector<Int> gc = g.coeff_vector();
        for (size_t i = 0; i < gc.size(); ++i) {
            for (size_t t = 0; t < 3; ++t) val[t] += Rat(gc[i]) * pw[t];
            if (i + 1 < gc.size()) pw = A.mul(pw, cand);
        }
        bool zero = true;
        for (auto& x : val) zero = zero && x == 0;
        if (zero) return cand;
    }
    return std::nullopt;
}

enum class FieldMatch { equal, distinct, inconclusive };

// field equality of two irreducible integral cubics: discriminant match,
// splitting screen at 100 primes, then the exact-root certificate
inline FieldMatch same_cubic_field(const CubicPoly& f, const CubicPoly& g,
                                   bool exact_pass = true) {
    if (!cubic_irreducible(f) || !cubic_irreducible(g))
        throw arithmetic_error("same_cubic_field: reducible input");
    if (f == g) return FieldMatch::equal;
    Int df = field_disc(f), dg = field_disc(g);
    if (df != dg) return FieldMatch::distinct;
    // splitting screen: root counts agree at 100 good primes
    Int q = 4;
    int checked = 0;
    while (checked < 100) {
        q = next_prime(q);
        if (df % q == 0 || f.disc() % q == 0 || g.disc() % q == 0) continue;
        if (cubic_root_count_mod(f, q) != cubic_root_count_mod(g, q)) return FieldMatch::distinct;
        ++checked;
    }
    if (!exact_pass) return FieldMatch::inconclusive;
    for (mp_bitcnt_t prec : {512, 2048, 8192}) {
        if (cubic_root_in_field(f, g, prec)) return FieldMatch::equal;
    }
    return FieldMatch::inconclusive;
}

}  // namespace acyc
