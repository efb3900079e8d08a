#pragma once

#include "acyc/cubic.hpp"
#include "acyc/embed.hpp"
#include "acyc/numfield.hpp"
#include "acyc/quadfield.hpp"

namespace acyc {

// K = k(theta): the compositum of k = Q(sqrt(-m)) and the cubic layer,
// realised on the tensor basis sqrt(-m)^i * theta^j. The cubic splits in K
// and the generator of Gal(K/k) is stored as an exact matrix.
struct SexticField {
    Int m;
    CubicPoly Q;          // reduced cubic
    AlgebraQ A;           // dimension 6, basis index = i*3 + j
    OrderLat O;           // maximal order
    std::vector<IntMat> mult;  // order multiplication table
    Int disc = 0;
    QMat sigma;           // order-3 automorphism on the e-basis
    std::vector<Int> R;   // degree-6 defining polynomial over Q (monic)

    size_t eidx(size_t i, size_t j) const { return i * 3 + j; }
    QVec sqrt_m() const {
        QVec v = A.zero();
        v[eidx(1, 0)] = 1;
        return v;
    }
    QVec theta() const {
        QVec v = A.zero();
        v[eidx(0, 1)] = 1;
        return v;
    }
    QVec apply_sigma(const QVec& x) const {
        QVec y = A.zero();
        for (size_t j = 0; j < 6; ++j) {
            if (x[j] == 0) continue;
            for (size_t i = 0; i < 6; ++i) y[i] += sigma[i][j] * x[j];
        }
        return y;
    }
    // element of k as a K-vector
    QVec embed_quad(const QuadElement& e) const {
        QVec v = A.zero();
        v[eidx(0, 0)] = e.x;
        v[eidx(1, 0)] = e.y;
        return v;
    }
};

namespace sext {

// delta in K with delta^2 = d (d in the cubic part), delta = sqrt(-m) * (F
// element); numeric solve over the three cubic embeddings, exact verification
inline QVec sqrt_in_twist(const SexticField& K, const QVec& d, const CubicEmbeddings& E,
                          mp_bitcnt_t prec) {
    // d must be supported on the cubic part
    for (size_t i = 0; i < 6; ++i)
        if (i >= 3 && d[i] != 0) throw arithmetic_error("sqrt_in_twist: element not in the cubic part");
    // value of d at each embedding of the cubic field (complex for the pair)
    std::vector<Cplx> th;
    th.push_back({E.real[0], Flt(0, prec)});
    th.push_back(E.cplx[0]);
    th.push_back({E.cplx[0].re, -E.cplx[0].im});
    auto val_at = [&](const QVec& v, const Cplx& t) {
        Cplx acc(Flt(0, prec), Flt(0, prec));
        Cplx pw(Flt(1, prec), Flt(0, prec));
        for (size_t j = 0; j < 3; ++j) {
            acc = acc + pw * flt_of(v[j], prec);
            pw = pw * t;
        }
        return acc;
    };
    auto csqrt = [&](const Cplx& z) {
        // principal square root; clamp the radicands against roundoff
        Flt r = flt_sqrt(z.re * z.re + z.im * z.im);
        Flt a = (r + z.re) / 2, b = (r - z.re) / 2;
        if (a < 0) a = Flt(0, prec);
        if (b < 0) b = Flt(0, prec);
        Flt re = flt_sqrt(a);
        Flt im = flt_sqrt(b);
        if (z.im < 0) im = -im;
        return Cplx(re, im);
    };
    Flt sqm = flt_sqrt(Flt(K.m, prec));
    // solve the three embedding values of y = delta / sqrt(-m) up to signs
    std::vector<Cplx> base;
    for (auto& t : th) {
        Cplx dv = val_at(d, t);
        // y_s = +- sqrt(d_s / (-m))
        Cplx rat{dv.re / (-Flt(K.m, prec)), dv.im / (-Flt(K.m, prec))};
        base.push_back(csqrt(rat));
    }
    (void)sqm;
    Int max_den = 2 * abs(K.Q.disc()) * K.m;
    for (int mask = 0; mask < 8; ++mask) {
        std::vector<Cplx> y = base;
        for (int b = 0; b < 3; ++b)
            if (mask & (1 << b)) {
                y[size_t(b)].re = -y[size_t(b)].re;
                y[size_t(b)].im = -y[size_t(b)].im;
            }
        // solve Vandermonde: c0 + c1 t_s + c2 t_s^2 = y_s (complex system, 3
        // unknowns); use embeddings 0 (real) and 1 (complex, 2 equations)
        // y_0 must be real for a consistent choice when t_0 is real
        std::vector<std::vector<Flt>> M{
            {Flt(1, prec), th[0].re, th[0].re * th[0].re},
            {Flt(1, prec), th[1].re, th[1].re * th[1].re - th[1].im * th[1].im},
            {Flt(0, prec), th[1].im, 2 * th[1].re * th[1].im}};
        std::vector<Flt> rhs{y[0].re, y[1].re, y[1].im};
        bool ok = true;
        for (size_t c = 0, r = 0; c < 3 && r < 3; ++c) {
            size_t piv = r;
            Flt bestv(0, prec);
            for (size_t i2 = r; i2 < 3; ++i2)
                if (flt_abs(M[i2][c]) > bestv) {
                    bestv = flt_abs(M[i2][c]);
                    piv = i2;
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
            for (size_t i2 = 0; i2 < 3; ++i2) {
                if (i2 == r) continue;
                Flt fct = M[i2][c];
                for (size_t j = 0; j < 3; ++j) M[i2][j] -= fct * M[r][j];
                rhs[i2] -= fct * rhs[r];
            }
            ++r;
        }
        if (!ok) continue;
        QVec cand(3);
        bool good = true;
        for (size_t i2 = 0; i2 < 3; ++i2) {
            auto q = rat_from_flt(rhs[i2], max_den);
            if (!q) {
                good = false;
                break;
            }
            cand[i2] = *q;
        }
        if (!good) continue;
        // exact check: -m * cand^2 == d in the cubic algebra
        AlgebraQ F = power_basis_algebra(K.Q.coeff_vector());
        QVec c3(3);
        for (size_t i2 = 0; i2 < 3; ++i2) c3[i2] = cand[i2];
        QVec sq = F.mul(c3, c3);
        bool zero = true;
        for (size_t i2 = 0; i2 < 3; ++i2)
            if (Rat(-K.m) * sq[i2] != d[i2]) zero = false;
        if (!zero) continue;
        // delta = sqrt(-m) * cand
        QVec delta(6, Rat(0));
        for (size_t j = 0; j < 3; ++j) delta[3 + j] = cand[j];
        return delta;
    }
    throw arithmetic_error("sqrt_in_twist: no verified square root (precision?)");
}

}  // namespace sext

inline SexticField make_sextic(const Int& m, const CubicPoly& Q_red,
                               mp_bitcnt_t prec = 1024) {
    SexticField K;
    K.m = m;
    K.Q = Q_red;
    AlgebraQ quad = power_basis_algebra({m, Int(0), Int(1)});  // x^2 + m
    AlgebraQ cub = power_basis_algebra(Q_red.coeff_vector());
    K.A = tensor_algebra(quad, cub);

    // starting order: product of the maximal quadratic and cubic orders
    OrderLat Oq;
    if (mod(Int(-m), Int(4)) == 1) {
        Oq.den = 2;
        Oq.rows = {{2, 0}, {1, 1}};
    } else {
        Oq.den = 1;
        Oq.rows = identity_mat(2);
    }
    OrderLat Oc = equation_order(cub);
    for (auto& [p, e] : factor(Q_red.disc()))
        if (e >= 2) Oc = nf::p_maximal_order(cub, Oc, p);
    Int dF = nf::order_disc(cub, Oc);

    OrderLat O;
    O.den = Oq.den * Oc.den;
    O.rows.assign(6, IntVec(6, 0));
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 3; ++j)
            for (size_t a = 0; a < 2; ++a)
                for (size_t b = 0; b < 3; ++b)
                    O.rows[i * 3 + j][a * 3 + b] = Oq.rows[i][a] * Oc.rows[j][b];
    O = nf::normalize_order(K.A, O.den, O.rows);

    // maximalise at the common bad primes: 2, 3, p | m, p | dF
    std::vector<Int> bad{Int(2), Int(3)};
    for (auto& [p, e] : factor(m)) {
        (void)e;
        if (std::find(bad.begin(), bad.end(), p) == bad.end()) bad.push_back(p);
    }
    for (auto& [p, e] : factor(dF)) {
        (void)e;
        if (std::find(bad.begin(), bad.end(), p) == bad.end()) bad.push_back(p);
    }
    K.O = nf::maximal_order(K.A, O, bad);
    K.mult = nf::order_mult_table(K.A, K.O);
    K.disc = nf::order_disc(K.A, K.O);

    // sigma: theta -> next root of Q inside K
    auto E = cubic_embeddings(Q_red, prec);
    // Q / (x - theta) = x^2 + b x + c with b = theta + c2, c = theta^2 + c2
    // theta + c1 -- in the cubic part
    QVec b(3, Rat(0)), c(3, Rat(0));
    b[1] = 1;
    b[0] = Rat(Q_red.c2);
    c[2] = 1;
    c[1] = Rat(Q_red.c2);
    c[0] = Rat(Q_red.c1);
    // d = b^2 - 4c in the cubic algebra
    AlgebraQ F = power_basis_algebra(Q_red.coeff_vector());
    QVec bsq = F.mul(b, b);
    QVec d(6, Rat(0));
    for (size_t j = 0; j < 3; ++j) d[j] = bsq[j] - 4 * c[j];
    QVec delta = sext::sqrt_in_twist(K, d, E, prec);
    // rho = (-b + delta)/2
    QVec rho = K.A.zero();
    for (size_t j = 0; j < 3; ++j) rho[j] = -b[j] / 2;
    for (size_t j = 0; j < 6; ++j) rho[j] += delta[j] / 2;
    // sigma matrix: sqrt(-m)^i theta^j -> sqrt(-m)^i rho^j
    QVec rho2 = K.A.mul(rho, rho);
    QVec sm = K.sqrt_m();
    std::vector<QVec> images(6);
    images[K.eidx(0, 0)] = K.A.one();
    images[K.eidx(0, 1)] = rho;
    images[K.eidx(0, 2)] = rho2;
    images[K.eidx(1, 0)] = sm;
    images[K.eidx(1, 1)] = K.A.mul(sm, rho);
    images[K.eidx(1, 2)] = K.A.mul(sm, rho2);
    K.sigma.assign(6, QVec(6, Rat(0)));
    for (size_t j = 0; j < 6; ++j)
        for (size_t i = 0; i < 6; ++i) K.sigma[i][j] = images[j][i];

    // sanity: sigma has order 3 and fixes k
    {
        QVec th = K.theta();
        QVec s1 = K.apply_sigma(th);
        QVec s2 = K.apply_sigma(s1);
        QVec s3 = K.apply_sigma(s2);
        if (s1 == th) throw arithmetic_error("make_sextic: sigma is the identity");
        if (!(s3 == th)) throw arithmetic_error("make_sextic: sigma does not have order 3");
        // Q(rho) = 0
        QVec val = K.A.zero();
        QVec pw = K.A.one();
        std::vector<Int> qc = Q_red.coeff_vector();
        for (size_t i = 0; i < qc.size(); ++i) {
            for (size_t t = 0; t < 6; ++t) val[t] += Rat(qc[i]) * pw[t];
            if (i + 1 < qc.size()) pw = K.A.mul(pw, rho);
        }
        for (auto& x : val)
            if (x != 0) throw arithmetic_error("make_sextic: sigma image is not a root");
    }

    // defining polynomial over Q: minimal polynomial of theta + lambda sqrt(-m)
    for (Int lam = 1;; ++lam) {
        QVec gamma = K.theta();
        gamma[K.eidx(1, 0)] += Rat(lam);
        // powers up to 6
        std::vector<QVec> pows{K.A.one()};
        for (int i = 1; i <= 6; ++i) pows.push_back(K.A.mul(pows.back(), gamma));
        // solve sum_{i<6} x_i gamma^i = -gamma^6
        QMat M(6, QVec(6));
        QVec rhs(6);
        for (size_t t = 0; t < 6; ++t) {
            for (size_t i = 0; i < 6; ++i) M[t][i] = pows[i][t];
            rhs[t] = -pows[6][t];
        }
        // gaussian solve; gamma primitive iff the system is uniquely solvable
        bool ok = true;
        {
            QMat Ag = M;
            QVec bg = rhs;
            for (size_t cc = 0, r = 0; cc < 6 && r < 6; ++cc) {
                size_t piv = r;
                while (piv < 6 && Ag[piv][cc] == 0) ++piv;
                if (piv == 6) {
                    ok = false;
                    break;
                }
                std::swap(Ag[piv], Ag[r]);
                std::swap(bg[piv], bg[r]);
                Rat iv = Rat(1) / Ag[r][cc];
                for (size_t j = 0; j < 6; ++j) Ag[r][j] *= iv;
                bg[r] *= iv;
                for (size_t i2 = 0; i2 < 6; ++i2) {
                    if (i2 == r) continue;
                    Rat fct = Ag[i2][cc];
                    if (fct == 0) continue;
                    for (size_t j = 0; j < 6; ++j) Ag[i2][j] -= fct * Ag[r][j];
                    bg[i2] -= fct * bg[r];
                }
                ++r;
            }
            if (ok) {
                K.R.assign(7, Int(0));
                K.R[6] = 1;
                bool integral = true;
                for (size_t i = 0; i < 6; ++i) {
                    if (bg[i].get_den() != 1) integral = false;
                    K.R[i] = Int(bg[i].get_num());
                }
                if (integral) break;
            }
        }
        if (lam > 12) throw arithmetic_error("make_sextic: no primitive element found");
    }
    return K;
}

// the two primes of K above a rational prime via the generic machinery
inline std::vector<nf::NFPrime> sextic_primes_above(const SexticField& K, const Int& p) {
    return nf::primes_above(K.A, K.O, K.mult, p);
}

}  // namespace acyc
