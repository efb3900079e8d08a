#pragma once

#include <gmpxx.h>

#include "acyc/linalg.hpp"

namespace acyc {

// Floating helpers on top of mpf_class. Precision is always passed
// explicitly; nothing here is exact, exactness is restored by the callers'
// integer verification steps.
using Flt = mpf_class;

struct Cplx {
    Flt re, im;
    Cplx(Flt r = Flt(0), Flt i = Flt(0)) : re(std::move(r)), im(std::move(i)) {}
    Cplx operator+(const Cplx& o) const { return {re + o.re, im + o.im}; }
    Cplx operator-(const Cplx& o) const { return {re - o.re, im - o.im}; }
    Cplx operator*(const Cplx& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    Cplx operator*(const Flt& c) const { return {re * c, im * c}; }
};

inline Flt flt_abs(const Flt& x) { return x >= 0 ? x : Flt(-x); }

inline Flt flt_of(const Rat& q, mp_bitcnt_t prec) {
    Flt num(q.get_num(), prec), den(q.get_den(), prec);
    return num / den;
}

// sqrt of a nonnegative float
inline Flt flt_sqrt(const Flt& x) {
    Flt r;
    mpf_sqrt(r.get_mpf_t(), x.get_mpf_t());
    return r;
}

// continued-fraction rational reconstruction with denominator cap
inline std::optional<Rat> rat_from_flt(const Flt& x, const Int& max_den) {
    Flt cur = x;
    Int p_prev = 0, p_cur = 1, q_prev = 1, q_cur = 0;
    for (int it = 0; it < 300; ++it) {
        Flt fl = floor(cur);
        Int a(0);
        mpz_set_f(a.get_mpz_t(), fl.get_mpf_t());
        Int p_next = a * p_cur + p_prev;
        Int q_next = a * q_cur + q_prev;
        if (q_next > max_den) break;
        p_prev = p_cur;
        p_cur = p_next;
        q_prev = q_cur;
        q_cur = q_next;
        Flt frac = cur - fl;
        if (frac < Flt(1e-40)) break;
        cur = Flt(1) / frac;
    }
    if (q_cur == 0) return std::nullopt;
    Rat r(p_cur, q_cur);
    r.canonicalize();
    return r;
}

// Textbook LLL (delta = 0.99) on rows given as floating vectors; returns the
// unimodular transform U with reduced = U * rows.
struct LLLResult {
    IntMat U;
};

inline LLLResult lll_reduce(std::vector<std::vector<Flt>> B) {
    size_t n = B.size();
    LLLResult R;
    R.U = identity_mat(n);
    size_t dim = B[0].size();
    auto dot = [&](const std::vector<Flt>& a, const std::vector<Flt>& b) {
        Flt s(0, a[0].get_prec());
        for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };
    std::vector<std::vector<Flt>> Bs;  // Gram-Schmidt vectors
    std::vector<std::vector<Flt>> mu(n, std::vector<Flt>(n, Flt(0)));
    std::vector<Flt> Bnorm(n, Flt(0));
    auto gso = [&]() {
        Bs = B;
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < i; ++j) {
                mu[i][j] = dot(B[i], Bs[j]) / Bnorm[j];
                for (size_t t = 0; t < dim; ++t) Bs[i][t] -= mu[i][j] * Bs[j][t];
            }
            Bnorm[i] = dot(Bs[i], Bs[i]);
        }
    };
    gso();
    size_t k = 1;
    long guard = 0;
    while (k < n) {
        if (++guard > 100000) throw arithmetic_error("lll_reduce: no convergence");
        // size reduction
        for (size_t j = k; j-- > 0;) {
            Flt r = mu[k][j];
            Flt rounded = floor(r + Flt(0.5));
            if (flt_abs(rounded) >= Flt(1)) {
                Int q(0);
                mpz_set_f(q.get_mpz_t(), rounded.get_mpf_t());
                for (size_t t = 0; t < dim; ++t) B[k][t] -= flt_of(Rat(q), B[k][t].get_prec()) * B[j][t];
                for (size_t t = 0; t < n; ++t) R.U[k][t] -= q * R.U[j][t];
                gso();
            }
        }
        // Lovasz condition
        Flt lhs = Bnorm[k];
        Flt rhs = (Flt(0.99) - mu[k][k - 1] * mu[k][k - 1]) * Bnorm[k - 1];
        if (lhs < rhs) {
            std::swap(B[k], B[k - 1]);
            std::swap(R.U[k], R.U[k - 1]);
            gso();
            k = k > 1 ? k - 1 : 1;
        } else {
            ++k;
        }
    }
    return R;
}

// real roots of a monic integral polynomial by sign-change bisection;
// `prec` controls the working precision
inline std::vector<Flt> real_roots_monic(const std::vector<Int>& f, mp_bitcnt_t prec) {
    long n = long(f.size()) - 1;
    auto eval = [&](const Flt& x) {
        Flt acc(0, prec);
        for (long i = n; i >= 0; --i) {
            acc = acc * x;
            acc += Flt(f[size_t(i)], prec);
        }
        return acc;
    };
    // Cauchy bound
    Int maxc = 1;
    for (long i = 0; i < n; ++i)
        if (cmpabs(f[size_t(i)], maxc) > 0) maxc = abs(f[size_t(i)]);
    Flt B = Flt(maxc, prec) + 2;
    // sample to find sign changes; roots of interest are separated enough for
    // the polynomials handled here (cubics/quadratics after deflation)
    std::vector<Flt> roots;
    long samples = 64 + 8 * n;
    Flt lo = -B, step = (B - lo) / samples;
    Flt prev_x = lo;
    Flt prev_v = eval(lo);
    for (long i = 1; i <= samples; ++i) {
        Flt x = lo + step * i;
        Flt v = eval(x);
        if ((prev_v <= 0 && v >= 0) || (prev_v >= 0 && v <= 0)) {
            // bisect
            Flt a = prev_x, bb = x, va = prev_v;
            for (long it = 0; it < long(prec) + 64; ++it) {
                Flt mid = (a + bb) / 2;
                Flt vm = eval(mid);
                if ((va <= 0 && vm <= 0) || (va >= 0 && vm >= 0)) {
                    a = mid;
                    va = vm;
                } else {
                    bb = mid;
                }
            }
            Flt root = (a + bb) / 2;
            bool dup = false;
            for (auto& r : roots)
                if (flt_abs(r - root) < step / 1000) dup = true;
            if (!dup) roots.push_back(root);
        }
        prev_x = x;
        prev_v = v;
    }
    return roots;
}

}  // namespace acyc
