#pragma once

#include <climits>
#include <cmath>

#include "acyc/quadfield.hpp"

namespace acyc {

constexpr long V3_INFINITY = LONG_MAX;

inline long v3_or_infinity(const Rat& q) { return q == 0 ? V3_INFINITY : v3(q); }

// Truncated 3-adic logarithm of a 1-unit, projected on the sqrt(-m) axis.
struct MinusLog {
    Rat C1 = 0;        // coefficient of sqrt(-m) in the truncated log
    long v3C1 = V3_INFINITY;
    long trunc_t = 0;  // last series index used
    int e0 = 1;        // 1 unless 3 ramifies
    int dres = 1;      // residue degree of the primes above 3
};

namespace detail {

// smallest T such that every tail term t > T has 3-valuation of its
// sqrt(-m)-coefficient strictly above `val`: (t-1)/e0 - log3(t) > val
inline long certified_truncation(int e0, long val) {
    long t = 2;
    while (true) {
        // check (t-1) / e0 - log3(t) > val via 3^( (t-1) - e0*val ) > t^e0
        long lhs_exp = (t - 1) - e0 * (val + 0);
        bool ok = false;
        if (lhs_exp > 0) {
            Int lhs = pow3((unsigned long)lhs_exp);
            Int rhs = pow(Int(t), (unsigned long)e0);
            ok = lhs > rhs;
        }
        if (ok) return t - 1;  // all t' >= t are safe
        ++t;
    }
}

}  // namespace detail

// log of gamma (a 1-unit at 3) as an exact rational series modulo x^2 + m,
// truncated so that the sign of v3(C1) - val is certified.
inline MinusLog minus_log_raw(const QuadField& k, const QuadElement& gamma, long val,
                              long extra_depth = 0) {
    assert(k.imaginary);
    MinusLog L;
    L.e0 = k.m % 3 == 0 ? 2 : 1;
    L.dres = kronecker(-k.m, Int(3)) == -1 ? 2 : 1;
    QuadElement delta = gamma - QuadElement::one(k.radicand);
    if (delta.is_zero()) return L;  // log 1 = 0
    // 1-unit check: x-part divisible by 3 always, y-part too when unramified
    if (v3_or_infinity(delta.x) < 1 || (L.e0 == 1 && v3_or_infinity(delta.y) < 1))
        throw arithmetic_error("minus_log: element is not a 1-unit at 3");
    // truncation: the program's heuristic cutoff t <= e0*(val + ln t + 1),
    // extended to the certified tail bound
    long T = detail::certified_truncation(L.e0, val);
    for (long t = 2;; ++t) {
        double cutoff = L.e0 * (double(val) + std::log(double(t)) + 1.0);
        if (double(t) > cutoff) {
            if (t - 1 > T) T = t - 1;
            break;
        }
    }
    T += extra_depth;
    QuadElement power = delta;
    QuadElement sum{k.radicand, 0, 0};
    for (long t = 1; t <= T; ++t) {
        if (t > 1) power = power * delta;
        Rat coef = Rat(t % 2 == 1 ? 1 : -1, t);
        sum = sum + power * coef;
    }
    L.C1 = sum.y;
    L.v3C1 = v3_or_infinity(L.C1);
    L.trunc_t = T;
    return L;
}

// The elimination gate: gamma = beta^(3^dres - 1), then pass iff
// v3(C1) > val strictly (the executable convention).
inline std::pair<bool, MinusLog> minus_log_test(const QuadField& k, const QuadElement& beta,
                                                long val, long extra_depth = 0) {
    int dres = kronecker(-k.m, Int(3)) == -1 ? 2 : 1;
    QuadElement gamma = beta.pow(pow3((unsigned long)dres) - 1);
    MinusLog L = minus_log_raw(k, gamma, val, extra_depth);
    bool pass = L.v3C1 == V3_INFINITY || L.v3C1 > val;
    return {pass, L};
}

}  // namespace acyc
