#pragma once

#include "acyc/abgroup.hpp"
#include "acyc/quadfield.hpp"

namespace acyc {

// (O_k / 3^nu)^* presented by generators, relation rows and a discrete log,
// for an imaginary quadratic maximal order. This is the local block of the
// ray class group presentation.
struct LocalUnitGroup {
    long nu = 1;
    size_t ngens = 0;
    IntMat relations;                                // rows over the generators
    std::function<IntVec(const QuadElement&)> dlog;  // element prime to 3 -> coords
    IntVec minus_one;                                // dlog of -1

    AbGroup shape() const { return group_from_relations(relations, ngens); }
};

namespace lunits {

// arithmetic in R = (Z/3^nu)[t]/(t^2 + m); at 3 this is O_k tensor Z/3^nu
struct RingElt {
    Int a, b;  // a + b t
};

struct Ring {
    Int M;       // 3^nu
    Int m;       // t^2 = -m
    long nu = 1;

    RingElt one() const { return {Int(1), Int(0)}; }
    RingElt mul(const RingElt& x, const RingElt& y) const {
        return {mod(x.a * y.a - m * x.b * y.b, M), mod(x.a * y.b + x.b * y.a, M)};
    }
    RingElt pow(RingElt x, Int e) const {
        RingElt acc = one();
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) acc = mul(acc, x);
            x = mul(x, x);
            e >>= 1;
        }
        return acc;
    }
    RingElt inv(const RingElt& x) const {
        Int N = mod(x.a * x.a + m * x.b * x.b, M);
        Int Ninv = inv_mod(N, M);
        return {mod(x.a * Ninv, M), mod(-x.b * Ninv, M)};
    }
    bool eq(const RingElt& x, const RingElt& y) const {
        return mod(x.a - y.a, M) == 0 && mod(x.b - y.b, M) == 0;
    }
    RingElt from_element(const QuadElement& e) const {
        Int inv2 = inv_mod(Int(2), M);
        auto lift = [&](const Rat& q) -> Int {
            if (q.get_den() == 1) return mod(q.get_num(), M);
            if (q.get_den() == 2) return mod(q.get_num() * inv2, M);
            throw arithmetic_error("local lift: denominator not in {1,2}");
        };
        return {lift(e.x), lift(e.y)};
    }

    // exact truncated log of a 1-unit; all terms are 3-integral
    RingElt log1(const RingElt& y) const {
        Int ua = y.a - 1, ub = y.b;
        Int pad = pow3(14);
        Int bigM = M * pad;
        RingElt sum{Int(0), Int(0)};
        Int pa = mod(ua, bigM), pb = mod(ub, bigM);
        long kmax = 2 * nu + 8;
        for (long k = 1; k <= kmax; ++k) {
            if (k > 1) {
                Int na = mod(pa * ua - m * pb * ub, bigM);
                Int nb = mod(pa * ub + pb * ua, bigM);
                pa = na;
                pb = nb;
            }
            long vk = valuation(Int(k), Int(3));
            Int p3 = pow3((unsigned long)vk);
            Int kk = divexact(Int(k), p3);
            if (pa % p3 != 0 || pb % p3 != 0) throw arithmetic_error("local log: term not 3-integral");
            Int ta = mod(divexact(pa, p3) * inv_mod(mod(kk, M), M), M);
            Int tb = mod(divexact(pb, p3) * inv_mod(mod(kk, M), M), M);
            if (k % 2 == 0) {
                ta = mod(-ta, M);
                tb = mod(-tb, M);
            }
            sum.a = mod(sum.a + ta, M);
            sum.b = mod(sum.b + tb, M);
        }
        return sum;
    }

    // exact truncated exp of z with z in 3R (and v(z) > e/(p-1) locally)
    RingElt exp1(const RingElt& z) const {
        RingElt sum = one();
        Int pad = pow3(16);
        Int bigM = M * pad;
        Int pa = 1, pb = 0;
        Int factorial = 1;
        long kmax = 2 * nu + 10;
        for (long k = 1; k <= kmax; ++k) {
            Int na = mod(pa * z.a - m * pb * z.b, bigM);
            Int nb = mod(pa * z.b + pb * z.a, bigM);
            pa = na;
            pb = nb;
            factorial *= k;
            long vf = valuation(factorial, Int(3));
            Int f3 = pow3((unsigned long)vf);
            Int fu = mod(divexact(factorial, f3), M);
            if (pa % f3 != 0 || pb % f3 != 0) throw arithmetic_error("local exp: term not 3-integral");
            sum.a = mod(sum.a + divexact(pa, f3) * inv_mod(fu, M), M);
            sum.b = mod(sum.b + divexact(pb, f3) * inv_mod(fu, M), M);
        }
        return sum;
    }
};

// discrete log base 2 in (Z/3^nu)^* (cyclic of order 2*3^(nu-1), small)
inline Int dlog_mod_3nu(const Int& x, const Int& M) {
    Int acc = 1, target = mod(x, M);
    Int ord = divexact(M, Int(3)) * 2;
    for (Int e = 0; e < ord; ++e) {
        if (acc == target) return e;
        acc = mod(2 * acc, M);
    }
    throw arithmetic_error("dlog_mod_3nu: not a unit");
}

}  // namespace lunits

// Structure of (O_k/3^nu)^* with generator presentation and discrete log.
inline LocalUnitGroup local_unit_group(const QuadField& k, long nu) {
    if (nu < 1 || nu > 8) throw arithmetic_error("local_unit_group: need 1 <= nu <= 8");
    assert(k.imaginary);
    LocalUnitGroup U;
    U.nu = nu;
    const Int M = pow3((unsigned long)nu);
    const Int m = k.m;
    const Int ord1 = pow3((unsigned long)(nu - 1));

    if (k.split3 == Split3::split) {
        // O/3^nu = Z/3^nu x Z/3^nu via sqrt(-m); units cyclic generated by 2
        Int s = qf::sqrt_mod(mod(-m, Int(3)), Int(3));
        long prec = 1;
        while (prec < nu) {
            long nprec = std::min(2 * prec, nu);
            Int mod_np = pow3((unsigned long)nprec);
            Int f = mod(s * s + m, mod_np);
            s = mod(s - f * inv_mod(mod(2 * s, mod_np), mod_np), mod_np);
            prec = nprec;
        }
        assert(mod(s * s + m, M) == 0);
        Int n = 2 * ord1;
        U.ngens = 2;
        U.relations = {{n, 0}, {0, n}};
        Int inv2 = inv_mod(Int(2), M);
        U.dlog = [M, s, inv2](const QuadElement& el) -> IntVec {
            auto lift = [&](const Rat& q) -> Int {
                if (q.get_den() == 1) return mod(q.get_num(), M);
                return mod(q.get_num() * inv2, M);
            };
            Int x = lift(el.x), y = lift(el.y);
            return {lunits::dlog_mod_3nu(x + y * s, M), lunits::dlog_mod_3nu(x - y * s, M)};
        };
        U.minus_one = U.dlog(-QuadElement::one(k.radicand));
        return U;
    }

    lunits::Ring R{M, m, nu};

    if (k.split3 == Split3::inert) {
        // Teichmueller Z/8 x one-units (Z/3^(nu-1))^2 with exp(3), exp(3t)
        lunits::RingElt g8{Int(0), Int(0)};
        for (long a = 0; a < 3 && g8.a == 0 && g8.b == 0; ++a)
            for (long b = 1; b < 3; ++b) {
                lunits::RingElt cand{Int(a), Int(b)};
                lunits::RingElt c4 = R.pow(cand, Int(4));
                if (!(mod(c4.a - 1, Int(3)) == 0 && mod(c4.b, Int(3)) == 0)) {
                    g8 = cand;
                    break;
                }
            }
        assert(!(g8.a == 0 && g8.b == 0));
        Int teich_pow = pow3((unsigned long)(2 * (nu - 1)));
        g8 = R.pow(g8, teich_pow);
        U.ngens = 3;
        U.relations = {{8, 0, 0}, {0, ord1, 0}, {0, 0, ord1}};
        U.dlog = [R, g8, teich_pow, ord1, nu](const QuadElement& el) -> IntVec {
            lunits::RingElt x = R.from_element(el);
            lunits::RingElt w = R.pow(x, teich_pow);
            Int k8 = 0;
            lunits::RingElt acc = R.one();
            while (!R.eq(acc, w)) {
                acc = R.mul(acc, g8);
                if (++k8 > 8) throw arithmetic_error("local dlog: Teichmueller part not found");
            }
            lunits::RingElt y = R.mul(x, R.inv(w));
            if (nu == 1) return {k8, Int(0), Int(0)};
            lunits::RingElt L = R.log1(y);
            if (L.a % 3 != 0 || L.b % 3 != 0) throw arithmetic_error("local dlog: log not in 3R");
            return {k8, mod(divexact(L.a, Int(3)), ord1), mod(divexact(L.b, Int(3)), ord1)};
        };
        U.minus_one = U.dlog(-QuadElement::one(k.radicand));
        return U;
    }

    // ramified: generators (-1, 1+t, exp(3), exp(3t)); (1+t)^3 lands in the
    // exp-image and contributes the relation row
    lunits::RingElt g0{Int(1), Int(1)};
    lunits::RingElt lam = R.log1(R.pow(g0, Int(3)));
    if (nu > 1 && (lam.a % 3 != 0 || lam.b % 3 != 0))
        throw arithmetic_error("local_unit_group: log((1+t)^3) not in 3R");
    Int la = nu == 1 ? Int(0) : mod(divexact(lam.a, Int(3)), ord1);
    Int lb = nu == 1 ? Int(0) : mod(divexact(lam.b, Int(3)), ord1);
    U.ngens = 4;
    U.relations = {{2, 0, 0, 0}, {0, 3, -la, -lb}, {0, 0, ord1, 0}, {0, 0, 0, ord1}};
    U.dlog = [R, M, ord1, nu](const QuadElement& el) -> IntVec {
        lunits::RingElt x = R.from_element(el);
        Int sgn = mod(x.a, Int(3));
        if (sgn == 0) throw arithmetic_error("local dlog: element not prime to 3");
        Int t0 = 0;
        if (sgn == 2) {
            t0 = 1;
            x.a = mod(-x.a, M);
            x.b = mod(-x.b, M);
        }
        lunits::RingElt g0l{Int(1), Int(1)};
        Int a = mod(x.b, Int(3));  // x = (1+t)^a mod p^2
        lunits::RingElt y = R.mul(x, R.pow(R.inv(g0l), a));
        if (nu == 1) return {t0, a, Int(0), Int(0)};
        lunits::RingElt L = R.log1(y);
        if (L.a % 3 != 0 || L.b % 3 != 0) throw arithmetic_error("local dlog: ramified log not in 3R");
        return {t0, a, mod(divexact(L.a, Int(3)), ord1), mod(divexact(L.b, Int(3)), ord1)};
    };
    U.minus_one = IntVec{Int(1), Int(0), Int(0), Int(0)};
    return U;
}

}  // namespace acyc
