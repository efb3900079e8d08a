#pragma once

#include <unordered_map>

#include "acyc/quadfield.hpp"

namespace acyc {

// Integral binary quadratic form a x^2 + b xy + c y^2.
struct BQF {
    Int a, b, c;
    Int disc() const { return b * b - 4 * a * c; }
    BQF inverse() const { return {a, -b, c}; }
    bool operator==(const BQF& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator<(const BQF& o) const { return std::tie(a, b, c) < std::tie(o.a, o.b, o.c); }
    std::string str() const {
        return "(" + to_string(a) + "," + to_string(b) + "," + to_string(c) + ")";
    }
};

struct BQFHash {
    size_t operator()(const BQF& f) const {
        std::hash<std::string> h;
        return h(f.a.get_str() + "|" + f.b.get_str() + "|" + f.c.get_str());
    }
};

inline BQF principal_form(const Int& D) {
    Int b = mod(D, Int(2));
    return {Int(1), b, divexact(b * b - D, Int(4))};
}

// GL2 action: f((x,y)*(alpha,beta;gamma,delta)) with det +-1 kept explicit.
inline BQF transform(const BQF& f, const Int& al, const Int& be, const Int& ga, const Int& de) {
    Int a2 = f.a * al * al + f.b * al * ga + f.c * ga * ga;
    Int b2 = 2 * f.a * al * be + f.b * (al * de + be * ga) + 2 * f.c * ga * de;
    Int c2 = f.a * be * be + f.b * be * de + f.c * de * de;
    return {a2, b2, c2};
}

// ---------- definite (D < 0, a > 0) ----------

inline bool is_reduced_definite(const BQF& f) {
    if (!(cmpabs(f.b, f.a) <= 0 && f.a <= f.c)) return false;
    if (f.b < 0 && (f.a == f.c || -f.b == f.a)) return false;
    return true;
}

inline BQF reduce_definite(BQF f) {
    assert(f.a > 0 && f.disc() < 0);
    while (!is_reduced_definite(f)) {
        // normalize b into (-a, a]
        Int twoa = 2 * f.a;
        Int r = f.a - mod(f.a - f.b, twoa);  // r in (-a, a]
        if (r != f.b) {
            Int t = divexact(f.b - r, twoa);
            f.c = f.c - t * f.b + t * t * f.a;
            f.b = r;
        }
        if (f.a > f.c) {
            std::swap(f.a, f.c);
            f.b = -f.b;
        } else if (f.a == f.c && f.b < 0) {
            f.b = -f.b;
        }
    }
    return f;
}

// All primitive reduced forms of discriminant D < 0.
inline std::vector<BQF> reduced_forms_definite(const Int& D) {
    assert(D < 0 && (mod(D, Int(4)) == 0 || mod(D, Int(4)) == 1));
    std::vector<BQF> out;
    Int absD = -D;
    Int amax = isqrt(absD / 3);
    for (Int a = 1; a <= amax; ++a) {
        for (Int b = (mpz_even_p(D.get_mpz_t()) ? Int(0) : Int(1)); b <= a; b += 2) {
            Int num = b * b - D;
            if (num % (4 * a) != 0) continue;
            Int c = divexact(num, 4 * a);
            if (c < a) continue;
            if (gcd(gcd(a, b), c) != 1) continue;
            out.push_back({a, b, c});
            if (b != 0 && b != a && a != c) out.push_back({a, -b, c});
        }
    }
    return out;
}

// ---------- indefinite (D > 0 non-square) ----------

// reduced iff |sqrt(D) - 2|a|| < b < sqrt(D)
inline bool is_reduced_indefinite(const BQF& f, const Int& sqrtD) {
    if (f.b <= 0) return false;
    if (f.b > sqrtD) return false;  // b < sqrt D (b integral, D non-square)
    Int D = f.disc();
    Int t = 2 * (f.a >= 0 ? f.a : -f.a);
    Int hi = t + f.b;
    if (D >= hi * hi) return false;  // need sqrt D < 2|a| + b
    Int lo = t - f.b;
    return lo < 0 || lo * lo < D;  // need 2|a| - b < sqrt D
}

// rho reduction step; also used to walk cycles of reduced forms.
// r = -b mod 2|c|, shifted into (|c|-2|c|, |c|] when |c| > sqrt(D) and into
// (sqrt(D)-2|c|, sqrt(D)] otherwise.
inline BQF rho_indefinite(const BQF& f, const Int& sqrtD) {
    Int c = f.c;
    Int absc = c >= 0 ? c : -c;
    Int twoc = 2 * absc;
    Int anchor = absc > sqrtD ? absc : sqrtD;
    Int r = anchor - mod(anchor + f.b, twoc);
    Int cnew = divexact(r * r - f.disc(), 4 * c);
    return {c, r, cnew};
}

inline BQF reduce_indefinite(BQF f, const Int& sqrtD) {
    while (!is_reduced_indefinite(f, sqrtD)) f = rho_indefinite(f, sqrtD);
    return f;
}

// All reduced forms of discriminant D > 0 (fundamental, hence all primitive).
inline std::vector<BQF> reduced_forms_indefinite(const Int& D) {
    std::vector<BQF> out;
    Int sqrtD = isqrt(D);
    for (Int b = (mpz_even_p(D.get_mpz_t()) ? Int(2) : Int(1)); b <= sqrtD; b += 2) {
        Int num = D - b * b;  // = -4ac > 0
        if (num % 4 != 0) continue;
        Int M = divexact(num, Int(4));  // = -ac = |a||c|
        for (Int a = 1; a * a <= M; ++a) {
            if (M % a != 0) continue;
            Int c = divexact(M, a);
            std::vector<std::pair<Int, Int>> cands = {{a, -c}, {-a, c}, {c, -a}, {-c, a}};
            for (auto& [aa, cc] : cands) {
                BQF f{aa, b, cc};
                if (is_reduced_indefinite(f, sqrtD)) out.push_back(f);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------- composition (united forms; sign-agnostic) ----------

namespace detail {

// (x, y) primitive with gcd(f(x,y), N) = 1; `primes` covers the primes of N.
inline std::pair<Int, Int> represent_coprime(const BQF& f, const std::vector<Int>& primes) {
    auto val = [&](const Int& x, const Int& y) -> Int {
        return f.a * x * x + f.b * x * y + f.c * y * y;
    };
    Int x = 1, y = 0, modulus = 1;
    for (auto& p : primes) {
        std::pair<Int, Int> pick{-1, -1};
        for (auto& cand : std::vector<std::pair<Int, Int>>{{1, 0}, {0, 1}, {1, 1}}) {
            if (mod(val(cand.first, cand.second), p) != 0) {
                pick = cand;
                break;
            }
        }
        assert(pick.first >= 0);
        // CRT with current (x, y) mod modulus
        Int g, u, v;
        mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), modulus.get_mpz_t(), p.get_mpz_t());
        auto crt = [&](const Int& r1, const Int& r2) -> Int {
            return mod(r1 + modulus * mod(u * (r2 - r1), p), modulus * p);
        };
        x = crt(x, pick.first);
        y = crt(y, pick.second);
        modulus *= p;
    }
    // force gcd(x, y) = 1 without disturbing residues mod modulus
    for (int t = 0; t < 64; ++t) {
        if (gcd(x, y) == 1) return {x, y};
        x += modulus;
        if (gcd(x, y) == 1) return {x, y};
        y += modulus;
    }
    throw arithmetic_error("represent_coprime: lift failed");
}

}  // namespace detail

// Composition of forms of equal discriminant (Gauss composition via united
// forms). Output is not reduced. `disc_primes`, when supplied, must cover the
// primes of 2*D (the primes of a1 are always added here).
inline BQF compose_raw(const BQF& f1, const BQF& f2,
                       const std::vector<Int>* disc_primes = nullptr) {
    assert(f1.disc() == f2.disc());
    Int D = f1.disc();
    // re-represent f2 with leading coefficient coprime to 2 a1 D
    std::vector<Int> primes;
    if (disc_primes)
        primes = *disc_primes;
    else
        for (auto& [p, e] : factor(2 * D)) {
            (void)e;
            primes.push_back(p);
        }
    for (auto& [p, e] : factor(f1.a)) {
        (void)e;
        if (std::find(primes.begin(), primes.end(), p) == primes.end()) primes.push_back(p);
    }
    auto [x, y] = detail::represent_coprime(f2, primes);
    Int g, u, v;
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    assert(g == 1);
    BQF h = transform(f2, x, -v, y, u);  // det = x*u - (-v)*y = 1
    // now gcd(h.a, 2 f1.a) = 1 and h ~ f2 properly
    Int a1 = f1.a, a2 = h.a;
    // B = b1 mod 2a1 and B = b2 mod 2a2; the moduli share exactly the factor 2
    Int m1 = abs(Int(2 * a1)), m2 = abs(Int(2 * a2));
    Int gg, p, q;
    mpz_gcdext(gg.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t(), m1.get_mpz_t(), m2.get_mpz_t());
    Int diff = h.b - f1.b;
    assert(mod(diff, gg) == 0);
    Int lcm12 = divexact(m1 * m2, gg);
    Int B = mod(f1.b + m1 * mod(p * divexact(diff, gg), divexact(m2, gg)), lcm12);
    Int A = a1 * a2;
    Int C = divexact(B * B - D, 4 * A);
    return {A, B, C};
}

}  // namespace acyc
