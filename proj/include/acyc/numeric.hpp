#pragma once

#include <gmpxx.h>

#include <cassert>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace acyc {

using Int = mpz_class;
using Rat = mpq_class;

struct arithmetic_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct bound_exceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline int cmpabs(const Int& a, const Int& b) {
    return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t());
}

inline Int gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int lcm(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline Int pow(const Int& a, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), a.get_mpz_t(), e);
    return r;
}

inline Int pow3(unsigned long e) { return pow(Int(3), e); }

// Inverse of a modulo n; a must be invertible.
inline Int inv_mod(const Int& a, const Int& n) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t()) == 0)
        throw arithmetic_error("inv_mod: not invertible");
    return r;
}

inline Int mod(const Int& a, const Int& n) {
    Int r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline Int pow_mod(const Int& a, const Int& e, const Int& n) {
    Int r;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), n.get_mpz_t());
    return r;
}

// Exact quotient; asserts divisibility.
inline Int divexact(const Int& a, const Int& b) {
    assert(b != 0 && a % b == 0);
    Int q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int isqrt(const Int& a) {
    assert(a >= 0);
    Int r;
    mpz_sqrt(r.get_mpz_t(), a.get_mpz_t());
    return r;
}

inline bool is_square(const Int& a) {
    return a >= 0 && mpz_perfect_square_p(a.get_mpz_t()) != 0;
}

// Signed cube root if a is a perfect cube.
inline std::optional<Int> cbrt_exact(const Int& a) {
    Int b = a < 0 ? Int(-a) : a;
    Int r;
    int exact = mpz_root(r.get_mpz_t(), b.get_mpz_t(), 3);
    if (!exact) return std::nullopt;
    return a < 0 ? Int(-r) : r;
}

// p-adic valuation of a nonzero integer.
inline long valuation(const Int& a, const Int& p) {
    assert(a != 0);
    Int r = a < 0 ? Int(-a) : a;
    long v = 0;
    Int q, rem;
    while (true) {
        mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t());
        if (rem != 0) break;
        r = q;
        ++v;
    }
    return v;
}

inline long v3(const Int& a) { return valuation(a, Int(3)); }

// 3-adic valuation of a nonzero rational.
inline long v3(const Rat& q) {
    assert(q != 0);
    return v3(q.get_num()) - v3(q.get_den());
}

// Kronecker symbol (a|n), n != 0.
inline int kronecker(const Int& a, const Int& n) {
    if (n == 0) throw arithmetic_error("kronecker: n = 0");
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

inline bool is_prime(const Int& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

inline Int next_prime(const Int& n) {
    Int r;
    mpz_nextprime(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

namespace detail {

// Pollard rho; returns a nontrivial factor or 0 when the effort cap is hit.
inline Int pollard_rho(const Int& n, long max_rounds = 64) {
    for (Int c = 1; c <= max_rounds; ++c) {
        Int x = 2, y = 2, d = 1;
        Int count = 0;
        while (d == 1) {
            x = mod(x * x + c, n);
            y = mod(y * y + c, n);
            y = mod(y * y + c, n);
            d = gcd(x > y ? x - y : y - x, n);
            if (++count > 4000000) break;
        }
        if (d != n && d != 1) return d;
    }
    return 0;
}

}  // namespace detail

// Factorization with an effort cap: returns prime -> exponent plus the
// unfactored cofactor (1 on success).
struct PartialFactor {
    std::map<Int, long> primes;
    Int cofactor = 1;
    bool complete() const { return cofactor == 1; }
};

inline PartialFactor factor_partial(Int n, long rho_rounds = 64) {
    assert(n != 0);
    PartialFactor F;
    if (n < 0) n = -n;
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
        while (n % p == 0) {
            ++F.primes[Int(p)];
            n /= p;
        }
    }
    for (Int p = 17; p * p <= n && p < 100000; p += 2) {
        while (n % p == 0) {
            ++F.primes[p];
            n = divexact(n, p);
        }
    }
    std::vector<Int> stack;
    if (n > 1) stack.push_back(n);
    while (!stack.empty()) {
        Int m = stack.back();
        stack.pop_back();
        if (m == 1) continue;
        if (is_prime(m)) {
            ++F.primes[m];
            continue;
        }
        // perfect powers first: rho struggles on squares of primes
        for (unsigned long e = 2; e <= 6; ++e) {
            Int r;
            if (mpz_root(r.get_mpz_t(), m.get_mpz_t(), e)) {
                for (unsigned long i = 0; i < e; ++i) stack.push_back(r);
                m = 1;
                break;
            }
        }
        if (m == 1) continue;
        Int d = detail::pollard_rho(m, rho_rounds);
        if (d == 0) {
            F.cofactor *= m;
            continue;
        }
        stack.push_back(d);
        stack.push_back(divexact(m, d));
    }
    return F;
}

// Full factorization; throws if the effort cap is exceeded.
inline std::map<Int, long> factor(const Int& n) {
    PartialFactor F = factor_partial(n, 512);
    if (!F.complete()) throw bound_exceeded("factor: unfactored cofactor " + F.cofactor.get_str());
    return F.primes;
}

// Largest squarefree divisor with the same prime support... actually the
// squarefree kernel m / (largest square divisor), matching core().
inline Int squarefree_core(const Int& n) {
    Int r = 1;
    for (auto& [p, e] : factor(n)) {
        if (e % 2) r *= p;
    }
    return n < 0 ? Int(-r) : r;
}

inline bool is_squarefree(const Int& n) {
    if (n == 0) return false;
    for (auto& [p, e] : factor(n)) {
        (void)p;
        if (e > 1) return false;
    }
    return true;
}

// Primes in [2, bound] by sieve.
inline std::vector<long> primes_up_to(long bound) {
    std::vector<long> out;
    if (bound < 2) return out;
    std::vector<bool> comp(bound + 1, false);
    for (long i = 2; i <= bound; ++i) {
        if (!comp[i]) {
            out.push_back(i);
            for (long j = 2 * i; j <= bound; j += i) comp[j] = true;
        }
    }
    return out;
}

inline std::string to_string(const Int& a) { return a.get_str(); }

inline std::string to_string(const Rat& a) {
    if (a.get_den() == 1) return a.get_num().get_str();
    return a.get_num().get_str() + "/" + a.get_den().get_str();
}

}  // namespace acyc
