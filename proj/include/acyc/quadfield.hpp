#pragma once

#include <array>
#include <optional>
#include <tuple>

#include "acyc/linalg.hpp"
#include "acyc/numeric.hpp"

namespace acyc {

enum class Split3 { split, inert, ramified };

// Quadratic field Q(sqrt(r)) for a squarefree radicand r != 0, 1.
// The maximal order is Z[w] with w = (1 + sqrt r)/2 when r = 1 mod 4 and
// w = sqrt r otherwise.
struct QuadField {
    Int m = 0;         // the driving squarefree positive integer
    Int radicand = 0;  // signed squarefree radicand (-m, 3m or m/3)
    Int disc = 0;      // field discriminant
    bool imaginary = false;
    Split3 split3 = Split3::inert;
    long m_mod9 = 0;

    static QuadField of_radicand(const Int& m, const Int& r) {
        QuadField F;
        F.m = m;
        F.radicand = r;
        F.disc = mod(r, Int(4)) == 1 ? r : 4 * r;
        F.imaginary = r < 0;
        if (F.disc % 3 == 0)
            F.split3 = Split3::ramified;
        else
            F.split3 = kronecker(F.disc, Int(3)) == 1 ? Split3::split : Split3::inert;
        F.m_mod9 = mpz_class(mod(m, Int(9))).get_si();
        return F;
    }

    // 1 if w = (1 + sqrt r)/2, else 0
    int omega_shift() const { return mod(radicand, Int(4)) == 1 ? 1 : 0; }

    bool operator==(const QuadField& o) const { return radicand == o.radicand; }
};

// k = Q(sqrt(-m)) together with its mirror field k* = Q(sqrt(3m)) (defining
// radicand m/3 when 3 | m). Rejects m < 2, non-squarefree m, and m = 3.
inline std::pair<QuadField, QuadField> make_pair_fields(const Int& m) {
    if (m < 2) throw arithmetic_error("make_pair: need m >= 2");
    if (!is_squarefree(m)) throw arithmetic_error("make_pair: m not squarefree");
    if (m == 3) throw arithmetic_error("make_pair: m = 3 excluded");
    QuadField k = QuadField::of_radicand(m, -m);
    Int rstar = m % 3 == 0 ? divexact(m, Int(3)) : Int(3 * m);
    QuadField ks = QuadField::of_radicand(m, rstar);
    return {k, ks};
}

// Element x + y*sqrt(r) with rational coordinates. Integral elements have
// denominators dividing 2, both half-integral together, only for r = 1 mod 4.
struct QuadElement {
    Int r = 0;
    Rat x = 0, y = 0;

    QuadElement() = default;
    QuadElement(const Int& rad, Rat x0, Rat y0) : r(rad), x(std::move(x0)), y(std::move(y0)) {
        x.canonicalize();
        y.canonicalize();
    }
    static QuadElement integer(const Int& rad, const Int& n) { return {rad, Rat(n), Rat(0)}; }
    static QuadElement one(const Int& rad) { return integer(rad, 1); }

    QuadElement conj() const { return {r, x, -y}; }
    Rat norm() const { return x * x - Rat(r) * y * y; }
    Rat trace() const { return 2 * x; }
    bool is_zero() const { return x == 0 && y == 0; }
    bool is_rational() const { return y == 0; }

    bool is_integral() const {
        Int dx = x.get_den(), dy = y.get_den();
        if (dx > 2 || dy > 2) return false;
        if (dx == 1 && dy == 1) return true;
        if (mod(r, Int(4)) != 1) return false;
        return dx == 2 && dy == 2;
    }

    QuadElement operator+(const QuadElement& o) const { return {r, x + o.x, y + o.y}; }
    QuadElement operator-(const QuadElement& o) const { return {r, x - o.x, y - o.y}; }
    QuadElement operator-() const { return {r, -x, -y}; }
    QuadElement operator*(const QuadElement& o) const {
        return {r, x * o.x + Rat(r) * y * o.y, x * o.y + y * o.x};
    }
    QuadElement operator*(const Rat& c) const { return {r, x * c, y * c}; }
    QuadElement operator/(const Rat& c) const { return {r, x / c, y / c}; }
    QuadElement inverse() const {
        Rat n = norm();
        if (n == 0) throw arithmetic_error("inverse of zero");
        return {r, x / n, -y / n};
    }
    QuadElement operator/(const QuadElement& o) const { return *this * o.inverse(); }

    QuadElement pow(Int e) const {
        QuadElement base = *this, acc{r, 1, 0};
        bool neg = e < 0;
        if (neg) e = -e;
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return neg ? acc.inverse() : acc;
    }

    bool operator==(const QuadElement& o) const { return r == o.r && x == o.x && y == o.y; }

    // PARI-like rendering over x^2 - r
    std::string str() const {
        std::string s = "Mod(";
        if (y != 0) s += to_string(y) + "*x" + (x >= 0 ? "+" : "");
        s += to_string(x) + ",x^2" + (r < 0 ? "+" + to_string(Int(-r)) : "-" + to_string(r)) + ")";
        return s;
    }
};

// Integral ideal of the maximal order in Hermite form a*Z + (b + c*w)*Z with
// 0 <= b < a, c | a, c | b.
struct QuadIdeal {
    Int r = 0;
    Int a = 0, b = 0, c = 0;

    Int norm() const { return a * c; }

    bool operator==(const QuadIdeal& o) const {
        return r == o.r && a == o.a && b == o.b && c == o.c;
    }
    bool operator<(const QuadIdeal& o) const {
        return std::tie(a, b, c) < std::tie(o.a, o.b, o.c);
    }
};

namespace qf {

// Tonelli-Shanks square root mod an odd prime q; a must be a residue.
inline Int sqrt_mod(Int a, const Int& q) {
    a = mod(a, q);
    if (a == 0) return 0;
    if (kronecker(a, q) != 1) throw arithmetic_error("sqrt_mod: not a residue");
    if (mod(q, Int(4)) == 3) return pow_mod(a, (q + 1) / 4, q);
    Int s = q - 1;
    long e = 0;
    while (mpz_even_p(s.get_mpz_t())) {
        s /= 2;
        ++e;
    }
    Int n = 2;
    while (kronecker(n, q) != -1) ++n;
    Int x = pow_mod(a, (s + 1) / 2, q);
    Int bb = pow_mod(a, s, q);
    Int g = pow_mod(n, s, q);
    long rr = e;
    while (true) {
        Int t = bb;
        long mm = 0;
        while (t != 1) {
            t = mod(t * t, q);
            ++mm;
        }
        if (mm == 0) return x;
        Int gs = pow_mod(g, pow(Int(2), (unsigned long)(rr - mm - 1)), q);
        g = mod(gs * gs, q);
        x = mod(x * gs, q);
        bb = mod(bb * g, q);
        rr = mm;
    }
}

// coordinates of an integral element over {1, w}
inline std::pair<Int, Int> omega_coords(const QuadField& F, const QuadElement& e) {
    Rat u, v;
    if (F.omega_shift() == 1) {
        u = e.x - e.y;
        v = 2 * e.y;
    } else {
        u = e.x;
        v = e.y;
    }
    if (u.get_den() != 1 || v.get_den() != 1)
        throw arithmetic_error("omega_coords: element not integral");
    return {Int(u.get_num()), Int(v.get_num())};
}

inline QuadElement from_omega_coords(const QuadField& F, const Int& u, const Int& v) {
    if (F.omega_shift() == 1) return {F.radicand, Rat(2 * u + v) / 2, Rat(v) / 2};
    return {F.radicand, Rat(u), Rat(v)};
}

inline QuadElement omega(const QuadField& F) { return from_omega_coords(F, Int(0), Int(1)); }

// Hermite basis of the Z-span of integral generators; the span must be
// stable under multiplication by w.
inline QuadIdeal module_from_generators(const QuadField& F, const std::vector<QuadElement>& gens) {
    IntMat rows;
    for (auto& g : gens) {
        auto [u, v] = omega_coords(F, g);
        rows.push_back({v, u});  // columns ordered (w-coeff, 1-coeff)
    }
    IntMat H = hnf_rows(rows);
    if (H.size() != 2) throw arithmetic_error("module_from_generators: rank < 2");
    QuadIdeal I;
    I.r = F.radicand;
    I.c = H[0][0];
    I.b = H[0][1];
    I.a = H[1][1];
    if (I.a % I.c != 0 || I.b % I.c != 0)
        throw arithmetic_error("module_from_generators: span not an O-module");
    I.b = mod(I.b, I.a);
    return I;
}

inline std::vector<QuadElement> ideal_element_basis(const QuadField& F, const QuadIdeal& I) {
    return {QuadElement::integer(F.radicand, I.a), from_omega_coords(F, I.b, I.c)};
}

inline QuadIdeal ideal_one(const QuadField& F) {
    return module_from_generators(F, {QuadElement::one(F.radicand), omega(F)});
}

inline QuadIdeal ideal_from_element(const QuadField& F, const QuadElement& g) {
    if (g.is_zero()) throw arithmetic_error("zero ideal");
    return module_from_generators(F, {g, g * omega(F)});
}

inline QuadIdeal ideal_mul(const QuadField& F, const QuadIdeal& I, const QuadIdeal& J) {
    auto bi = ideal_element_basis(F, I), bj = ideal_element_basis(F, J);
    std::vector<QuadElement> gens;
    for (auto& x : bi)
        for (auto& y : bj) gens.push_back(x * y);
    return module_from_generators(F, gens);
}

inline QuadIdeal ideal_pow(const QuadField& F, const QuadIdeal& I, Int e) {
    assert(e >= 0);
    QuadIdeal acc = ideal_one(F), base = I;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) acc = ideal_mul(F, acc, base);
        base = ideal_mul(F, base, base);
        e >>= 1;
    }
    return acc;
}

inline QuadIdeal ideal_conj(const QuadField& F, const QuadIdeal& I) {
    auto bs = ideal_element_basis(F, I);
    std::vector<QuadElement> gens;
    for (auto& x : bs) {
        gens.push_back(x.conj());
        gens.push_back(x.conj() * omega(F));
    }
    return module_from_generators(F, gens);
}

// I / n for a rational integer n dividing I elementwise
inline QuadIdeal ideal_div_int(const QuadIdeal& I, const Int& n) {
    if (I.a % n != 0 || I.b % n != 0 || I.c % n != 0)
        throw arithmetic_error("ideal_div_int: not divisible");
    QuadIdeal R = I;
    R.a = divexact(I.a, n);
    R.b = divexact(I.b, n);
    R.c = divexact(I.c, n);
    R.b = mod(R.b, R.a);
    return R;
}

inline bool ideal_contains(const QuadField& F, const QuadIdeal& I, const QuadElement& e) {
    if (!e.is_integral()) return false;
    auto [u, v] = omega_coords(F, e);
    if (v % I.c != 0) return false;
    Int t = divexact(v, I.c);
    return mod(u - t * I.b, I.a) == 0;
}

inline QuadIdeal ideal_mul_elt(const QuadField& F, const QuadIdeal& I, const QuadElement& g) {
    auto bs = ideal_element_basis(F, I);
    return module_from_generators(F, {bs[0] * g, bs[1] * g});
}

struct SplittingRecord {
    Split3 type;
    std::vector<QuadIdeal> primes;
};

// Decomposition of a rational prime q in the maximal order.
inline SplittingRecord factor_rational_prime(const QuadField& F, const Int& q) {
    if (!is_prime(q)) throw arithmetic_error("factor_rational_prime: q not prime");
    SplittingRecord rec;
    const Int& r = F.radicand;
    auto make = [&](const QuadElement& g) {
        QuadElement qq = QuadElement::integer(r, q);
        return module_from_generators(F, {qq, g, qq * omega(F), g * omega(F)});
    };
    int kro = kronecker(F.disc, q);
    if (kro == 0) {
        rec.type = Split3::ramified;
        if (q == 2)
            rec.primes = {mod(r, Int(4)) == 2 ? make({r, 0, 1}) : make({r, 1, 1})};
        else
            rec.primes = {make({r, 0, 1})};
        return rec;
    }
    if (kro == -1) {
        rec.type = Split3::inert;
        rec.primes = {make(QuadElement::integer(r, q))};
        return rec;
    }
    rec.type = Split3::split;
    if (q == 2) {
        QuadElement w = omega(F);
        rec.primes = {make(w), make(w - QuadElement::one(r))};
        return rec;
    }
    Int b = sqrt_mod(mod(r, q), q);
    rec.primes = {make({r, Rat(b), Rat(-1)}), make({r, Rat(b), Rat(1)})};
    return rec;
}

// Lagrange-reduced basis of the ideal lattice under the norm form
// (imaginary fields only); shortest vector first.
inline std::array<QuadElement, 2> reduced_basis(const QuadField& F, const QuadIdeal& I) {
    assert(F.imaginary);
    auto bs = ideal_element_basis(F, I);
    QuadElement u = bs[0], v = bs[1];
    auto N = [](const QuadElement& e) { return e.norm(); };
    auto B = [](const QuadElement& e, const QuadElement& f) { return (e * f.conj()).x; };
    if (N(v) < N(u)) std::swap(u, v);
    while (true) {
        Rat shifted = B(u, v) / N(u) + Rat(1, 2);
        Int t;
        mpz_fdiv_q(t.get_mpz_t(), shifted.get_num().get_mpz_t(), shifted.get_den().get_mpz_t());
        if (t != 0) v = v - u * Rat(t);
        if (N(v) < N(u)) {
            std::swap(u, v);
            continue;
        }
        break;
    }
    return {u, v};
}

struct PrincipalResult {
    bool principal = false;
    QuadElement generator;
};

// Shortest-vector principality test over an imaginary quadratic order:
// I is principal iff the norm minimum over I \ {0} equals N(I). The
// generator is sign-normalised to x >= 0, ties broken by y >= 0.
inline PrincipalResult principal_generator(const QuadField& F, const QuadIdeal& I) {
    auto red = reduced_basis(F, I);
    PrincipalResult res;
    if (red[0].norm() == Rat(I.norm())) {
        res.principal = true;
        QuadElement g = red[0];
        if (g.x < 0 || (g.x == 0 && g.y < 0)) g = -g;
        res.generator = g;
    }
    return res;
}

// Ideal in the class of I whose norm is coprime to p, found as (g)*I/N(I)
// for a short g in conj(I) with v_p(N(g)) = v_p(N(I)).
inline QuadIdeal equivalent_ideal_coprime_to(const QuadField& F, const QuadIdeal& I, const Int& p) {
    if (I.norm() % p != 0) return I;
    QuadIdeal J = ideal_conj(F, I);
    std::vector<QuadElement> bs;
    if (F.imaginary) {
        auto red = reduced_basis(F, J);
        bs = {red[0], red[1]};
    } else {
        bs = ideal_element_basis(F, J);
    }
    Int NJ = J.norm();
    long target = valuation(NJ, p);
    for (long xx = -6; xx <= 6; ++xx)
        for (long yy = -6; yy <= 6; ++yy) {
            if (xx == 0 && yy == 0) continue;
            QuadElement g = bs[0] * Rat(xx) + bs[1] * Rat(yy);
            Rat n = g.norm();
            if (n == 0 || n.get_den() != 1) continue;
            if (valuation(Int(n.get_num()), p) != target) continue;
            QuadIdeal K = ideal_mul(F, ideal_from_element(F, g), I);
            QuadIdeal R = ideal_div_int(K, NJ);
            if (R.norm() % p != 0) return R;
        }
    throw arithmetic_error("equivalent_ideal_coprime_to: no short representative found");
}

}  // namespace qf

}  // namespace acyc
