#pragma once

#include "acyc/abgroup.hpp"
#include "acyc/class_imag.hpp"
#include "acyc/forms.hpp"

namespace acyc {

// sign of x + y*sqrt(r) - t for rational t, r > 0 non-square
inline int real_sign(const QuadElement& e, const Rat& t = Rat(0)) {
    Rat u = e.x - t;
    const Rat& v = e.y;
    if (v == 0) return u > 0 ? 1 : (u < 0 ? -1 : 0);
    if (v > 0 && u >= 0) return 1;
    if (v < 0 && u <= 0) return -1;
    // u, v opposite signs: compare u^2 with r v^2
    Rat lhs = u * u, rhs = Rat(e.r) * v * v;
    int big = lhs > rhs ? 1 : -1;  // equality impossible (r non-square)
    return u > 0 ? big : -big;
}

struct UnitData {
    QuadElement eps;   // fundamental unit, > 1 in the positive embedding
    int norm_eps = 1;  // +1 or -1
    long bits = 0;     // bit length proxy for the regulator
};

// Fundamental unit by the continued fraction of (D mod 2 + sqrt D)/2.
// The expansion's period certifies fundamentality.
inline UnitData fundamental_unit(const QuadField& F, long bit_budget = (1L << 20)) {
    assert(!F.imaginary);
    const Int D = F.disc;
    const Int sD = isqrt(D);
    Int P = mod(D, Int(2)), Q = 2;
    // first step to reach the purely periodic tail
    Int a0 = (P + sD) / Q;
    P = a0 * Q - P;
    Q = divexact(D - P * P, Q);
    Int P1 = P, Q1 = Q;
    // matrix product over one period
    Int p = 1, q = 0, rr = 0, ss = 1;
    long steps = 0;
    while (true) {
        if (Q <= 0) throw arithmetic_error("fundamental_unit: continued fraction left reduced range");
        Int ai = (P + sD) / Q;
        Int np = ai * p + q, nr = ai * rr + ss;
        q = p;
        ss = rr;
        p = np;
        rr = nr;
        P = ai * Q - P;
        Q = divexact(D - P * P, Q);
        ++steps;
        if (P == P1 && Q == Q1) break;
        if (mpz_sizeinbase(p.get_mpz_t(), 2) > (size_t)bit_budget)
            throw bound_exceeded("fundamental_unit: unit exceeds bit budget");
    }
    // beta = (P1 + sqrt D)/Q1 is fixed by the period matrix; unit = rr*beta + ss
    Rat ycoef = Rat(rr, Q1);
    if (mod(F.radicand, Int(4)) != 1) ycoef *= 2;  // sqrt D = 2 sqrt r
    QuadElement eps{F.radicand, Rat(rr * P1, Q1) + Rat(ss), ycoef};
    if (!eps.is_integral()) throw arithmetic_error("fundamental_unit: non-integral unit");
    Rat n = eps.norm();
    if (n != 1 && n != -1) throw arithmetic_error("fundamental_unit: norm not a unit");
    // normalise to the representative > 1
    for (QuadElement cand : {eps, -eps, eps.conj(), -eps.conj()}) {
        if (real_sign(cand, Rat(1)) > 0) {
            eps = cand;
            break;
        }
    }
    UnitData U;
    U.eps = eps;
    U.norm_eps = n == 1 ? 1 : -1;
    U.bits = long(mpz_sizeinbase(eps.x.get_num().get_mpz_t(), 2));
    return U;
}

// The Z-module Z|a| + Z(-b+sqrt D)/2 attached to a form; forms (a,b,c) and
// (-a,b,-c) share it.
inline QuadIdeal module_of_form(const QuadField& F, const BQF& f) {
    Int A = f.a >= 0 ? f.a : -f.a;
    QuadElement w{F.radicand, Rat(-f.b, 2), F.omega_shift() ? Rat(1, 2) : Rat(1)};
    QuadElement Ae = QuadElement::integer(F.radicand, A);
    return qf::module_from_generators(F, {Ae, w, Ae * qf::omega(F), w * qf::omega(F)});
}

// Principal-ideal test with generator recovery for real quadratic fields:
// reduce the primitive part with transformation tracking, then walk the cycle
// of reduced forms; the ideal is principal (in the wide sense) iff a form
// with |a| = 1 occurs, and the accumulated factor is the generator.
struct RealPrincipalResult {
    bool principal = false;
    QuadElement generator;  // N(generator) may be negative
};

inline RealPrincipalResult principal_generator_real_raw(const QuadField& F, const QuadIdeal& I,
                                                        long max_steps = 4000000) {
    const Int sD = isqrt(F.disc);
    Int content = I.c;
    QuadIdeal I0 = qf::ideal_div_int(I, content);
    BQF f = form_of_ideal(F, I0);
    QuadElement gamma{F.radicand, Rat(content), Rat(0)};
    auto step = [&](BQF& g) {
        // module identity M(a,b) = (w/|c|) * M(c, r) with w = (-b + sqrt D)/2
        QuadElement w{F.radicand, Rat(-g.b, 2), F.omega_shift() ? Rat(1, 2) : Rat(1)};
        Int absc = g.c >= 0 ? g.c : -g.c;
        gamma = gamma * w / Rat(absc);
        g = rho_indefinite(g, sD);
    };
    long guard = 0;
    while (!is_reduced_indefinite(f, sD)) {
        step(f);
        if (++guard > max_steps) throw arithmetic_error("principal_generator_real: reduction stuck");
    }
    BQF start = f;
    RealPrincipalResult res;
    do {
        if (f.a == 1 || f.a == -1) {
            res.principal = true;
            res.generator = gamma;
            return res;
        }
        step(f);
        if (++guard > max_steps) throw arithmetic_error("principal_generator_real: cycle too long");
    } while (!(f == start));
    return res;
}

// normal form of a generator modulo units: smallest |trace| among
// {+-eps^-1 g, +-g, +-eps g}; ties to positive trace, then positive y.
inline QuadElement normalize_unit_multiple(const QuadElement& g, const QuadElement& eps) {
    std::vector<QuadElement> cands;
    for (auto& base : {g / eps, g, g * eps}) {
        cands.push_back(base);
        cands.push_back(-base);
    }
    auto better = [](const QuadElement& a, const QuadElement& b) {
        Rat ta = a.trace() >= 0 ? a.trace() : -a.trace();
        Rat tb = b.trace() >= 0 ? b.trace() : -b.trace();
        if (ta != tb) return ta < tb;
        if (a.trace() != b.trace()) return a.trace() > b.trace();
        return a.y > b.y;
    };
    QuadElement best = cands[0];
    for (auto& c : cands)
        if (better(c, best)) best = c;
    return best;
}

struct SUnitData {
    QuadIdeal pstar;       // prime above 3 (3 split in k*)
    Int ord_pstar = 1;     // order of its class
    QuadElement eta;       // generator of pstar^ord
    bool cl_in_cubes = false;
};

// Class group of the real quadratic mirror field from cycles of reduced
// indefinite forms. The wide group (what class-field data tables list) is the
// narrow group modulo the class of a norm-negative unit ideal.
class ClassGroupReal {
public:
    QuadField F;
    Int sqrtD;
    std::vector<BQF> reduced;                      // all reduced forms
    std::unordered_map<BQF, long, BQFHash> cycle_of;
    std::vector<BQF> canon;                        // canonical (min) form per cycle
    long narrow_h = 0;

    EnumeratedAbelian narrow;  // structure on cycle ids
    long j_class = 0;          // cycle of the (-1, s, *) form

    AbGroup structure;                  // wide invariants (descending)
    ClassData data;                     // of the wide group
    std::vector<IntVec> gen_narrow;     // wide generators as narrow exponent vectors
    std::vector<QuadIdeal> gen_ideals;  // representatives, prime to 3
    IntMat Vt;                          // smith V for dlog transform
    std::vector<size_t> keep_slots;     // indices with invariant > 1

    std::optional<UnitData> unit;  // filled on demand

    // ---- construction ----

    static ClassGroupReal compute(const QuadField& F, const Int& disc_bound = Int(1000000000),
                                  bool structure_needed = true) {
        if (F.imaginary) throw arithmetic_error("ClassGroupReal: field not real");
        if (F.disc > disc_bound) throw bound_exceeded("real class group disc beyond bound");
        ClassGroupReal C;
        C.F = F;
        C.sqrtD = isqrt(F.disc);
        C.reduced = reduced_forms_indefinite(F.disc);
        // partition into rho-cycles
        std::unordered_map<BQF, char, BQFHash> seen;
        for (auto& f : C.reduced) {
            if (seen.count(f)) continue;
            long id = long(C.canon.size());
            BQF cur = f, best = f;
            do {
                seen[cur] = 1;
                C.cycle_of[cur] = id;
                if (cur < best) best = cur;
                cur = rho_indefinite(cur, C.sqrtD);
            } while (!(cur == f));
            C.canon.push_back(best);
        }
        C.narrow_h = long(C.canon.size());
        if (!structure_needed) return C;

        std::vector<Int> dprimes;
        for (auto& [p, e] : factor(2 * F.disc)) {
            (void)e;
            dprimes.push_back(p);
        }
        auto op = [&C, dprimes](long i, long j) -> long {
            BQF f = reduce_indefinite(compose_raw(C.canon[size_t(i)], C.canon[size_t(j)], &dprimes),
                                      C.sqrtD);
            return C.cycle_of.at(f);
        };
        BQF pf = reduce_indefinite(principal_form(F.disc), C.sqrtD);
        C.narrow = enumerated_abelian(C.narrow_h, C.cycle_of.at(pf), op);
        C.narrow.op = nullptr;

        Int s = mod(F.disc, Int(2));
        BQF jf = reduce_indefinite(BQF{Int(-1), s, divexact(F.disc - s * s, Int(4))}, C.sqrtD);
        C.j_class = C.cycle_of.at(jf);

        // wide group = narrow / <J>
        size_t r = C.narrow.shape.invariants.size();
        IntMat rel;
        for (size_t i = 0; i < r; ++i) {
            IntVec row(r, 0);
            row[i] = C.narrow.shape.invariants[i];
            rel.push_back(row);
        }
        if (C.j_class != C.narrow.id) rel.push_back(C.narrow.dlog(C.j_class));
        if (r == 0) {
            C.structure = AbGroup{};
        } else {
            auto S = smith_form(rel);
            C.Vt = S.V;
            std::vector<std::pair<Int, size_t>> slots;
            for (size_t i = 0; i < r; ++i)
                if (S.diag[i] > 1) slots.push_back({S.diag[i], i});
            std::sort(slots.begin(), slots.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
            IntMat Vinv = unimodular_inverse(S.V);
            for (auto& [d, slot] : slots) {
                C.structure.invariants.push_back(d);
                C.keep_slots.push_back(slot);
                C.gen_narrow.push_back(Vinv[slot]);
            }
        }
        C.data = class_data_of(C.structure);
        // generator ideals by composing canonical forms directly
        for (auto& x : C.gen_narrow) {
            BQF acc = pf;
            for (size_t i = 0; i < x.size(); ++i) {
                Int exp = mod(x[i], C.narrow.shape.invariants[i]);
                BQF g = C.canon[size_t(C.narrow.gens[i])];
                for (Int t = 0; t < exp; ++t)
                    acc = reduce_indefinite(compose_raw(acc, g, &dprimes), C.sqrtD);
            }
            C.gen_ideals.push_back(qf::equivalent_ideal_coprime_to(F, module_of_form(F, acc), Int(3)));
        }
        return C;
    }

    // ---- queries ----

    long cycle_of_ideal(const QuadIdeal& I) const {
        QuadIdeal I0 = qf::ideal_div_int(I, I.c);
        BQF f = reduce_indefinite(form_of_ideal(F, I0), sqrtD);
        return cycle_of.at(f);
    }

    // wide discrete log on the kept slots (descending invariant order)
    IntVec dlog_ideal(const QuadIdeal& I) const {
        IntVec nv = narrow.dlog(cycle_of_ideal(I));
        IntVec out;
        size_t r = nv.size();
        for (size_t t = 0; t < keep_slots.size(); ++t) {
            size_t slot = keep_slots[t];
            Int val = 0;
            for (size_t j = 0; j < r; ++j) val += nv[j] * Vt[j][slot];
            out.push_back(mod(val, structure.invariants[t]));
        }
        return out;
    }

    bool class_is_cube(const QuadIdeal& I) const {
        IntVec v = dlog_ideal(I);
        for (size_t t = 0; t < v.size(); ++t) {
            if (structure.invariants[t] % 3 == 0 && v[t] % 3 != 0) return false;
        }
        return true;
    }

    const UnitData& fundamental(long bit_budget = (1L << 20)) {
        if (!unit) unit = fundamental_unit(F, bit_budget);
        return *unit;
    }

    // generator recovery with unit normal form
    RealPrincipalResult principal(const QuadIdeal& I) {
        auto raw = principal_generator_real_raw(F, I);
        if (!raw.principal) return raw;
        raw.generator = normalize_unit_multiple(raw.generator, fundamental().eps);
        return raw;
    }
};

// One pseudo-unit per 3-part generator of the class group: a generator of
// a_i^(d_i) for the representative ideal a_i (prime to 3) of the i-th
// invariant with 3 | d_i.
inline std::vector<QuadElement> pseudo_units(ClassGroupReal& C) {
    std::vector<QuadElement> out;
    for (size_t i = 0; i < C.structure.invariants.size(); ++i) {
        const Int& d = C.structure.invariants[i];
        if (d % 3 != 0) continue;
        QuadIdeal P = qf::ideal_pow(C.F, C.gen_ideals[i], d);
        auto pr = C.principal(P);
        if (!pr.principal) throw arithmetic_error("pseudo_units: power of generator not principal");
        out.push_back(pr.generator);
    }
    return out;
}

// Fundamental S*-unit times its norm (3 split in the mirror field):
// eta* = eta * N(eta) where (eta) = pstar^ord(cl pstar).
inline std::pair<QuadElement, SUnitData> s_unit_norm_one(ClassGroupReal& C) {
    if (C.F.split3 != Split3::split)
        throw arithmetic_error("s_unit_norm_one: 3 does not split in the mirror field");
    SUnitData S;
    S.pstar = qf::factor_rational_prime(C.F, Int(3)).primes[0];
    // order of the class
    IntVec v = C.dlog_ideal(S.pstar);
    Int ord = 1;
    for (size_t t = 0; t < v.size(); ++t) {
        if (v[t] == 0) continue;
        Int d = C.structure.invariants[t];
        Int o = divexact(d, gcd(v[t], d));
        ord = lcm(ord, o);
    }
    S.ord_pstar = ord;
    S.cl_in_cubes = C.class_is_cube(S.pstar);
    auto pr = C.principal(qf::ideal_pow(C.F, S.pstar, ord));
    if (!pr.principal) throw arithmetic_error("s_unit_norm_one: pstar^ord not principal");
    S.eta = pr.generator;
    QuadElement etastar = S.eta * S.eta.norm();
    return {etastar, S};
}

// Radical contribution of pstar in the Special Split case: express cl(pstar)
// on the generators, cancel it with class-group representatives, and return
// Gamma * N(Gamma) for the resulting principal ideal. Well defined modulo
// pseudo-units and cubes.
inline QuadElement w_pstar(ClassGroupReal& C) {
    if (C.F.split3 != Split3::split) throw arithmetic_error("w_pstar: 3 does not split");
    QuadIdeal pstar = qf::factor_rational_prime(C.F, Int(3)).primes[0];
    if (!C.class_is_cube(pstar)) throw arithmetic_error("w_pstar: class of pstar not a cube");
    IntVec Y = C.dlog_ideal(pstar);
    QuadIdeal J = pstar;
    for (size_t t = 0; t < Y.size(); ++t) {
        if (Y[t] == 0) continue;
        QuadIdeal conj_gen = qf::ideal_conj(C.F, C.gen_ideals[t]);
        J = qf::ideal_mul(C.F, J, qf::ideal_pow(C.F, conj_gen, Y[t]));
    }
    auto pr = C.principal(J);
    if (!pr.principal) throw arithmetic_error("w_pstar: cancellation not principal");
    return pr.generator * pr.generator.norm();
}

}  // namespace acyc
