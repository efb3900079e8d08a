#pragma once

#include "acyc/abgroup.hpp"
#include "acyc/forms.hpp"

namespace acyc {

struct ClassData {
    Int h = 1;    // class number
    Int h3 = 1;   // 3-part order
    Int Exp = 1;  // exponent of the 3-class group
    Int hta = 1;  // prime-to-3 part
    long rk3 = 0;
};

inline ClassData class_data_of(const AbGroup& G) {
    ClassData d;
    d.h = G.order();
    d.h3 = pow3((unsigned long)(d.h == 0 ? 0 : valuation(d.h, Int(3))));
    d.hta = divexact(d.h, d.h3);
    d.Exp = G.exponent_p(Int(3));
    d.rk3 = G.rank3();
    return d;
}

// form <-> ideal translation (maximal order, primitive forms, a > 0)
inline QuadIdeal ideal_of_form(const QuadField& F, const BQF& f) {
    assert(f.a > 0 && f.disc() == F.disc);
    QuadElement w{F.radicand, Rat(-f.b, 2), F.omega_shift() ? Rat(1, 2) : Rat(1)};
    return qf::module_from_generators(
        F, {QuadElement::integer(F.radicand, f.a), w,
            QuadElement::integer(F.radicand, f.a) * qf::omega(F), w * qf::omega(F)});
}

// primitive part of I as a form (leading coefficient = N(I)/content^2 scale)
inline BQF form_of_ideal(const QuadField& F, const QuadIdeal& I) {
    Int a0 = divexact(I.a, I.c), b0 = divexact(I.b, I.c);
    int s = F.omega_shift();
    Int B = -(2 * b0 + s);
    Int A = a0;
    Int C = divexact(B * B - F.disc, 4 * A);
    return {A, B, C};
}

// Class group of an imaginary quadratic field by reduced-form enumeration and
// Gauss composition. Unconditional; intended for |disc| within `disc_bound`.
class ClassGroupImag {
public:
    QuadField F;
    AbGroup structure;            // full invariant chain, descending
    ClassData data;
    std::vector<BQF> forms;       // all reduced forms (group elements)
    std::vector<QuadIdeal> gen_ideals;  // representative ideals of the generators

    static ClassGroupImag compute(const QuadField& F, const Int& disc_bound = Int(1000000000)) {
        if (!F.imaginary) throw arithmetic_error("ClassGroupImag: field not imaginary");
        if (-F.disc > disc_bound)
            throw bound_exceeded("class group |disc| beyond configured bound " + to_string(disc_bound));
        ClassGroupImag C;
        C.F = F;
        C.forms = reduced_forms_definite(F.disc);
        std::sort(C.forms.begin(), C.forms.end());
        std::unordered_map<BQF, long, BQFHash> index;
        for (size_t i = 0; i < C.forms.size(); ++i) index[C.forms[i]] = long(i);
        long idx_id = index.at(principal_form(F.disc));
        std::vector<Int> dprimes;
        for (auto& [p, e] : factor(2 * F.disc)) {
            (void)e;
            dprimes.push_back(p);
        }
        auto op = [&C, index, dprimes](long i, long j) -> long {
            BQF f = reduce_definite(compose_raw(C.forms[size_t(i)], C.forms[size_t(j)], &dprimes));
            return index.at(f);
        };
        C.table = enumerated_abelian(long(C.forms.size()), idx_id, op);
        C.table.op = nullptr;  // the closure refers to locals; dlog table stays valid
        C.structure = C.table.shape;
        C.data = class_data_of(C.structure);
        for (long g : C.table.gens)
            C.gen_ideals.push_back(qf::equivalent_ideal_coprime_to(F, ideal_of_form(F, C.forms[size_t(g)]), Int(3)));
        return C;
    }

    IntVec dlog_form(const BQF& f) const {
        BQF r = reduce_definite(f);
        for (size_t i = 0; i < forms.size(); ++i)
            if (forms[i] == r) return table.dlog(long(i));
        throw arithmetic_error("dlog_form: not a form of this discriminant");
    }

    IntVec dlog_ideal(const QuadIdeal& I) const { return dlog_form(form_of_ideal(F, I)); }

    bool is_principal_class(const IntVec& v) const {
        for (auto& x : v)
            if (x != 0) return false;
        return true;
    }

    EnumeratedAbelian table;
};

// Sylow-3 data of a class group: shape plus witnesses (generator ideals raised
// to the prime-to-3 cofactor of their order).
struct ThreePartWitness {
    AbGroup shape;
    std::vector<QuadIdeal> gens;
};

inline ThreePartWitness three_part_with_witnesses(const QuadField& F, const AbGroup& G,
                                                  const std::vector<QuadIdeal>& gen_ideals) {
    ThreePartWitness T;
    T.shape = G.three_part();
    for (size_t i = 0; i < G.invariants.size(); ++i) {
        const Int& d = G.invariants[i];
        if (d % 3 != 0) continue;
        Int p3 = pow3((unsigned long)v3(d));
        Int cof = divexact(d, p3);
        T.gens.push_back(qf::ideal_pow(F, gen_ideals[i], cof));
    }
    return T;
}

}  // namespace acyc
