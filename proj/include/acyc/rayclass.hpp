#pragma once

#include "acyc/class_imag.hpp"
#include "acyc/localunits.hpp"

namespace acyc {

// Ray class group H_k(3^nu) of an imaginary quadratic field, as the abelian
// group presented by the class-group generators glued to (O/3^nu)^*/<-1>.
struct RayClassGroup {
    long nu = 1;
    AbGroup full;        // complete invariant chain (descending)
    AbGroup three;       // its 3-part, descending
    Int order = 1;

    long rank3() const { return three.rank(); }
};

inline RayClassGroup ray_class_group(const QuadField& k, const ClassGroupImag& C, long nu) {
    RayClassGroup R;
    R.nu = nu;
    LocalUnitGroup U = local_unit_group(k, nu);
    size_t r = C.structure.invariants.size();
    size_t s = U.ngens;
    IntMat rel;
    // connecting rows: n_i * g_i = image of the principal generator alpha_i
    for (size_t i = 0; i < r; ++i) {
        QuadIdeal P = qf::ideal_pow(k, C.gen_ideals[i], C.structure.invariants[i]);
        auto pr = qf::principal_generator(k, P);
        if (!pr.principal) throw arithmetic_error("ray_class_group: witness power not principal");
        IntVec row(r + s, 0);
        row[i] = C.structure.invariants[i];
        IntVec img = U.dlog(pr.generator);
        for (size_t j = 0; j < s; ++j) row[r + j] = -img[j];
        rel.push_back(row);
    }
    // local unit relations
    for (auto& urow : U.relations) {
        IntVec row(r + s, 0);
        for (size_t j = 0; j < s; ++j) row[r + j] = urow[j];
        rel.push_back(row);
    }
    // quotient by the global units {+-1}
    {
        IntVec row(r + s, 0);
        for (size_t j = 0; j < s; ++j) row[r + j] = U.minus_one[j];
        rel.push_back(row);
    }
    R.full = group_from_relations(rel, r + s);
    R.three = R.full.three_part();
    R.order = R.full.order();
    return R;
}

// Exact order formula for #H_k(3^nu): v3 = v3(h) + 2(nu-1) (+1 if 3 ramifies).
inline bool ray_order_formula_holds(const QuadField& k, const ClassGroupImag& C,
                                    const RayClassGroup& R) {
    long expect = valuation(C.data.h3, Int(3)) + 2 * (R.nu - 1) + (k.split3 == Split3::ramified ? 1 : 0);
    long got = valuation(R.order, Int(3));
    if (got != expect) return false;
    // the prime-to-3 part: h_ta, doubled when 3 splits (leftover 2-torsion of
    // the local units after killing -1)
    Int expect_ta = C.data.hta * (k.split3 == Split3::split ? 2 : 1) *
                    (k.split3 == Split3::inert ? 4 : 1);
    Int got_ta = divexact(R.order, pow3((unsigned long)got));
    return got_ta == expect_ta;
}

// T_k and derived invariants: the 3-part of H_k(3^nu) at nu = v3(Exp) + 2
// minus the two unbounded components.
struct TorsionData {
    long nu = 2;
    AbGroup ray3;            // 3-part of H_k(3^nu), descending
    AbGroup T;               // torsion invariants, descending
    Int ot = 1;              // #T
    Int wbp = 1;             // 1 or 3
    Int otbp = 1;            // #T / wbp
    long val = 0;            // elimination threshold
    bool ramified_layer = true;   // first layer ramified over k
    Int disjunction_index = 1;    // h3 / otbp
};

inline TorsionData torsion_data(const QuadField& k, const ClassGroupImag& C,
                                const RayClassGroup& R) {
    TorsionData T;
    T.nu = R.nu;
    T.ray3 = R.three;
    auto inv = R.three.invariants;  // descending
    if (inv.size() < 2) throw arithmetic_error("torsion_data: fewer than two 3-components");
    Int zc = inv[1];
    if (zc != pow3((unsigned long)(R.nu - 1)))
        throw arithmetic_error("torsion_data: second component is not 3^(nu-1); ordering assumption violated");
    for (size_t i = 2; i < inv.size(); ++i) {
        T.T.invariants.push_back(inv[i]);
        T.ot *= inv[i];
    }
    T.wbp = k.m_mod9 == 3 ? 3 : 1;
    if (T.ot % T.wbp != 0) throw arithmetic_error("torsion_data: #T not divisible by #W^bp");
    T.otbp = divexact(T.ot, T.wbp);
    long eps = k.m % 3 == 0 ? 1 : 0;
    T.val = valuation(C.data.Exp, Int(3)) + valuation(T.otbp, Int(3)) -
            valuation(C.data.h3, Int(3)) + 2 - eps;
    T.ramified_layer = C.data.h3 == T.otbp;
    if (C.data.h3 % T.otbp != 0)
        throw arithmetic_error("torsion_data: #T^bp does not divide #H_3");
    T.disjunction_index = divexact(C.data.h3, T.otbp);
    return T;
}

inline TorsionData t_k(const QuadField& k, const ClassGroupImag& C) {
    long nu = valuation(C.data.Exp, Int(3)) + 2;
    auto R = ray_class_group(k, C, nu);
    return torsion_data(k, C, R);
}

// rank stabilisation: rk3 H(3^2) = rk3 H(3^3) = rk3 H(3^4), and ranks are
// monotone between consecutive moduli from nu = 1.
inline bool rank_stabilization_check(const QuadField& k, const ClassGroupImag& C) {
    long r1 = ray_class_group(k, C, 1).rank3();
    long r2 = ray_class_group(k, C, 2).rank3();
    long r3 = ray_class_group(k, C, 3).rank3();
    long r4 = ray_class_group(k, C, 4).rank3();
    return r1 <= r2 && r2 == r3 && r3 == r4;
}

// exposed for tests and the CLI: shape of (O/3^nu)^*
inline AbGroup unit_group_mod3nu(const QuadField& k, long nu) {
    return local_unit_group(k, nu).shape();
}

}  // namespace acyc
