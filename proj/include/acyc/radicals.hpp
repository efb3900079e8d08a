#pragma once

#include "acyc/class_real.hpp"
#include "acyc/cubic.hpp"
#include "acyc/padlog.hpp"
#include "acyc/rayclass.hpp"

namespace acyc {

enum class CaseTag { non_split, normal_split, special_split, trivial };

inline const char* case_name(CaseTag t) {
    switch (t) {
        case CaseTag::non_split: return "non-split";
        case CaseTag::normal_split: return "normal-split";
        case CaseTag::special_split: return "special-split";
        case CaseTag::trivial: return "trivial";
    }
    return "?";
}

// Everything the layer search needs about one field, computed once.
struct FieldContext {
    Int m;
    QuadField k, ks;
    ClassGroupImag Ck;
    ClassGroupReal Cs;
    TorsionData T;
    CaseTag tag = CaseTag::trivial;
    int rho_sstar = -1;  // 1 normal split, 0 special split, -1 n/a
    std::optional<SUnitData> sunit;
};

struct ContextOptions {
    Int disc_bound = Int(1000000000);
    long unit_bits = 1L << 20;
};

inline CaseTag classify_from_parts(long m_mod9, bool h_star_div3, long rk_t, long rk_star) {
    if (!h_star_div3) return CaseTag::trivial;
    if (m_mod9 != 3) return CaseTag::non_split;
    if (rk_t == rk_star) return CaseTag::normal_split;
    if (rk_t == rk_star + 1) return CaseTag::special_split;
    throw arithmetic_error("classify: torsion rank incompatible with the mirror class group");
}

inline FieldContext build_context(const Int& m, const ContextOptions& opt = {}) {
    FieldContext ctx;
    ctx.m = m;
    std::tie(ctx.k, ctx.ks) = make_pair_fields(m);
    if (m < 5) throw arithmetic_error("build_context: need m >= 5");
    ctx.Ck = ClassGroupImag::compute(ctx.k, opt.disc_bound);
    ctx.Cs = ClassGroupReal::compute(ctx.ks, opt.disc_bound);
    ctx.Cs.fundamental(opt.unit_bits);
    ctx.T = t_k(ctx.k, ctx.Ck);
    bool div3 = ctx.Cs.data.h % 3 == 0;
    ctx.tag = classify_from_parts(ctx.k.m_mod9, div3, ctx.T.T.rank(), ctx.Cs.structure.rank3());
    if (ctx.tag == CaseTag::normal_split) ctx.rho_sstar = 1;
    if (ctx.tag == CaseTag::special_split) ctx.rho_sstar = 0;
    return ctx;
}

inline CaseTag classify(const Int& m, const ContextOptions& opt = {}) {
    return build_context(m, opt).tag;
}

// basis of the radical group W modulo cubes, in sieve order
inline std::vector<QuadElement> radical_basis(FieldContext& ctx) {
    std::vector<QuadElement> basis;
    const QuadElement& eps = ctx.Cs.fundamental().eps;
    switch (ctx.tag) {
        case CaseTag::non_split:
        case CaseTag::normal_split: {
            basis.push_back(eps);
            for (auto& a : pseudo_units(ctx.Cs)) basis.push_back(a);
            break;
        }
        case CaseTag::special_split: {
            basis.push_back(w_pstar(ctx.Cs));
            basis.push_back(eps);
            for (auto& a : pseudo_units(ctx.Cs)) basis.push_back(a);
            break;
        }
        case CaseTag::trivial: {
            basis.push_back(eps);
            if (ctx.k.m_mod9 == 3) {
                auto [etastar, S] = s_unit_norm_one(ctx.Cs);
                ctx.sunit = S;
                basis.push_back(etastar);
            }
            break;
        }
    }
    // the torsion rank determines the radical rank: rk3 T = #basis - 1
    if (ctx.T.T.rank() != long(basis.size()) - 1)
        throw arithmetic_error("radical_basis: rank does not match the torsion rank");
    return basis;
}

struct Radical {
    QuadElement w;
    IntVec digits;  // base-3 exponents over the basis (aligned to its tail)
};

// the (3^N - 1)/2 nontrivial radicals: digit vectors with leading digit 1,
// exponents applied to the last d basis elements. A digit 2 is realised as
// the conjugate of the basis element: conj(b) = b^2 * (b N(b))^-3 * N(b)^2
// modulo cubes and rationals (rationals act trivially on the descended
// layer, and all norms here are cubes), which keeps coefficients small.
inline std::vector<Radical> enumerate_radicals(const std::vector<QuadElement>& basis) {
    size_t N = basis.size();
    if (N == 0) throw arithmetic_error("enumerate_radicals: empty basis");
    std::vector<Radical> out;
    Int total = pow3((unsigned long)N) - 1;
    for (Int i = 1; i <= total; ++i) {
        // base-3 digits, most significant first
        std::vector<long> D;
        Int v = i;
        while (v > 0) {
            D.push_back(Int(mod(v, Int(3))).get_si());
            v /= 3;
        }
        std::reverse(D.begin(), D.end());
        if (D.front() == 2) continue;
        size_t d = D.size();
        Radical r;
        r.w = QuadElement::one(basis[0].r);
        r.digits.assign(N, 0);
        for (size_t j = 0; j < d; ++j) {
            size_t slot = N - d + j;
            r.digits[slot] = D[j];
            if (D[j] == 1) r.w = r.w * basis[slot];
            if (D[j] == 2) r.w = r.w * basis[slot].conj();
        }
        out.push_back(std::move(r));
    }
    if (out.size() != size_t(Int((pow3((unsigned long)N) - 1) / 2).get_si()))
        throw arithmetic_error("enumerate_radicals: count mismatch");
    return out;
}

struct CubicCandidate {
    Int a = 0;       // a^3 = N(w) after clearing
    Int t = 0;       // trace after clearing
    Int scale = 1;   // w was replaced by scale^3 * w
    Int ycoef = 0;   // sqrt coefficient: t^2 - 4a^3 = ycoef^2 * radicand-part
    CubicPoly Q;     // x^3 - 3 a x - t
    std::optional<Int> eliminated_by;  // the prime witness; 0 = discriminant
    long fld_v3 = -1;                  // lazy

    long field_v3() {
        if (fld_v3 < 0) fld_v3 = field_disc_v3(Q);
        return fld_v3;
    }
};

// Q = x^3 - 3 a x - t from a radical; half-integral data is cleared by the
// cube 8 (replacing w by 8w defines the same extension)
inline CubicCandidate cubic_candidate(const QuadElement& w_in) {
    QuadElement w = w_in;
    CubicCandidate c;
    if (w.trace().get_den() != 1 || w.norm().get_den() != 1) {
        Rat den = Rat(lcm(w.trace().get_den(), Int(w.norm().get_den())));
        // clear by a rational cube: multiply by 8 until integral
        while (w.trace().get_den() != 1 || w.norm().get_den() != 1) {
            w = w * Rat(8);
            c.scale *= 2;
        }
        (void)den;
    }
    Rat N = w.norm();
    auto a = cbrt_exact(Int(N.get_num()));
    if (!a) throw arithmetic_error("cubic_candidate: norm is not a cube");
    c.a = *a;
    c.t = Int(w.trace().get_num());
    c.ycoef = abs(Int(Rat(2 * w.y).get_num()));
    c.Q = CubicPoly{Int(0), -3 * c.a, -c.t};
    if (!cubic_irreducible(c.Q))
        throw arithmetic_error("cubic_candidate: reducible polynomial (radical is a cube)");
    return c;
}

// first layers of the two conjugate non-Galois Z3-extensions: cubics over k
// with trace coefficients -(u +- 3v sqrt(-m))/2, resp. -(u +- v sqrt(-m))/2
// when 3 | m
struct CubicOverK {
    Int a;           // same a, a^3 = N(w)
    QuadElement t;   // trace coefficient in k
};

inline std::pair<CubicOverK, CubicOverK> cubic_candidates_nongalois(const QuadField& k,
                                                                    const QuadElement& w) {
    // w = (u + v sqrt(rs))/2 over the mirror radicand rs
    Rat u = 2 * w.x, v = 2 * w.y;
    Rat vk = k.m % 3 == 0 ? v : 3 * v;
    auto a = cbrt_exact(Int(w.norm().get_num() * pow(w.norm().get_den(), 1)));
    Rat Nw = w.norm();
    auto a3 = cbrt_exact(Int(Nw.get_num()));
    if (!a3 || Nw.get_den() != 1) throw arithmetic_error("nongalois: norm not an integral cube");
    (void)a;
    CubicOverK q1{*a3, QuadElement{k.radicand, -u / 2, -vk / 2}};
    CubicOverK q2{*a3, QuadElement{k.radicand, -u / 2, vk / 2}};
    return {q1, q2};
}

// direct-factor test for the order-3 kernel W^bp inside the torsion group
inline bool wbp_direct_factor(FieldContext& ctx, const std::vector<QuadElement>& basis) {
    if (ctx.k.m_mod9 != 3) throw arithmetic_error("wbp_direct_factor: needs m = 3 mod 9");
    if (ctx.T.ramified_layer) {
        return ctx.T.T.rank() == ctx.Ck.structure.three_part().rank() + 1;
    }
    for (auto& w : basis) {
        CubicCandidate c = cubic_candidate(w);
        if (c.field_v3() > 0) return true;
    }
    return false;
}

}  // namespace acyc
