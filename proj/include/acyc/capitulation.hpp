#pragma once

#include "acyc/layersearch.hpp"
#include "acyc/nfclassgroup.hpp"

namespace acyc {

// order of the subgroup of (+) Z/d_i generated by the given coordinate rows
inline Int subgroup_order(const std::vector<IntVec>& rows, const std::vector<Int>& d) {
    size_t r = d.size();
    if (r == 0) return 1;
    IntMat lat;
    for (auto& row : rows) lat.push_back(row);
    for (size_t i = 0; i < r; ++i) {
        IntVec v(r, 0);
        v[i] = d[i];
        lat.push_back(v);
    }
    Int full = 1;
    for (auto& x : d) full *= x;
    Int det = hnf_det(hnf_rows(lat), r);
    return divexact(full, det);
}

// integer kernel (column vectors) of M
inline IntMat integer_kernel(const IntMat& M) {
    auto S = smith_form(M);
    size_t rows = M.size(), cols = M[0].size();
    size_t rank = 0;
    for (size_t i = 0; i < std::min(rows, cols); ++i)
        if (S.diag[i] != 0) ++rank;
    IntMat ker;
    for (size_t j = rank; j < cols; ++j) {
        IntVec v(cols);
        for (size_t i = 0; i < cols; ++i) v[i] = S.V[i][j];
        ker.push_back(v);
    }
    return ker;
}

// lattice of x in Z^r with M x in the column lattice spanned by L's columns
inline IntMat preimage_lattice(const IntMat& M, const IntMat& L) {
    size_t r = M[0].size();
    // solve [M | -L] (x, y)^T = 0, project to x
    IntMat big(M.size(), IntVec(r + L[0].size(), 0));
    for (size_t i = 0; i < M.size(); ++i) {
        for (size_t j = 0; j < r; ++j) big[i][j] = M[i][j];
        for (size_t j = 0; j < L[0].size(); ++j) big[i][r + j] = -L[i][j];
    }
    IntMat ker = integer_kernel(big);
    IntMat rows;
    for (auto& v : ker) {
        IntVec x(r);
        for (size_t j = 0; j < r; ++j) x[j] = v[j];
        rows.push_back(x);
    }
    return hnf_rows(rows);  // row-basis of the x-lattice
}

struct CapitulationReport {
    AbGroup H_K;      // full class group of the layer
    AbGroup H_K3;     // its 3-part
    bool conditional = false;
    Int h3 = 1;                       // 3-part of the base class number
    bool ramified = true;
    Int disjunction_index = 1;
    std::vector<IntVec> norm_rows;    // nu(g_i) on the class generators, mod 3-parts
    Int image_order3 = 1;
    Int reference_order = 1;          // h3, or h3/disjunction index when unramified
    Int kernel_order = 1;
    std::string verdict;              // total | partial(n) | injective
    Int chevalley_fixed3 = 1;         // #(H^sigma) on the 3-part
    std::vector<Int> filtration;      // orders of the sigma-filtration on the 3-part
    long filtration_n = 0;
    std::vector<IntVec> primes_above_3;  // class coordinates
    Int ram_subgroup_order3 = 1;
};

// verdict arithmetic shared by the computed and fixture paths
inline void capitulation_verdict(CapitulationReport& R) {
    std::vector<Int> d3;
    for (auto& d : R.H_K.invariants) {
        long v = valuation(d, Int(3));
        (void)v;
    }
    d3.clear();
    for (auto& d : R.H_K.invariants)
        d3.push_back(d % 3 == 0 ? pow3((unsigned long)valuation(d, Int(3))) : Int(1));
    std::vector<IntVec> rows3;
    for (auto& row : R.norm_rows) {
        IntVec r(row.size());
        for (size_t i = 0; i < row.size(); ++i) r[i] = mod(row[i], d3[i]);
        rows3.push_back(r);
    }
    R.image_order3 = subgroup_order(rows3, d3);
    R.reference_order = R.ramified ? R.h3 : divexact(R.h3, R.disjunction_index);
    if (R.reference_order % R.image_order3 != 0)
        throw arithmetic_error("capitulation_verdict: image does not divide the reference subgroup");
    R.kernel_order = divexact(R.reference_order, R.image_order3);
    if (R.image_order3 == 1)
        R.verdict = "total";
    else if (R.kernel_order == 1)
        R.verdict = "injective";
    else
        R.verdict = "partial(" + R.kernel_order.get_str() + ")";
}

struct CapitulationInputs {
    Int m;
    CubicPoly Q_red;
    Int h3;
    bool ramified;
    Int disjunction_index;
};

// full analysis of the layer field: class group, transfer data, filtration
inline CapitulationReport capitulate(const CapitulationInputs& in,
                                     const NFClassOptions& opt = {}) {
    SexticField K = make_sextic(in.m, in.Q_red);
    ClassGroupNF cls = ClassGroupNF::compute(K, opt);
    CapitulationReport R;
    R.H_K = cls.shape;
    R.H_K3 = cls.shape.three_part();
    R.conditional = cls.conditional;
    R.h3 = in.h3;
    R.ramified = in.ramified;
    R.disjunction_index = in.disjunction_index;

    // sigma as a permutation of the factor base
    size_t nfb = cls.fb.size();
    std::vector<long> perm(nfb, -1);
    for (size_t i = 0; i < nfb; ++i) {
        IntMat rows;
        for (auto& row : cls.fb[i].ideal.rows) {
            QVec e = K.A.zero();
            for (size_t j = 0; j < 6; ++j)
                for (size_t t = 0; t < 6; ++t) e[t] += Rat(row[j] * K.O.rows[j][t], K.O.den);
            QVec im = K.apply_sigma(e);
            IntVec oc;
            if (!nf::order_coords(K.A, K.O, im, &oc))
                throw arithmetic_error("capitulate: sigma image leaves the order");
            rows.push_back(oc);
        }
        nf::NFIdeal img;
        img.rows = hnf_rows(rows);
        long idx = cls.fb_index(cls.fb[i].p, img);
        if (idx < 0) throw arithmetic_error("capitulate: sigma image of a prime not in the base");
        perm[i] = idx;
    }
    auto apply_perm = [&](const IntVec& v) {
        IntVec out(nfb, 0);
        for (size_t i = 0; i < nfb; ++i)
            if (v[i] != 0) out[size_t(perm[i])] += v[i];
        return out;
    };

    size_t r = cls.shape.invariants.size();
    // norm rows: nu(g) = g + sigma g + sigma^2 g on fb vectors
    for (size_t i = 0; i < r; ++i) {
        IntVec v = cls.gen_fb[i];
        IntVec s1 = apply_perm(v);
        IntVec s2 = apply_perm(s1);
        IntVec sum(nfb, 0);
        for (size_t j = 0; j < nfb; ++j) sum[j] = v[j] + s1[j] + s2[j];
        IntVec row = cls.dlog(sum);
        // record reduced mod the 3-part of each invariant
        IntVec rec(r);
        for (size_t j = 0; j < r; ++j) {
            Int d3 = cls.shape.invariants[j] % 3 == 0
                         ? pow3((unsigned long)valuation(cls.shape.invariants[j], Int(3)))
                         : Int(1);
            rec[j] = mod(row[j], d3);
        }
        R.norm_rows.push_back(rec);
    }
    capitulation_verdict(R);

    // two-route check of the algebraic norm on a few factor-base primes
    {
        int checked = 0;
        for (size_t i = 0; i < nfb && checked < 6; ++i) {
            bool used = false;
            for (auto& g : cls.gen_fb)
                if (g[i] != 0) used = true;
            if (!used) continue;
            // vector route
            IntVec v(nfb, 0);
            v[i] = 1;
            IntVec s1 = apply_perm(v), s2 = apply_perm(s1);
            IntVec sum(nfb, 0);
            for (size_t j = 0; j < nfb; ++j) sum[j] = v[j] + s1[j] + s2[j];
            IntVec via_vec = cls.dlog(sum);
            // ideal route
            nf::NFIdeal prod = cls.fb[i].ideal;
            prod = nf::ideal_mul(K.mult, prod, cls.fb[size_t(perm[i])].ideal);
            prod = nf::ideal_mul(K.mult, prod, cls.fb[size_t(perm[size_t(perm[i])])].ideal);
            IntVec rel(nfb, 0);
            bool okfac = true;
            Int nrm = prod.norm();
            Int check = 1;
            for (size_t pi = 0; pi < cls.fb_rational.size() && nrm > 1; ++pi) {
                const Int& p = cls.fb_rational[pi];
                if (nrm % p != 0) continue;
                while (nrm % p == 0) nrm = divexact(nrm, p);
                for (size_t t = cls.fb_start_of_p[pi]; t < cls.fb_start_of_p[pi + 1]; ++t) {
                    long val = nf::prime_valuation_ideal(K.mult, cls.fb[t], prod);
                    rel[t] = val;
                    for (long u = 0; u < val; ++u) check *= cls.fb[t].norm();
                }
            }
            okfac = nrm == 1 && check == prod.norm();
            if (!okfac) throw arithmetic_error("capitulate: norm product not factor-base supported");
            IntVec via_ideal = cls.dlog(rel);
            if (!(via_ideal == via_vec))
                throw arithmetic_error("capitulate: algebraic norm routes disagree");
            ++checked;
        }
    }

    // sigma action matrix on the generators, 3-part invariants
    std::vector<Int> d3;
    for (auto& d : cls.shape.invariants)
        d3.push_back(d % 3 == 0 ? pow3((unsigned long)valuation(d, Int(3))) : Int(1));
    IntMat S3(r, IntVec(r, 0));  // columns: sigma(g_j)
    for (size_t j = 0; j < r; ++j) {
        IntVec img = cls.dlog(apply_perm(cls.gen_fb[j]));
        for (size_t i = 0; i < r; ++i) S3[i][j] = img[i];
    }
    // fixed classes: #{x mod d3 : (S3 - I)x = 0}
    {
        IntMat M(r, IntVec(r));
        for (size_t i = 0; i < r; ++i)
            for (size_t j = 0; j < r; ++j) M[i][j] = S3[i][j] - (i == j ? 1 : 0);
        IntMat D(r, IntVec(r, 0));
        for (size_t i = 0; i < r; ++i) D[i][i] = d3[i];
        Int full = 1;
        for (auto& x : d3) full *= x;
        if (r == 0) {
            R.chevalley_fixed3 = 1;
            R.filtration = {Int(1)};
            R.filtration_n = 0;
        } else {
            IntMat L0 = D;
            // iterate the filtration: L_{i+1} = preimage of L_i under (S3 - I)
            IntMat Lcur = D;
            R.filtration.clear();
            long guard = 0;
            while (true) {
                IntMat pre_rows = preimage_lattice(M, Lcur);  // row basis
                Int orderi = divexact(full, hnf_det(pre_rows, r));
                // convert to column lattice for the next round
                IntMat colL(r, IntVec(r));
                for (size_t i = 0; i < r; ++i)
                    for (size_t j = 0; j < r; ++j) colL[i][j] = pre_rows[j][i];
                if (R.filtration.empty()) R.chevalley_fixed3 = orderi;
                R.filtration.push_back(orderi);
                if (orderi == full) break;
                if (++guard > 64) throw arithmetic_error("capitulate: filtration runaway");
                Lcur = colL;
            }
            R.filtration_n = long(R.filtration.size());
            if (R.filtration.size() == 1 && R.filtration[0] == full && full == 1) R.filtration_n = 0;
            (void)L0;
        }
    }

    // classes of the primes above 3
    {
        std::vector<IntVec> rows3;
        for (size_t i = 0; i < nfb; ++i) {
            if (cls.fb[i].p != 3) continue;
            IntVec v(nfb, 0);
            v[i] = 1;
            IntVec coords = cls.dlog(v);
            R.primes_above_3.push_back(coords);
            IntVec red(r);
            for (size_t j = 0; j < r; ++j) red[j] = mod(coords[j], d3[j]);
            rows3.push_back(red);
        }
        R.ram_subgroup_order3 = subgroup_order(rows3, d3);
    }
    return R;
}

// ambient-arithmetic count of the sigma-fixed classes on the 3-part: h3
// times the ramification contribution over the degree
inline Int expected_fixed3(const QuadField& k, const Int& h3, bool ramified) {
    if (ramified) return k.split3 == Split3::split ? Int(3 * h3) : h3;
    return divexact(h3, Int(3));
}

// layer-capitulation prediction for the smallest structures
inline std::string predict_capitulation(const QuadField& k, bool ramified, const AbGroup& Hk3,
                                        const AbGroup& HK3) {
    bool hk_is_z3 = Hk3.invariants.size() == 1 && Hk3.invariants[0] == 3;
    bool hK_is_z3z3 =
        HK3.invariants.size() == 2 && HK3.invariants[0] == 3 && HK3.invariants[1] == 3;
    if (ramified && hk_is_z3 && hK_is_z3z3) return "total";
    return "none-predicted";
}

// structure restrictions for a ramified layer with cyclic base 3-class group
// of order 3 and no capitulation: n < 3 forces Z/9; n = 3 allows (Z/3)^3 or
// Z/9 x Z/3; n > 3 gives the (a, b) shapes
inline std::string structure_classifier(const AbGroup& HK3, const Int& h3, long n) {
    if (h3 != 3) return "not-applicable";
    auto is = [&](std::vector<long> shape) {
        if (HK3.invariants.size() != shape.size()) return false;
        for (size_t i = 0; i < shape.size(); ++i)
            if (HK3.invariants[i] != shape[i]) return false;
        return true;
    };
    if (n < 3) return is({9}) ? "case n<p" : "violates";
    if (n == 3) return (is({3, 3, 3}) || is({9, 3})) ? "case n=p" : "violates";
    long a = n / 2, b = n % 2;
    std::vector<long> shape;
    for (long i = 0; i < b; ++i) shape.push_back(Int(pow3((unsigned long)(a + 1))).get_si());
    for (long i = 0; i < 2 - b; ++i) shape.push_back(Int(pow3((unsigned long)a)).get_si());
    return is(shape) ? "case n>p" : "violates";
}

// verdict recomputation from an external record (invariants + rows)
inline CapitulationReport capitulation_from_fixture(const AbGroup& H_K,
                                                    const std::vector<IntVec>& rows, const Int& h3,
                                                    bool ramified, const Int& dis_index) {
    CapitulationReport R;
    R.H_K = H_K;
    R.H_K3 = H_K.three_part();
    R.h3 = h3;
    R.ramified = ramified;
    R.disjunction_index = dis_index;
    R.norm_rows = rows;
    capitulation_verdict(R);
    return R;
}

}  // namespace acyc
