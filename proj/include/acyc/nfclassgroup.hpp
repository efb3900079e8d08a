#pragma once

#include <cmath>
#include <random>

#include "acyc/abgroup.hpp"
#include "acyc/sextic.hpp"

namespace acyc {

struct NFClassOptions {
    bool strict_minkowski = false;  // default: Bach-style bound, conditional
    long relation_extra = 40;
    long per_prime_tries = 160;
    unsigned seed = 20240901;
    long max_saturation_rounds = 6;
};

// Class group of the sextic field by factor-base relations.
class ClassGroupNF {
public:
    const SexticField* K = nullptr;
    bool conditional = false;
    Int bound = 0;
    std::vector<nf::NFPrime> fb;           // factor base, grouped by p
    std::vector<size_t> fb_start_of_p;     // index ranges per rational prime
    std::vector<Int> fb_rational;          // distinct rational primes

    AbGroup shape;                          // class group invariants
    std::vector<IntVec> gen_fb;             // generators as fb exponent vectors

    // dlog of an fb exponent vector
    IntVec dlog(const IntVec& v) const {
        IntVec cur = v;
        for (auto& [col, row] : elim_) {
            if (cur[col] == 0) continue;
            Int c = cur[col];
            Int piv = 0;
            for (auto& [j, val] : row)
                if (j == col) piv = val;
            Int f = piv == 1 ? c : -c;
            for (auto& [j, val] : row) cur[j] -= f * val;
        }
        IntVec core(core_cols_.size());
        for (size_t t = 0; t < core_cols_.size(); ++t) core[t] = cur[core_cols_[t]];
        for (size_t j = 0; j < cur.size(); ++j) {
            if (cur[j] != 0 && !is_core_[j])
                throw arithmetic_error("ClassGroupNF::dlog: residual support off the core");
        }
        IntVec out;
        for (size_t t = 0; t < keep_slots_.size(); ++t) {
            size_t slot = keep_slots_[t];
            Int val = 0;
            for (size_t j = 0; j < core.size(); ++j) val += core[j] * V_[j][slot];
            out.push_back(mod(val, shape.invariants[t]));
        }
        return out;
    }

    long fb_index(const Int& p, const nf::NFIdeal& ideal) const {
        for (size_t i = 0; i < fb.size(); ++i)
            if (fb[i].p == p && fb[i].ideal == ideal) return long(i);
        return -1;
    }

    // factor an order element over the factor base; empty on failure
    std::optional<IntVec> factor_element(const IntVec& alpha_order, const Rat& nrm) {
        Int N = abs(Int(nrm.get_num()));
        if (N == 0) return std::nullopt;
        IntVec rel(fb.size(), 0);
        Int rest = N;
        Int check = 1;
        for (size_t pi = 0; pi < fb_rational.size() && rest > 1; ++pi) {
            const Int& p = fb_rational[pi];
            if (rest % p != 0) continue;
            while (rest % p == 0) rest = divexact(rest, p);
            for (size_t i = fb_start_of_p[pi]; i < fb_start_of_p[pi + 1]; ++i) {
                long v = nf::prime_valuation(K->mult, fb[i], alpha_order);
                if (v > 0) {
                    rel[i] = v;
                    for (long t = 0; t < v; ++t) check *= fb[i].norm();
                }
            }
        }
        if (rest != 1) return std::nullopt;
        if (check != N) return std::nullopt;  // support off the factor base
        return rel;
    }

    static ClassGroupNF compute(const SexticField& K, const NFClassOptions& opt = {});

public:  // elimination internals, exposed for diagnostics
    using SparsePairs = std::vector<std::pair<size_t, Int>>;
    std::vector<std::pair<size_t, SparsePairs>> elim_;  // (column, relation row), in order
    std::vector<size_t> core_cols_;
    std::vector<char> is_core_;
    IntMat V_;
    std::vector<size_t> keep_slots_;

    friend struct ClassGroupNFBuilder;
};

struct ClassGroupNFBuilder {
    using SparseRow = std::map<size_t, Int>;

    static void finalize(ClassGroupNF& C, const std::vector<IntVec>& dense_relations) {
        size_t n = C.fb.size();
        C.elim_.clear();
        C.core_cols_.clear();
        std::vector<SparseRow> rows;
        for (auto& r : dense_relations) {
            SparseRow s;
            for (size_t j = 0; j < n; ++j)
                if (r[j] != 0) s[j] = r[j];
            rows.push_back(std::move(s));
        }
        std::vector<std::vector<size_t>> col_rows(n);  // row ids touching a column
        for (size_t r = 0; r < rows.size(); ++r)
            for (auto& [j, v] : rows[r]) col_rows[j].push_back(r);
        std::vector<char> col_done(n, 0), row_used(rows.size(), 0);

        // structured elimination: repeatedly take the sparsest live row with a
        // unit entry at a live column
        while (true) {
            size_t best_row = rows.size(), best_col = 0, best_weight = SIZE_MAX;
            for (size_t r = 0; r < rows.size(); ++r) {
                if (row_used[r] || rows[r].empty()) continue;
                if (rows[r].size() >= best_weight) continue;
                for (auto& [j, v] : rows[r]) {
                    if (!col_done[j] && (v == 1 || v == -1)) {
                        best_row = r;
                        best_col = j;
                        best_weight = rows[r].size();
                        break;
                    }
                }
            }
            if (best_row == rows.size()) break;
            SparseRow pivot = rows[best_row];
            row_used[best_row] = 1;
            Int piv = pivot.at(best_col);
            for (size_t r : col_rows[best_col]) {
                if (row_used[r] || rows[r].empty()) continue;
                auto it = rows[r].find(best_col);
                if (it == rows[r].end()) continue;
                Int f = piv == 1 ? it->second : -it->second;
                for (auto& [j, v] : pivot) {
                    Int& slot = rows[r][j];
                    slot -= f * v;
                    if (slot == 0) rows[r].erase(j);
                    else if (j != best_col) col_rows[j].push_back(r);
                }
            }
            col_done[best_col] = 1;
            ClassGroupNF::SparsePairs prow(pivot.begin(), pivot.end());
            C.elim_.push_back({best_col, std::move(prow)});
        }
        for (size_t j = 0; j < n; ++j)
            if (!col_done[j]) C.core_cols_.push_back(j);
        C.is_core_.assign(n, 0);
        for (size_t j : C.core_cols_) C.is_core_[j] = 1;
        // core relation matrix
        size_t m = C.core_cols_.size();
        std::vector<size_t> core_slot(n, SIZE_MAX);
        for (size_t t = 0; t < m; ++t) core_slot[C.core_cols_[t]] = t;
        IntMat core_rows;
        for (size_t r = 0; r < rows.size(); ++r) {
            if (row_used[r] || rows[r].empty()) continue;
            IntVec cr(m, 0);
            for (auto& [j, v] : rows[r]) {
                if (core_slot[j] == SIZE_MAX)
                    throw arithmetic_error("class group elimination left non-core support");
                cr[core_slot[j]] = v;
            }
            core_rows.push_back(cr);
        }
        if (m == 0) {
            C.shape = AbGroup{};
            C.V_.clear();
            C.keep_slots_.clear();
            C.gen_fb.clear();
            return;
        }
        if (core_rows.empty())
            throw bound_exceeded("class group relations rank-deficient (core " +
                                 std::to_string(m) + ", no rows)");
        auto S = smith_form(core_rows);
        // finite check
        long zeros = 0;
        for (size_t i = 0; i < m; ++i)
            if (i >= S.diag.size() || S.diag[i] == 0) ++zeros;
        if (zeros)
            throw bound_exceeded("class group relations rank-deficient (core " +
                                 std::to_string(m) + ", rows " + std::to_string(core_rows.size()) +
                                 ", free rank " + std::to_string(zeros) + ")");
        C.V_ = S.V;
        C.shape = AbGroup{};
        C.keep_slots_.clear();
        std::vector<std::pair<Int, size_t>> slots;
        for (size_t i = 0; i < m; ++i)
            if (S.diag[i] > 1) slots.push_back({S.diag[i], i});
        std::sort(slots.begin(), slots.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        IntMat Vinv = unimodular_inverse(S.V);
        C.gen_fb.clear();
        for (auto& [d, slot] : slots) {
            C.shape.invariants.push_back(d);
            C.keep_slots_.push_back(slot);
            // generator as fb vector: core columns with exponents from V^-1
            IntVec g(C.fb.size(), 0);
            for (size_t j = 0; j < m; ++j) g[C.core_cols_[j]] = Vinv[slot][j];
            C.gen_fb.push_back(g);
        }
    }
};

inline ClassGroupNF ClassGroupNF::compute(const SexticField& K, const NFClassOptions& opt) {
    ClassGroupNF C;
    C.K = &K;
    // bound: min(Minkowski, 12 log^2 |d|)
    Flt ad(abs(K.disc), 256);
    Flt sq = flt_sqrt(ad);
    // Minkowski constant for degree 6, r2 = 3: (6!/6^6)(4/pi)^3 ~ 0.03186
    Flt mink = sq * Flt(0.0319);
    double logd = std::log(Int(abs(K.disc)).get_d());
    double bach = 12.0 * logd * logd;
    Int bound_m(mink);
    Int bound_b((long)bach + 1);
    if (opt.strict_minkowski || bound_m < bound_b) {
        C.bound = bound_m < 40 ? Int(40) : bound_m;
        C.conditional = false;
    } else {
        C.bound = bound_b < 40 ? Int(40) : bound_b;
        C.conditional = true;
    }

    // factor base
    for (Int p = 2; p <= C.bound; p = next_prime(p)) {
        auto ps = nf::primes_above(K.A, K.O, K.mult, p);
        C.fb_start_of_p.push_back(C.fb.size());
        bool any = false;
        for (auto& P : ps)
            if (P.norm() <= C.bound) {
                C.fb.push_back(P);
                any = true;
            }
        if (!any) {
            C.fb_start_of_p.pop_back();
            continue;
        }
        C.fb_rational.push_back(p);
    }
    C.fb_start_of_p.push_back(C.fb.size());

    // embeddings of the order basis
    // one embedding per conjugate pair: (t0, +i sqrt m), (tc, +i sqrt m),
    // (tc, -i sqrt m) with tc the complex cubic root
    mp_bitcnt_t prec = 320;
    auto E = cubic_embeddings(K.Q, prec);
    Flt sqm = flt_sqrt(Flt(K.m, prec));
    std::vector<Cplx> troots{{E.real[0], Flt(0, prec)}, E.cplx[0], E.cplx[0]};
    std::vector<Cplx> sgn{{Flt(0, prec), sqm}, {Flt(0, prec), sqm}, {Flt(0, prec), -sqm}};
    // embedding rows for order basis: 6 real coordinates
    std::vector<std::vector<Flt>> OB(6, std::vector<Flt>(6, Flt(0, prec)));
    Flt sqrt2 = flt_sqrt(Flt(2, prec));
    for (size_t bi = 0; bi < 6; ++bi) {
        QVec w = K.O.element(K.A, bi);
        for (size_t s = 0; s < 3; ++s) {
            Cplx acc(Flt(0, prec), Flt(0, prec));
            for (size_t i = 0; i < 2; ++i)
                for (size_t j = 0; j < 3; ++j) {
                    Rat cij = w[i * 3 + j];
                    if (cij == 0) continue;
                    Cplx term(flt_of(cij, prec), Flt(0, prec));
                    for (size_t t = 0; t < i; ++t) term = term * sgn[s];
                    for (size_t t = 0; t < j; ++t) term = term * troots[s];
                    acc = acc + term;
                }
            OB[bi][2 * s] = sqrt2 * acc.re;
            OB[bi][2 * s + 1] = sqrt2 * acc.im;
        }
    }

    std::mt19937 rng(opt.seed);
    std::vector<IntVec> relations;
    auto try_element = [&](const IntVec& alpha) -> bool {
        QVec av = K.A.zero();
        for (size_t i = 0; i < 6; ++i)
            for (size_t t = 0; t < 6; ++t) av[t] += Rat(alpha[i] * K.O.rows[i][t], K.O.den);
        Rat nrm = K.A.norm(av);
        if (nrm == 0) return false;
        auto rel = C.factor_element(alpha, nrm);
        if (!rel) return false;
        relations.push_back(*rel);
        return true;
    };

    // LLL-reduce every factor-base ideal once; keep the exact reduced bases
    std::vector<IntMat> reduced(C.fb.size());
    for (size_t i = 0; i < C.fb.size(); ++i) {
        auto& P = C.fb[i];
        std::vector<std::vector<Flt>> rows(6, std::vector<Flt>(6, Flt(0, prec)));
        for (size_t r = 0; r < 6; ++r)
            for (size_t t = 0; t < 6; ++t) {
                Flt acc(0, prec);
                for (size_t j = 0; j < 6; ++j)
                    if (P.ideal.rows[r][j] != 0) acc += Flt(P.ideal.rows[r][j], prec) * OB[j][t];
                rows[r][t] = acc;
            }
        auto L = lll_reduce(rows);
        IntMat red(6, IntVec(6, 0));
        for (size_t r = 0; r < 6; ++r)
            for (size_t j = 0; j < 6; ++j)
                for (size_t u = 0; u < 6; ++u) red[r][j] += L.U[r][u] * P.ideal.rows[u][j];
        reduced[i] = std::move(red);
    }
    auto random_in = [&](size_t i, long spread) {
        IntVec alpha(6, 0);
        bool any = false;
        for (size_t r = 0; r < 6; ++r) {
            long c = long(rng() % (2 * spread + 1)) - spread;
            if (c == 0) continue;
            for (size_t j = 0; j < 6; ++j) alpha[j] += c * reduced[i][r][j];
            any = true;
        }
        if (!any) alpha = reduced[i][0];
        return alpha;
    };

    // one relation through every factor-base prime
    for (size_t i = 0; i < C.fb.size(); ++i) {
        bool found = false;
        for (long attempt = 0; attempt < opt.per_prime_tries && !found; ++attempt) {
            IntVec alpha;
            if (attempt < 6) {
                alpha = reduced[i][size_t(attempt)];
            } else {
                alpha = random_in(i, attempt < 40 ? 1 : 2);
            }
            if (try_element(alpha)) found = true;
        }
        if (!found)
            throw bound_exceeded("class group: no smooth relation for a factor-base prime (norm " +
                                 C.fb[i].norm().get_str() + ")");
    }
    // extra randomized relations + saturation until the shape stabilises
    AbGroup last_shape;
    bool have_last = false;
    long want = std::max(opt.relation_extra, long(C.fb.size()) / 3);
    for (long round = 0;; ++round) {
        if (round > opt.max_saturation_rounds + 8)
            throw bound_exceeded("class group: saturation did not stabilise");
        long got = 0, misses = 0;
        while (got < want && misses < 40000) {
            size_t i = rng() % C.fb.size();
            if (try_element(random_in(i, 2)))
                ++got;
            else
                ++misses;
        }
        try {
            ClassGroupNFBuilder::finalize(C, relations);
        } catch (bound_exceeded&) {
            // not enough independent relations yet
            want = std::max(want, long(C.fb.size()) / 2);
            have_last = false;
            continue;
        }
        if (have_last && C.shape == last_shape) break;
        last_shape = C.shape;
        have_last = true;
        want = opt.relation_extra;
    }
    return C;
}

}  // namespace acyc
