#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <unordered_map>

#include "acyc/linalg.hpp"
#include "acyc/numeric.hpp"

namespace acyc {

// Finite abelian group in invariant form d1, d2, ... listed DESCENDING with
// d_{i+1} | d_i (the convention class-group software prints). Witness data,
// when present, is carried by the owning structure; this is the bare shape.
struct AbGroup {
    std::vector<Int> invariants;  // descending divisibility chain, entries > 1

    Int order() const {
        Int o = 1;
        for (auto& d : invariants) o *= d;
        return o;
    }
    bool trivial() const { return invariants.empty(); }
    long rank() const { return long(invariants.size()); }

    long rank_p(const Int& p) const {
        long r = 0;
        for (auto& d : invariants)
            if (d % p == 0) ++r;
        return r;
    }
    long rank3() const { return rank_p(Int(3)); }

    // Sylow p-subgroup shape: p-parts of the invariants, descending, 1s dropped.
    AbGroup sylow(const Int& p) const {
        AbGroup S;
        for (auto& d : invariants) {
            Int q = pow(p, (unsigned long)valuation(d, p));
            if (d % p == 0) S.invariants.push_back(q);
        }
        return S;
    }
    AbGroup three_part() const { return sylow(Int(3)); }

    // exponent of the p-part (1 if trivial)
    Int exponent_p(const Int& p) const {
        auto S = sylow(p);
        return S.invariants.empty() ? Int(1) : S.invariants.front();
    }

    std::string str() const {
        std::string s = "[";
        for (size_t i = 0; i < invariants.size(); ++i)
            s += (i ? "," : "") + to_string(invariants[i]);
        return s + "]";
    }

    bool operator==(const AbGroup& o) const { return invariants == o.invariants; }
};

// Group shape from a relation presentation: generators x_1..x_n subject to
// the relation rows. Returns the nontrivial invariant chain, descending.
inline AbGroup group_from_relations(const IntMat& relations, size_t n_gens) {
    IntMat M = relations;
    if (M.empty()) M.push_back(IntVec(n_gens, 0));
    auto S = smith_form(M, false);
    AbGroup G;
    std::vector<Int> diag = S.diag;
    // pad missing columns as free (shouldn't happen for finite groups)
    for (size_t i = diag.size(); i < n_gens; ++i) diag.push_back(0);
    for (auto& d : diag) {
        if (d == 0) throw arithmetic_error("group_from_relations: infinite group");
        if (d > 1) G.invariants.push_back(d);
    }
    std::sort(G.invariants.begin(), G.invariants.end(), [](const Int& a, const Int& b) { return a > b; });
    return G;
}

// Merge invariant chains of coprime-order groups (Sylow parts) into a chain.
inline AbGroup merge_sylow_chains(const std::vector<AbGroup>& parts) {
    size_t len = 0;
    for (auto& P : parts) len = std::max(len, P.invariants.size());
    AbGroup G;
    for (size_t i = 0; i < len; ++i) {
        Int d = 1;
        for (auto& P : parts)
            if (i < P.invariants.size()) d *= P.invariants[i];
        G.invariants.push_back(d);
    }
    return G;
}

// Structure of a finite abelian group given by an opaque multiplication on
// element indices. Basis search is randomised and verified by full
// enumeration, so results are certified; sized for groups up to ~10^5.
struct EnumeratedAbelian {
    long n = 1;                      // group order
    std::function<long(long, long)> op;
    long id = 0;

    AbGroup shape;                   // descending invariant chain
    std::vector<long> gens;          // generator indices, gens[i] has order shape.invariants[i]
    std::vector<IntVec> dlog_of;     // element index -> exponent vector

    long pow(long x, Int e) const {
        long acc = id, base = x;
        if (e < 0) throw arithmetic_error("EnumeratedAbelian: negative exponent");
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) acc = op(acc, base);
            base = op(base, base);
            e >>= 1;
        }
        return acc;
    }

    Int order_of(long x) const {
        Int o = n;
        for (auto& [p, e] : factor(Int(n))) {
            (void)e;
            while (o % p == 0 && pow(x, divexact(o, p)) == id) o = divexact(o, p);
        }
        return o;
    }

    IntVec dlog(long x) const { return dlog_of.at(size_t(x)); }
};

// Build structure + discrete-log table for the group on {0..n-1}.
inline EnumeratedAbelian enumerated_abelian(long n, long id, std::function<long(long, long)> op,
                                            unsigned seed = 12345) {
    EnumeratedAbelian G;
    G.n = n;
    G.id = id;
    G.op = std::move(op);
    if (n == 1) {
        G.dlog_of = {IntVec{}};
        return G;
    }
    auto fac = factor(Int(n));
    std::vector<AbGroup> sylow_shapes;
    std::vector<std::vector<long>> sylow_gens;  // per prime, descending orders

    std::mt19937 rng(seed);
    for (auto& [p, e] : fac) {
        long pe = Int(pow(p, (unsigned long)e)).get_si();
        Int cof = divexact(Int(n), Int(pe));
        // closure of the Sylow subgroup
        std::vector<long> sy;
        std::unordered_map<long, long> seen;
        auto add = [&](long x) {
            if (!seen.count(x)) {
                seen[x] = long(sy.size());
                sy.push_back(x);
            }
        };
        add(id);
        for (long x = 0; x < n && long(sy.size()) < pe; ++x) {
            long y = G.pow(x, cof);
            size_t before = sy.size();
            add(y);
            if (sy.size() == before) continue;
            for (size_t i = 0; i < sy.size() && long(sy.size()) < pe; ++i)
                for (size_t j = i; j < sy.size() && long(sy.size()) < pe; ++j) add(G.op(sy[i], sy[j]));
        }
        if (long(sy.size()) != pe) throw arithmetic_error("enumerated_abelian: sylow closure size mismatch");
        // invariants by counting elements killed by p^j
        std::vector<long> nj{1};
        while (nj.back() < pe) {
            Int pj = pow(p, (unsigned long)nj.size());
            long cnt = 0;
            for (long x : sy)
                if (G.pow(x, pj) == id) ++cnt;
            nj.push_back(cnt);
        }
        std::vector<long> exps;  // e_1 >= e_2 >= ... of the p-part
        for (size_t j = 1; j < nj.size(); ++j) {
            long rj = valuation(Int(nj[j] / nj[j - 1]), p);  // p-rank gained at level j
            if (exps.size() < size_t(rj)) exps.resize(size_t(rj), 0);
            for (long t = 0; t < rj; ++t) exps[size_t(t)]++;
        }
        AbGroup shape;
        for (long ex : exps) shape.invariants.push_back(pow(p, (unsigned long)ex));
        std::sort(shape.invariants.begin(), shape.invariants.end(),
                  [](const Int& a, const Int& b) { return a > b; });
        // randomized verified basis
        size_t r = shape.invariants.size();
        std::vector<long> basis;
        bool found = false;
        for (int attempt = 0; attempt < 4000 && !found; ++attempt) {
            basis.clear();
            bool ok = true;
            for (size_t i = 0; i < r; ++i) {
                const Int& want = shape.invariants[i];
                long cand = -1;
                for (int tries = 0; tries < 200; ++tries) {
                    long x = sy[rng() % sy.size()];
                    if (G.order_of(x) == want) {
                        cand = x;
                        break;
                    }
                }
                if (cand < 0) {
                    ok = false;
                    break;
                }
                basis.push_back(cand);
            }
            if (!ok) continue;
            // verify direct sum by enumerating all products
            std::unordered_map<long, char> hit;
            std::vector<long> cur{id};
            for (size_t i = 0; i < r; ++i) {
                std::vector<long> next;
                long g = basis[i];
                long d = shape.invariants[i].get_si();
                long gp = id;
                for (long t = 0; t < d; ++t) {
                    for (long x : cur) next.push_back(G.op(x, gp));
                    gp = G.op(gp, g);
                }
                cur = std::move(next);
            }
            for (long x : cur) hit[x] = 1;
            if (long(hit.size()) == pe) found = true;
        }
        if (!found && r > 0) throw arithmetic_error("enumerated_abelian: basis search failed");
        sylow_shapes.push_back(shape);
        sylow_gens.push_back(basis);
    }
    G.shape = merge_sylow_chains(sylow_shapes);
    size_t r = G.shape.invariants.size();
    G.gens.assign(r, id);
    for (size_t s = 0; s < sylow_gens.size(); ++s)
        for (size_t i = 0; i < sylow_gens[s].size(); ++i) G.gens[i] = G.op(G.gens[i], sylow_gens[s][i]);
    // full discrete-log table by enumeration
    G.dlog_of.assign(size_t(n), IntVec{});
    std::vector<char> filled(size_t(n), 0);
    std::vector<long> cur{id};
    std::vector<IntVec> curvec{IntVec(r, 0)};
    G.dlog_of[size_t(id)] = IntVec(r, 0);
    filled[size_t(id)] = 1;
    for (size_t i = 0; i < r; ++i) {
        std::vector<long> next;
        std::vector<IntVec> nextvec;
        long d = G.shape.invariants[i].get_si();
        long gp = id;
        for (long t = 0; t < d; ++t) {
            for (size_t u = 0; u < cur.size(); ++u) {
                long x = G.op(cur[u], gp);
                IntVec v = curvec[u];
                v[i] = t;
                next.push_back(x);
                nextvec.push_back(v);
            }
            gp = G.op(gp, G.gens[i]);
        }
        cur = std::move(next);
        curvec = std::move(nextvec);
    }
    for (size_t u = 0; u < cur.size(); ++u) {
        G.dlog_of[size_t(cur[u])] = curvec[u];
        filled[size_t(cur[u])] = 1;
    }
    for (long x = 0; x < n; ++x)
        if (!filled[size_t(x)]) throw arithmetic_error("enumerated_abelian: dlog table incomplete");
    return G;
}

}  // namespace acyc
