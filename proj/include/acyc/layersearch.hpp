#pragma once

#include <atomic>
#include <mutex>
#include <thread>

#include "acyc/radicals.hpp"

namespace acyc {

struct ambiguous_result : std::runtime_error {
    long survivors;
    ambiguous_result(long s)
        : std::runtime_error("layer search ambiguous: " + std::to_string(s) +
                             " survivors; retry with a larger prime interval"),
          survivors(s) {}
};

struct LayerOptions {
    Int q_max = Int(100000);
    bool use_shortcut = true;
    bool exact_root_cert = true;
    ContextOptions ctx;
};

struct SievedRadical {
    Radical rad;
    CubicCandidate cand;
};

struct LayerResult {
    Int m;
    CaseTag tag = CaseTag::trivial;
    long val = 0;
    bool ramified = true;
    size_t winner_index = 0;  // 1-based J in sieve order
    QuadElement winner_w;
    CubicPoly Q_raw, Q_red;
    long delta = 0;
    Int q_min = 5, q_max = 0;
    bool sigma_flag = false;
    bool shortcut_used = false;
    std::vector<SievedRadical> radicals;
    std::vector<Int> accepted_primes;
};

// Accepted-prime test: the split prime q qualifies to eliminate radicals iff
// the truncated minus-log of the principal generator of q^(hta*Exp) clears
// the Val threshold.
inline bool sieve_prime(const FieldContext& ctx, const Int& q, MinusLog* out = nullptr) {
    auto rec = qf::factor_rational_prime(ctx.k, q);
    if (rec.type != Split3::split) throw arithmetic_error("sieve_prime: q not split");
    QuadIdeal A = rec.primes[0];
    Int e = ctx.Ck.data.hta * ctx.Ck.data.Exp;
    QuadIdeal B = qf::ideal_pow(ctx.k, A, e);
    auto pr = qf::principal_generator(ctx.k, B);
    if (!pr.principal) throw arithmetic_error("sieve_prime: power not principal");
    auto [pass, L] = minus_log_test(ctx.k, pr.generator, ctx.T.val);
    if (out) *out = L;
    return pass;
}

// The main search: eliminate radicals with accepted primes (or by
// discriminant in the unramified cyclic shortcut); exactly one radical must
// survive.
inline LayerResult find_first_layer(FieldContext& ctx, const LayerOptions& opt = {}) {
    LayerResult R;
    R.m = ctx.m;
    R.tag = ctx.tag;
    R.val = ctx.T.val;
    R.ramified = ctx.T.ramified_layer;
    R.q_max = opt.q_max;

    auto basis = radical_basis(ctx);
    auto rads = enumerate_radicals(basis);
    for (auto& r : rads) R.radicals.push_back({r, cubic_candidate(r.w)});

    const Int& h3 = ctx.Ck.data.h3;
    bool shortcut = opt.use_shortcut && h3 >= 3 * ctx.T.otbp &&
                    ctx.Ck.structure.three_part().rank() == 1;
    long live = long(R.radicals.size());

    if (shortcut) {
        R.shortcut_used = true;
        for (auto& sr : R.radicals) {
            if (sr.cand.field_v3() > 1) {
                sr.cand.eliminated_by = Int(0);  // rejected by discriminant
                --live;
            }
        }
    } else {
        for (Int q = 5; q <= opt.q_max && live > 1; q = next_prime(q)) {
            if (kronecker(-ctx.m, q) != 1) continue;
            if (!sieve_prime(ctx, q)) continue;
            R.accepted_primes.push_back(q);
            for (auto& sr : R.radicals) {
                if (sr.cand.eliminated_by) continue;
                if (cubic_irreducible_mod(sr.cand.Q, q)) {
                    sr.cand.eliminated_by = q;
                    --live;
                }
            }
        }
    }
    R.delta = live;
    R.sigma_flag = live != 1;
    if (live == 0)
        throw arithmetic_error("find_first_layer: all radicals eliminated (internal inconsistency)");
    if (live > 1) throw ambiguous_result(live);
    Int winner_y = 0;
    for (size_t i = 0; i < R.radicals.size(); ++i) {
        if (!R.radicals[i].cand.eliminated_by) {
            R.winner_index = i + 1;
            R.winner_w = R.radicals[i].rad.w;
            R.Q_raw = R.radicals[i].cand.Q;
            winner_y = R.radicals[i].cand.ycoef;
        }
    }
    R.Q_red = cubic_reduce(R.Q_raw, &winner_y);
    // ramification consistency: the layer is unramified iff the winner's
    // cubic has tame 3-discriminant
    long v3w = field_disc_v3(R.Q_red);
    if ((v3w <= 1) == R.ramified)
        throw arithmetic_error("find_first_layer: ramification status contradicts the winner");
    return R;
}

inline LayerResult find_first_layer_m(const Int& m, const LayerOptions& opt = {}) {
    FieldContext ctx = build_context(m, opt.ctx);
    return find_first_layer(ctx, opt);
}

// batch driver: independent items, failures isolated
struct BatchItem {
    Int m;
    std::optional<LayerResult> result;
    std::string error;
    bool ambiguous = false;
};

inline std::vector<BatchItem> batch_layers(const std::vector<Int>& ms, const LayerOptions& opt = {},
                                           unsigned jobs = 1) {
    std::vector<BatchItem> out(ms.size());
    for (size_t i = 0; i < ms.size(); ++i) out[i].m = ms[i];
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= ms.size()) return;
            try {
                out[i].result = find_first_layer_m(ms[i], opt);
            } catch (ambiguous_result& e) {
                out[i].ambiguous = true;
                out[i].error = e.what();
            } catch (std::exception& e) {
                out[i].error = e.what();
            }
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return out;
}

}  // namespace acyc
