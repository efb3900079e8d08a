#pragma once

#include <chrono>

#include "acyc/capitulation.hpp"
#include "acyc/layersearch.hpp"

namespace acyc {

struct PipelineOptions {
    LayerOptions layer;
    bool run_capitulation = false;
    NFClassOptions cls;
};

// One field, end to end: classification, torsion data, layer search and
// (optionally) the capitulation analysis of the layer.
struct ResultRecord {
    Int m;
    Int Disc;       // |disc k| convention of the printed records: m or 4m
    int kron3 = 0;
    CaseTag tag = CaseTag::trivial;
    AbGroup H_k;    // full invariants
    Int h_k = 1;
    AbGroup T_k;
    Int h_kstar = 1;
    AbGroup H_kstar;
    Int h3 = 1, ot = 1, otbp = 1, wbp = 1;
    bool ramified = true;
    Int disjunction_index = 1;
    long val = 0;
    bool shortcut_used = false;
    long winner_index = 0;
    QuadElement winner_w;
    CubicPoly Q_raw, Q_red;
    long delta = 1;
    bool sigma_flag = false;
    Int q_max = 0;
    std::optional<CapitulationReport> cap;
    double seconds = 0;
};

inline ResultRecord run_field(const Int& m, const PipelineOptions& opt = {}) {
    auto t0 = std::chrono::steady_clock::now();
    FieldContext ctx = build_context(m, opt.layer.ctx);
    ResultRecord R;
    R.m = m;
    R.Disc = mod(Int(-m), Int(4)) == 1 ? m : 4 * m;
    R.kron3 = kronecker(-m, Int(3));
    R.tag = ctx.tag;
    R.H_k = ctx.Ck.structure;
    R.h_k = ctx.Ck.data.h;
    R.T_k = ctx.T.T;
    R.h_kstar = ctx.Cs.data.h;
    R.H_kstar = ctx.Cs.structure;
    R.h3 = ctx.Ck.data.h3;
    R.ot = ctx.T.ot;
    R.otbp = ctx.T.otbp;
    R.wbp = ctx.T.wbp;
    R.ramified = ctx.T.ramified_layer;
    R.disjunction_index = ctx.T.disjunction_index;
    R.val = ctx.T.val;
    R.q_max = opt.layer.q_max;

    LayerResult L = find_first_layer(ctx, opt.layer);
    R.shortcut_used = L.shortcut_used;
    R.winner_index = long(L.winner_index);
    R.winner_w = L.winner_w;
    R.Q_raw = L.Q_raw;
    R.Q_red = L.Q_red;
    R.delta = L.delta;
    R.sigma_flag = L.sigma_flag;

    if (opt.run_capitulation) {
        CapitulationInputs in;
        in.m = m;
        in.Q_red = L.Q_red;
        in.h3 = ctx.Ck.data.h3;
        in.ramified = ctx.T.ramified_layer;
        in.disjunction_index = ctx.T.disjunction_index;
        R.cap = capitulate(in, opt.cls);
    }
    R.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return R;
}

}  // namespace acyc
