#pragma once

#include <fstream>
#include <json.hpp>

#include "acyc/pipeline.hpp"

namespace acyc {

using json = nlohmann::json;

// Integers may exceed double precision: emit as number when safe, else string.
inline json int_json(const Int& x) {
    if (x >= -((Int(1) << 53) - 1) && x <= (Int(1) << 53) - 1) {
        return json(x.get_si());
    }
    return json(x.get_str());
}

inline Int int_from_json(const json& j) {
    if (j.is_number_integer()) return Int((long)j.get<long long>());
    if (j.is_string()) return Int(j.get<std::string>());
    throw arithmetic_error("int_from_json: unexpected type");
}

inline json group_json(const AbGroup& G) {
    json a = json::array();
    for (auto& d : G.invariants) a.push_back(int_json(d));
    return a;
}

inline AbGroup group_from_json(const json& j) {
    AbGroup G;
    for (auto& x : j) G.invariants.push_back(int_from_json(x));
    return G;
}

inline std::string cubic_json(const CubicPoly& Q) { return Q.str(); }

// parse "x^3-3*x-523" style monic cubics (also accepts x^2 terms)
inline CubicPoly cubic_from_string(const std::string& s);

inline json record_json(const ResultRecord& R) {
    json j;
    j["m"] = int_json(R.m);
    j["Disc"] = int_json(R.Disc);
    j["kronecker(-m,3)"] = R.kron3;
    j["case"] = case_name(R.tag);
    j["h_k"] = int_json(R.h_k);
    j["H_k"] = group_json(R.H_k);
    j["T_k"] = group_json(R.T_k);
    j["h_kstar"] = int_json(R.h_kstar);
    j["H_kstar"] = group_json(R.H_kstar);
    j["#H_k"] = int_json(R.h3);
    j["#T_k"] = int_json(R.ot);
    j["#T_k^bp"] = int_json(R.otbp);
    j["#W_k^bp"] = int_json(R.wbp);
    j["k_1^ac"] = R.ramified ? "Ramified" : "Unramified";
    j["Val"] = R.val;
    j["J"] = R.winner_index;
    j["w"] = R.winner_w.str();
    j["Q^acyc"] = R.Q_red.str();
    j["Q_raw"] = R.Q_raw.str();
    j["delta"] = R.delta;
    j["sigma"] = R.sigma_flag;
    j["shortcut"] = R.shortcut_used;
    j["q_interval"] = json::array({5, int_json(R.q_max)});
    j["seconds"] = R.seconds;
    if (R.cap) {
        j["H_(k_1^acyc)"] = group_json(R.cap->H_K);
        json rows = json::array();
        for (auto& row : R.cap->norm_rows) {
            json r = json::array();
            for (auto& x : row) r.push_back(int_json(x));
            rows.push_back(r);
        }
        j["norm_rows"] = rows;
        j["image_order3"] = int_json(R.cap->image_order3);
        j["#Ker(J)"] = int_json(R.cap->kernel_order);
        j["verdict"] = R.cap->verdict;
        j["conditional"] = R.cap->conditional;
        j["fixed_classes3"] = int_json(R.cap->chevalley_fixed3);
        json fil = json::array();
        for (auto& o : R.cap->filtration) fil.push_back(int_json(o));
        j["filtration"] = fil;
        json p3 = json::array();
        for (auto& v : R.cap->primes_above_3) {
            json r = json::array();
            for (auto& x : v) r.push_back(int_json(x));
            p3.push_back(r);
        }
        j["primes_above_3"] = p3;
    }
    return j;
}

// External fixture record: the transcription of a published run.
struct FixtureRecord {
    Int m;
    json raw;

    std::optional<std::string> case_tag() const {
        if (raw.contains("case")) return raw["case"].get<std::string>();
        return std::nullopt;
    }
    std::optional<bool> ramified() const {
        if (raw.contains("k_1^ac")) return raw["k_1^ac"].get<std::string>() == "Ramified";
        return std::nullopt;
    }
    std::optional<long> val() const {
        if (raw.contains("Val") && raw["Val"].is_number()) return raw["Val"].get<long>();
        return std::nullopt;
    }
    std::optional<CubicPoly> q_acyc() const {
        if (raw.contains("Q^acyc")) return cubic_from_string(raw["Q^acyc"].get<std::string>());
        return std::nullopt;
    }
    std::optional<AbGroup> group(const char* key) const {
        if (raw.contains(key)) return group_from_json(raw[key]);
        return std::nullopt;
    }
};

inline std::vector<FixtureRecord> ingest_fixtures(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw arithmetic_error("ingest_fixtures: cannot open " + path);
    std::vector<FixtureRecord> out;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        json j;
        try {
            j = json::parse(line);
        } catch (std::exception& e) {
            throw arithmetic_error("fixture parse error at line " + std::to_string(lineno) + ": " +
                                   e.what());
        }
        FixtureRecord F;
        F.m = int_from_json(j.at("m"));
        F.raw = std::move(j);
        out.push_back(std::move(F));
    }
    return out;
}

// basis-independent comparison of a computed record against a fixture
struct DiffReport {
    std::vector<std::string> mismatches;
    bool ok() const { return mismatches.empty(); }
};

inline DiffReport compare_record(const ResultRecord& R, const FixtureRecord& F) {
    DiffReport D;
    auto check = [&](bool cond, const std::string& field) {
        if (!cond) D.mismatches.push_back(field);
    };
    if (auto c = F.case_tag()) check(*c == case_name(R.tag), "case");
    if (auto r = F.ramified()) check(*r == R.ramified, "k_1^ac");
    if (auto v = F.val()) check(*v == R.val, "Val");
    if (auto g = F.group("H_k")) check(*g == R.H_k, "H_k");
    if (auto g = F.group("T_k")) check(*g == R.T_k, "T_k");
    if (auto g = F.group("H_kstar")) check(*g == R.H_kstar, "H_kstar");
    if (auto q = F.q_acyc()) check(same_cubic_field(R.Q_red, *q) == FieldMatch::equal, "Q^acyc");
    if (auto g = F.group("H_(k_1^acyc)")) {
        if (R.cap)
            check(g->three_part() == R.cap->H_K.three_part(), "H_(k_1^acyc) 3-part");
        else
            D.mismatches.push_back("H_(k_1^acyc): no computed value");
    }
    return D;
}

inline CubicPoly cubic_from_string(const std::string& s) {
    // monic integral polynomial in x of degree 3, e.g. "x^3-x^2+76*x+84"
    CubicPoly Q{Int(0), Int(0), Int(0)};
    size_t i = 0;
    auto fail = [&]() { throw arithmetic_error("cubic_from_string: cannot parse '" + s + "'"); };
    bool lead_seen = false;
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+') {
            ++i;
        } else if (s[i] == '-') {
            sign = -1;
            ++i;
        }
        while (i < s.size() && s[i] == ' ') ++i;
        std::string digits;
        while (i < s.size() && isdigit(s[i])) digits.push_back(s[i++]);
        Int coef = digits.empty() ? Int(1) : Int(digits);
        coef *= sign;
        long deg = 0;
        if (i < s.size() && (s[i] == '*' || s[i] == 'x')) {
            if (s[i] == '*') ++i;
            if (i >= s.size() || s[i] != 'x') fail();
            ++i;
            deg = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::string d;
                while (i < s.size() && isdigit(s[i])) d.push_back(s[i++]);
                if (d.empty()) fail();
                deg = std::stol(d);
            }
        }
        switch (deg) {
            case 3:
                if (coef != 1) fail();
                lead_seen = true;
                break;
            case 2: Q.c2 += coef; break;
            case 1: Q.c1 += coef; break;
            case 0: Q.c0 += coef; break;
            default: fail();
        }
        while (i < s.size() && s[i] == ' ') ++i;
    }
    if (!lead_seen) fail();
    return Q;
}

}  // namespace acyc
