// Command-line front end: classify | layer | tk | capitulate | batch.
//
// Exit codes: 0 success, 2 usage/parse error, 3 invalid field (not
// squarefree etc.), 4 bound exceeded, 5 ambiguous layer search (retry with a
// larger --qmax), 6 internal inconsistency, 7 fixture mismatch.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>

#include "acyc/records.hpp"

using namespace acyc;

namespace {

int run_classify(long m) {
    std::cout << case_name(classify(Int(m))) << "\n";
    return 0;
}

int run_tk(long m, long nu_opt) {
    auto [k, ks] = make_pair_fields(Int(m));
    auto C = ClassGroupImag::compute(k);
    long nu = nu_opt > 0 ? nu_opt : valuation(C.data.Exp, Int(3)) + 2;
    auto R = ray_class_group(k, C, nu);
    std::cout << "H_k=" << C.structure.str() << " (3-part " << C.structure.three_part().str()
              << ")\n";
    std::cout << "nu=" << nu << " H_k(3^nu)=" << R.three.str() << "\n";
    auto T = t_k(k, C);
    std::cout << "T_k=" << T.T.str() << " #T_k=" << T.ot << " #T_k^bp=" << T.otbp
              << " #W_k^bp=" << T.wbp << " Val=" << T.val
              << " k_1^ac=" << (T.ramified_layer ? "Ramified" : "Unramified") << "\n";
    return 0;
}

int run_layer(long m, long qmax, bool no_shortcut, bool capitulate_flag, bool strict_minkowski,
              const std::string& fixture_path, bool json_out) {
    PipelineOptions opt;
    opt.layer.q_max = qmax;
    opt.layer.use_shortcut = !no_shortcut;
    opt.run_capitulation = capitulate_flag;
    opt.cls.strict_minkowski = strict_minkowski;
    ResultRecord R = run_field(Int(m), opt);
    json j = record_json(R);
    if (json_out) {
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "m=" << R.m << " case=" << case_name(R.tag) << " h_k=" << R.h_k
                  << " H_k=" << R.H_k.str() << " T_k=" << R.T_k.str() << " h_kstar=" << R.h_kstar
                  << " H_kstar=" << R.H_kstar.str() << "\n";
        std::cout << "#H_k=" << R.h3 << " #T_k=" << R.ot << " #T_k^bp=" << R.otbp
                  << " #W_k^bp=" << R.wbp << " k_1^ac=" << (R.ramified ? "Ramified" : "Unramified")
                  << " Val=" << R.val << "\n";
        std::cout << "SOLUTION:J=" << R.winner_index << " w=" << R.winner_w.str() << "\n";
        std::cout << "Q^acyc=" << R.Q_red.str() << "\n";
        if (R.cap) {
            std::cout << "H_(k_1^acyc)=" << R.cap->H_K.str()
                      << (R.cap->conditional ? "  (conditional factor-base bound)" : "") << "\n";
            for (size_t i = 0; i < R.cap->norm_rows.size(); ++i) {
                std::cout << "norm in kacyc/k of the component " << i + 1 << " of H_kacyc=[";
                for (size_t t = 0; t < R.cap->norm_rows[i].size(); ++t)
                    std::cout << (t ? "," : "") << R.cap->norm_rows[i][t];
                std::cout << "]\n";
            }
            std::cout << "#Ker(J)=" << R.cap->kernel_order << " verdict=" << R.cap->verdict << "\n";
        }
    }
    if (!fixture_path.empty()) {
        auto fixtures = ingest_fixtures(fixture_path);
        for (auto& F : fixtures) {
            if (F.m != R.m) continue;
            auto D = compare_record(R, F);
            if (!D.ok()) {
                std::cerr << "fixture mismatch:";
                for (auto& f : D.mismatches) std::cerr << " " << f;
                std::cerr << "\n";
                return 7;
            }
            std::cerr << "fixture match\n";
        }
    }
    return 0;
}

int run_batch(const std::string& range, const std::string& list, const std::string& filter,
              unsigned jobs, const std::string& out_path, long qmax, bool capitulate_flag) {
    std::vector<Int> ms;
    if (!range.empty()) {
        auto dash = range.find("..");
        if (dash == std::string::npos) {
            std::cerr << "range must be A..B\n";
            return 2;
        }
        long a = std::stol(range.substr(0, dash));
        long b = std::stol(range.substr(dash + 2));
        for (long m = a; m <= b; ++m)
            if (m >= 5 && is_squarefree(Int(m)) && m != 3) ms.push_back(Int(m));
    }
    if (!list.empty()) {
        std::stringstream ss(list);
        std::string tok;
        while (std::getline(ss, tok, ',')) ms.push_back(Int(tok));
    }
    if (ms.empty()) {
        std::cerr << "batch: empty input\n";
    }
    // case filter needs only the classification
    PipelineOptions opt;
    opt.layer.q_max = qmax;
    opt.run_capitulation = capitulate_flag;

    const char* cache_env = std::getenv("ACYC_CACHE_DIR");
    std::string cache_dir = cache_env ? cache_env : "";

    std::ofstream out;
    if (!out_path.empty()) out.open(out_path);
    std::mutex write_mutex;
    std::vector<Int> sigma_list;
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= ms.size()) return;
            const Int& m = ms[i];
            json j;
            try {
                std::string cache_file =
                    cache_dir.empty() ? "" : cache_dir + "/" + m.get_str() + ".json";
                bool cached = false;
                if (!cache_file.empty()) {
                    std::ifstream cf(cache_file);
                    if (cf) {
                        j = json::parse(cf);
                        cached = true;
                    }
                }
                if (!cached) {
                    if (!filter.empty()) {
                        CaseTag tag = classify(m);
                        if (filter != case_name(tag)) continue;
                    }
                    ResultRecord R = run_field(m, opt);
                    j = record_json(R);
                    if (!cache_file.empty()) {
                        std::ofstream cf(cache_file);
                        cf << j.dump() << "\n";
                    }
                }
            } catch (ambiguous_result&) {
                std::lock_guard<std::mutex> g(write_mutex);
                sigma_list.push_back(m);
                continue;
            } catch (std::exception& e) {
                std::lock_guard<std::mutex> g(write_mutex);
                std::cerr << "m=" << m << ": " << e.what() << "\n";
                continue;
            }
            std::lock_guard<std::mutex> g(write_mutex);
            if (out.is_open())
                out << j.dump() << "\n";
            else
                std::cout << j.dump() << "\n";
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    std::sort(sigma_list.begin(), sigma_list.end());
    std::cout << "ListSigma=[";
    for (size_t i = 0; i < sigma_list.size(); ++i) std::cout << (i ? "," : "") << sigma_list[i];
    std::cout << "]\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"first layer of the anti-cyclotomic Z3-extension of Q(sqrt(-m)) and capitulation"};
    app.require_subcommand(1);

    long m = 0, qmax = 100000, nu = 0;
    bool no_shortcut = false, cap = false, strict = false, json_out = false;
    std::string fixture, range, list, filter, out_path;
    unsigned jobs = 1;

    auto* c_classify = app.add_subcommand("classify", "arithmetic case of the mirror field");
    c_classify->add_option("-m", m, "squarefree m >= 5")->required();

    auto* c_tk = app.add_subcommand("tk", "ray class structure and the 3-ramification torsion");
    c_tk->add_option("-m", m)->required();
    c_tk->add_option("--nu", nu, "modulus exponent (default v3(Exp)+2)");

    auto* c_layer = app.add_subcommand("layer", "find the first anti-cyclotomic layer");
    c_layer->add_option("-m", m)->required();
    c_layer->add_option("--qmax", qmax, "largest auxiliary prime (default 1e5)");
    c_layer->add_flag("--no-shortcut", no_shortcut, "disable the unramified cyclic shortcut");
    c_layer->add_flag("--capitulate", cap, "also analyse capitulation in the layer");
    c_layer->add_flag("--strict-minkowski", strict, "unconditional class-group bound");
    c_layer->add_option("--fixture", fixture, "JSONL fixture file to compare against");
    c_layer->add_flag("--json", json_out, "machine-readable output");

    auto* c_cap = app.add_subcommand("capitulate", "layer search plus capitulation analysis");
    c_cap->add_option("-m", m)->required();
    c_cap->add_option("--qmax", qmax);
    c_cap->add_flag("--strict-minkowski", strict);
    c_cap->add_option("--fixture", fixture);
    c_cap->add_flag("--json", json_out);

    auto* c_batch = app.add_subcommand("batch", "process a range or list of m");
    c_batch->add_option("--range", range, "A..B");
    c_batch->add_option("--list", list, "comma separated m values");
    c_batch->add_option("--filter", filter,
                        "only fields of one case: non-split|normal-split|special-split|trivial");
    c_batch->add_option("--jobs", jobs, "worker threads");
    c_batch->add_option("--out", out_path, "JSONL output file");
    c_batch->add_option("--qmax", qmax);
    c_batch->add_flag("--capitulate", cap);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 2;
    }

    try {
        if (c_classify->parsed()) return run_classify(m);
        if (c_tk->parsed()) return run_tk(m, nu);
        if (c_layer->parsed())
            return run_layer(m, qmax, no_shortcut, cap, strict, fixture, json_out);
        if (c_cap->parsed()) return run_layer(m, qmax, no_shortcut, true, strict, fixture, json_out);
        if (c_batch->parsed()) return run_batch(range, list, filter, jobs, out_path, qmax, cap);
    } catch (ambiguous_result& e) {
        std::cerr << e.what() << "\n";
        return 5;
    } catch (bound_exceeded& e) {
        std::cerr << e.what() << "\n";
        return 4;
    } catch (arithmetic_error& e) {
        std::cerr << e.what() << "\n";
        std::string w = e.what();
        return w.find("inconsisten") != std::string::npos ? 6 : 3;
    } catch (std::exception& e) {
        std::cerr << e.what() << "\n";
        return 6;
    }
    return 2;
}
